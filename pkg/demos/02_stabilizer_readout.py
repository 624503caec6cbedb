"""Spin-ancilla readout of plaquette and star operators on a small planar code."""
import itertools

from spinqec import (InteractionModel, PureState, build_planar, measure_stabilizer,
                     quiescent_state, state_fidelity)
from spinqec.cavity import CavitySystem
from spinqec.syndrome import distribution

lat = build_planar(3)
print(f"d=3 planar code: {lat.num_qubits} photons, "
      f"{len(lat.stars)} stars, {len(lat.plaquettes)} plaquettes")
for s in lat.stabilizers:
    print(f"  {s.name}: weight {s.weight}, qubits {[q.index for q in s.support]}")

# with ideal quarter-turn phases the spin reports the parity exactly
ideal = InteractionModel.ideal()
p = lat.find("plaquette", 4)
print("\nparity law on", p.name)
for bits in itertools.product((0, 1), repeat=4):
    st = PureState.basis(p.support, bits)
    dist = distribution(measure_stabilizer(st, None, p, ideal))
    print(f"  {bits} -> P(+1) = {dist[1]:.3f}")

# the quiescent state survives every measurement untouched
psi = quiescent_state(lat)
worst = min(state_fidelity(measure_stabilizer(psi, lat, s, ideal)[0].state, psi)
            for s in lat.stabilizers)
print(f"\nquiescent state fidelity after each readout: min {worst:.12f}")

# a real cavity with side losses leaks some probability as a heralded loss
lossy = InteractionModel.physical(CavitySystem.resonant(2.4, kappa_s=0.2))
outs = measure_stabilizer(psi, lat, p, lossy)
for o in outs:
    label = "loss" if o.heralded_loss else f"{o.value:+d}"
    print(f"  {label}: {o.probability:.5f} ({o.readout_basis} basis)")
