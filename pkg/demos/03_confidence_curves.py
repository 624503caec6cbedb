"""How much to trust a syndrome readout when the detuning drifts.

Confidence is the chance that the stabilizer really has the value the spin
reported. Plaquettes see bit flips and stars see phase flips at rate p*.
"""
import numpy as np

from spinqec import InteractionModel, build_planar, confidence_sweep
from spinqec.cavity import CavitySystem

lat = build_planar(2)
deltas = np.linspace(0.1, 1.5, 15)
for g in (1.2, 2.4):
    model = InteractionModel.physical(CavitySystem.resonant(g))
    res = confidence_sweep(lat, model, deltas, p_stars=(0.05,))
    print(f"g = {g}, optimum delta = {model.delta:.4f}")
    print("  delta    conf(+)   conf(-)")
    plus = res["confidence"][res["readout"] == 1]
    minus = res["confidence"][res["readout"] == -1]
    for d, a, b in zip(deltas, plus, minus):
        print(f"  {d:5.2f}  {a:.6f}  {b:.6f}")

# the star curve is the plaquette curve with X and Z errors swapped
res = confidence_sweep(lat, model, deltas, (0.05,), stab_kind="star")
print("\nstar equals plaquette:", np.allclose(
    res["confidence"],
    confidence_sweep(lat, model, deltas, (0.05,))["confidence"]))
