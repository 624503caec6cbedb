"""Sampled syndrome statistics against the exact readout probabilities."""
import numpy as np

from spinqec import InteractionModel, PauliChannel, build_planar
from spinqec.cavity import CavitySystem
from spinqec.syndrome import outcome_probabilities, sample_syndromes

lat = build_planar(3)
channel = PauliChannel(0.05 / 3, 0.05 / 3, 0.05 / 3)
model = InteractionModel.physical(CavitySystem.resonant(2.4, kappa_s=0.05))
shots = 20000
tally = sample_syndromes(lat, channel, model, shots, seed=7)
print(" stab  w   -1 rate (MC)   exact     sigma    loss")
for rec, s in zip(tally.records(), tally.stabilizers):
    q = outcome_probabilities(lat, channel, model, stabilizer=s)[-1]
    sig = np.sqrt(q * (1 - q) / shots)
    print(f"  {rec['stab_id']:3s}  {rec['weight']}   {rec['minus'] / shots:.5f}"
          f"      {q:.5f}  {(rec['minus'] / shots - q) / sig:+.2f}   {rec['heralded_loss']}")
