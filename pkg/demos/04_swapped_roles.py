"""Swapping roles: spins hold the data and one photon measures their parity."""
import itertools

import numpy as np

from spinqec import InteractionModel, PureState, spin, state_fidelity
from spinqec.syndrome import correct_swapped_phases, distribution, measure_swapped

model = InteractionModel.ideal()
spins = tuple(spin(i) for i in range(4))
for bits in itertools.product((0, 1), repeat=4):
    d = distribution(measure_swapped(PureState.basis(spins, bits), model))
    print(bits, "H" if d[1] > 0.5 else "V")

# a 4-spin GHZ state has even parity: the probe leaves it alone up to phases
amps = np.zeros(16, complex)
amps[0] = amps[15] = 2 ** -0.5
ghz = PureState(spins, amps)
post = measure_swapped(ghz, model)[0].state
print("before correction:", round(state_fidelity(post, ghz), 6))
print("after correction: ", round(state_fidelity(correct_swapped_phases(post, model)
                                                 .normalized(), ghz), 6))
