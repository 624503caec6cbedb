"""Reflection off a QD-micropillar and the detuning that gives a quarter-turn phase.

A photon that couples to the trion sees r_h, one that does not sees the
empty-cavity r_0. The spin-conditional phase arg(r_h) - arg(r_0) is what the
syndrome protocol uses, and we want it at -pi/2.
"""
import numpy as np

from spinqec import CavitySystem, optimal_detuning, phase_difference, solve_detuning
from spinqec.cavity import reflection_cold, reflection_coupled

sys = CavitySystem.resonant(g=2.4, gamma=0.1)   # units of kappa

# magnitude and phase across the cavity line
delta = np.linspace(-4, 4, 9)
omega = sys.omega_c - delta
print(" delta   |r_h|   |r_0|   phase/pi")
for d, rh, r0, ph in zip(delta, reflection_coupled(sys, omega),
                         reflection_cold(sys, omega), phase_difference(sys, delta)):
    print(f"{d:6.2f}  {abs(rh):.4f}  {abs(r0):.4f}  {ph / np.pi:+.4f}")

# every detuning with phase = -pi/2; the default pick is the one nearest resonance
roots = solve_detuning(sys, -np.pi / 2)
print("\nroots:", np.round(roots, 6))
print("chosen:", round(optimal_detuning(sys), 6))

# weaker coupling moves the working point out and eventually loses it
for g in (1.2, 0.7, 0.3, 0.1):
    try:
        print(f"g={g}: delta_opt = {optimal_detuning(CavitySystem.resonant(g)):+.4f}")
    except Exception as exc:
        print(f"g={g}: {exc}")
