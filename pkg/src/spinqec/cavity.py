"""Reflection coefficients of a QD-micropillar system and the detuning solver.

All frequencies and rates are in units of the output-mode decay rate, so
``kappa`` is 1.0 unless a caller deliberately changes the normalisation.
The detuning is ``delta = omega_c - omega``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import NoRootInBracket

__all__ = [
    "CavitySystem",
    "ReflectionPair",
    "reflection_coupled",
    "reflection_cold",
    "reflection_pair",
    "phase_difference",
    "solve_detuning",
    "optimal_detuning",
    "is_strong_coupling",
    "wrap_phase",
    "scan_roots",
]


@dataclass(frozen=True)
class CavitySystem:
    """Physical parameters of one quantum dot inside a single-sided micropillar.

    Attributes
    ----------
    omega_c : float
        Cavity resonance frequency.
    omega_X : float
        Trion transition frequency.
    g : float
        QD-cavity coupling strength.
    kappa : float
        Decay rate into the output mode; the frequency unit.
    kappa_s : float
        Decay rate into lossy side modes.
    gamma : float
        Trion dipole decay rate.
    """

    omega_c: float = 0.0
    omega_X: float = 0.0
    g: float = 0.0
    kappa: float = 1.0
    kappa_s: float = 0.0
    gamma: float = 0.1

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not self.g >= 0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if not self.kappa_s >= 0:
            raise ValueError(f"kappa_s must be non-negative, got {self.kappa_s}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @classmethod
    def resonant(cls, g, gamma=0.1, kappa_s=0.0, omega=0.0, kappa=1.0):
        """System whose cavity and trion frequencies coincide at ``omega``."""
        return cls(omega_c=omega, omega_X=omega, g=g, kappa=kappa,
                   kappa_s=kappa_s, gamma=gamma)

    @property
    def is_resonant(self) -> bool:
        return self.omega_c == self.omega_X

    def cold(self) -> "CavitySystem":
        """The same cavity with the dot decoupled."""
        return replace(self, g=0.0)

    def shifted(self, omega) -> "CavitySystem":
        """Resonant copy centred on ``omega`` (cavity and trion move together)."""
        return replace(self, omega_c=omega, omega_X=omega)


@dataclass(frozen=True)
class ReflectionPair:
    r_coupled: complex
    r_cold: complex

    @property
    def phase_difference(self) -> float:
        return float(np.angle(self.r_coupled * np.conj(self.r_cold)))


def _scalar_or_array(x):
    x = np.asarray(x)
    return x[()] if x.ndim == 0 else x


def reflection_coupled(sys: CavitySystem, omega):
    """Reflection amplitude when the photon couples to the dot.

    Accepts scalar or array ``omega``; no approximation beyond complex
    floating-point arithmetic.
    """
    omega = np.asarray(omega, dtype=float)
    dipole = 1j * (sys.omega_X - omega) + sys.gamma / 2
    cav = 1j * (sys.omega_c - omega) + sys.kappa_s / 2
    g2 = sys.g * sys.g
    r = (dipole * (cav - sys.kappa / 2) + g2) / (dipole * (cav + sys.kappa / 2) + g2)
    return _scalar_or_array(r)


def reflection_cold(sys: CavitySystem, omega):
    """Reflection amplitude of the empty cavity (no dot coupling)."""
    omega = np.asarray(omega, dtype=float)
    cav = 1j * (sys.omega_c - omega) + sys.kappa_s / 2
    r = (cav - sys.kappa / 2) / (cav + sys.kappa / 2)
    return _scalar_or_array(r)


def reflection_pair(sys: CavitySystem, omega) -> ReflectionPair:
    return ReflectionPair(complex(reflection_coupled(sys, omega)),
                          complex(reflection_cold(sys, omega)))


def wrap_phase(phi):
    """Principal value of an angle in (-pi, pi]."""
    phi = np.asarray(phi, dtype=float)
    return _scalar_or_array(np.pi - np.mod(np.pi - phi, 2 * np.pi))


def phase_difference(sys: CavitySystem, delta):
    """``arg(r_h) - arg(r_0)`` at detuning ``delta = omega_c - omega``, wrapped."""
    omega = sys.omega_c - np.asarray(delta, dtype=float)
    rh = reflection_coupled(sys, omega)
    r0 = reflection_cold(sys, omega)
    return wrap_phase(np.angle(rh) - np.angle(r0))


def is_strong_coupling(sys: CavitySystem) -> bool:
    return sys.g > (sys.kappa + sys.kappa_s) / 4


def default_bracket(sys: CavitySystem) -> tuple[float, float]:
    half = 5 * sys.kappa * max(1.0, sys.g / sys.kappa)
    return -half, half


def scan_roots(residual, lo, hi, n_scan=4096, xtol=1e-15):
    """All roots of a wrapped-phase residual on ``[lo, hi]``.

    ``residual`` must be vectorised and return angles wrapped to (-pi, pi].
    Sign changes whose endpoint values differ by more than pi are branch-cut
    jumps of the wrapped angle, not roots, and are skipped.
    """
    grid = np.linspace(lo, hi, n_scan)
    vals = residual(grid)
    roots = list(grid[vals == 0.0])
    a, b = vals[:-1], vals[1:]
    cells = np.nonzero((np.sign(a) * np.sign(b) < 0) & (np.abs(a - b) < np.pi))[0]

    def scalar(x):
        return float(residual(np.array([x]))[0])

    for i in cells:
        roots.append(brentq(scalar, grid[i], grid[i + 1], xtol=xtol,
                            rtol=4 * np.finfo(float).eps, maxiter=500))
    roots.sort()
    # neighbouring cells can converge onto the same root
    dedup = []
    for r in roots:
        if not dedup or abs(r - dedup[-1]) > 1e-9 * max(1.0, abs(r)):
            dedup.append(r)
    return dedup


def solve_detuning(sys: CavitySystem, target: float, bracket=None,
                   n_scan: int = 4096) -> list[float]:
    """Detunings at which the conditional phase equals ``target``.

    Parameters
    ----------
    sys : CavitySystem
    target : float
        Desired value of ``phase_difference`` in radians, in (-pi, pi].
    bracket : (float, float), optional
        Search interval for ``delta``. Defaults to
        ``+-5 kappa max(1, g/kappa)``.
    n_scan : int
        Number of coarse grid points used to locate sign changes.

    Returns
    -------
    list of float
        Sorted roots, each refined by bracketed root finding.

    Raises
    ------
    NoRootInBracket
        If the scan finds no sign change.
    """
    lo, hi = default_bracket(sys) if bracket is None else bracket
    roots = scan_roots(lambda d: wrap_phase(phase_difference(sys, d) - target),
                       lo, hi, n_scan)
    if not roots:
        raise NoRootInBracket(
            f"phase difference never reaches {target:.6g} rad for "
            f"delta in [{lo:.6g}, {hi:.6g}] (g={sys.g}, gamma={sys.gamma}, "
            f"kappa_s={sys.kappa_s})")
    return roots


def optimal_detuning(sys: CavitySystem, target: float = -np.pi / 2,
                     choose: str = "smallest", **kwargs) -> float:
    """Pick one root of :func:`solve_detuning`.

    ``choose`` is ``"smallest"`` (smallest ``|delta|``, the default),
    ``"largest"``, ``"positive"`` or ``"negative"``.
    """
    roots = solve_detuning(sys, target, **kwargs)
    if choose == "smallest":
        return min(roots, key=abs)
    if choose == "largest":
        return max(roots, key=abs)
    if choose in ("positive", "negative"):
        side = [r for r in roots if (r > 0) == (choose == "positive")]
        if not side:
            raise NoRootInBracket(f"no {choose} root for target {target}")
        return min(side, key=abs)
    raise ValueError(f"unknown root selection {choose!r}")
