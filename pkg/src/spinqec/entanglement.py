"""Heralded entanglement of two QD spins with dissimilar transition energies.

An H-polarised probe reflects off spin 1's cavity and then spin 2's. In the
V-detection branch the spins are left in

    A (|up up> - |down down>) + B (|up down> - |down up>)

with ``A = r_h1 r_h2 - r_01 r_02`` and ``B = r_h1 r_02 - r_01 r_h2``. Tuning
the probe so the two conditional phases are opposite kills ``A``
(antisymmetric mode); equal phases kill ``B`` (symmetric mode).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cavity import (CavitySystem, optimal_detuning, phase_difference,
                     reflection_cold, reflection_coupled, scan_roots,
                     wrap_phase)
from .errors import Indeterminate, InvalidTime, NoRootInBracket
from .quantum import (KET_H, KET_PLUS, KET_V, PAULI_X, PAULI_Z, PureState,
                      apply_single_qubit, apply_two_qubit_diagonal, photon,
                      project_qubit, spin, state_fidelity, tensor_product)
from .sweeps import SweepResult
from .syndrome import ZERO_PROBABILITY

# V-herald probability for two identical lossless systems at |phase| = pi/2
ETA_MAX = 0.5


class EntanglementMode(str, Enum):
    ANTISYMMETRIC = "antisymmetric"
    SYMMETRIC = "symmetric"


TARGETS = {
    EntanglementMode.ANTISYMMETRIC: np.array([0, 1, -1, 0]) / np.sqrt(2),
    EntanglementMode.SYMMETRIC: np.array([1, 0, 0, -1]) / np.sqrt(2),
}


def target_state(mode, labels=(spin(0), spin(1))) -> PureState:
    return PureState(tuple(labels), TARGETS[EntanglementMode(mode)].astype(complex))


@dataclass(frozen=True)
class QDPair:
    """Two resonant QD-cavity systems probed by the same photon."""

    sys1: CavitySystem
    sys2: CavitySystem

    def __post_init__(self):
        if self.sys1.kappa != self.sys2.kappa:
            raise ValueError("both systems must share the kappa normalisation")

    @property
    def delta_energy(self) -> float:
        return self.sys1.omega_X - self.sys2.omega_X

    @property
    def midpoint(self) -> float:
        return (self.sys1.omega_X + self.sys2.omega_X) / 2

    @classmethod
    def from_detuning(cls, delta_energy, g=2.4, gamma1=0.1, gamma2=None,
                      kappa_s=0.0, g2=None, kappa_s2=None):
        """Pair centred on zero with transitions at ``+-delta_energy/2``."""
        sys1 = CavitySystem.resonant(g, gamma1, kappa_s, omega=delta_energy / 2)
        sys2 = CavitySystem.resonant(g if g2 is None else g2,
                                     gamma1 if gamma2 is None else gamma2,
                                     kappa_s if kappa_s2 is None else kappa_s2,
                                     omega=-delta_energy / 2)
        return cls(sys1, sys2)

    def with_detuning(self, delta_energy) -> "QDPair":
        return QDPair(self.sys1.shifted(delta_energy / 2),
                      self.sys2.shifted(-delta_energy / 2))

    def swapped(self) -> "QDPair":
        return QDPair(self.sys2, self.sys1)

    def phases(self, omega):
        """Conditional phases of both systems at probe frequency ``omega``."""
        return (phase_difference(self.sys1, self.sys1.omega_c - omega),
                phase_difference(self.sys2, self.sys2.omega_c - omega))

    def reflections(self, omega):
        """``((r_h1, r_01), (r_h2, r_02))`` at ``omega``."""
        return tuple((complex(reflection_coupled(s, omega)),
                      complex(reflection_cold(s, omega)))
                     for s in (self.sys1, self.sys2))


@dataclass(frozen=True)
class EntanglementResult:
    probe_frequency: float
    efficiency: float
    fidelity: float
    heralded_state: PureState | None
    mode: EntanglementMode = EntanglementMode.ANTISYMMETRIC
    p_horizontal: float = 0.0

    @property
    def loss(self) -> float:
        return max(0.0, 1.0 - self.efficiency - self.p_horizontal)


def solve_probe_frequency(pair: QDPair, mode=EntanglementMode.ANTISYMMETRIC,
                          bracket=None, n_scan: int = 8192,
                          min_phase: float = 1e-6) -> float:
    """Probe frequency with opposite (antisymmetric) or equal (symmetric) phases.

    Roots where the conditional phase is 0 or pi are discarded: there the
    reflection does not distinguish the spin states and nothing is heralded.
    Among the rest, the root closest to the midpoint of the two transition
    frequencies is returned.
    """
    mode = EntanglementMode(mode)
    sign = 1.0 if mode is EntanglementMode.ANTISYMMETRIC else -1.0
    if bracket is None:
        half = 5 * max(1.0, pair.sys1.g, pair.sys2.g)
        lo = min(pair.sys1.omega_X, pair.sys2.omega_X) - half
        hi = max(pair.sys1.omega_X, pair.sys2.omega_X) + half
    else:
        lo, hi = bracket

    def residual(omega):
        p1, p2 = pair.phases(omega)
        return wrap_phase(p1 + sign * p2)

    if mode is EntanglementMode.SYMMETRIC:
        grid = np.linspace(lo, hi, n_scan)
        if np.max(np.abs(residual(grid))) < 1e-12:
            # identical systems: every frequency works, take |phase| = pi/2
            delta = optimal_detuning(pair.sys1, -np.pi / 2)
            return float(pair.sys1.omega_c - delta)

    roots = [w for w in scan_roots(residual, lo, hi, n_scan)
             if abs(np.sin(pair.phases(w)[0])) > min_phase]
    if not roots:
        raise NoRootInBracket(
            f"no non-trivial {mode.value} probe frequency in [{lo:.4g}, {hi:.4g}] "
            f"for delta_energy={pair.delta_energy:.4g}")
    mid = pair.midpoint
    return float(min(roots, key=lambda w: (abs(w - mid), w)))


def herald_pair(refl1, refl2, mode=EntanglementMode.ANTISYMMETRIC,
                probe_frequency=float("nan")) -> EntanglementResult:
    """State-vector simulation of the probe/herald sequence.

    ``refl1`` and ``refl2`` are ``(r_h, r_0)`` for each system.
    """
    mode = EntanglementMode(mode)
    probe, s1, s2 = photon(0), spin(0), spin(1)
    st = tensor_product(PureState((probe,), KET_H),
                        PureState.product((s1, s2), (KET_PLUS, KET_PLUS)))
    for s, (rh, r0) in ((s1, refl1), (s2, refl2)):
        st = apply_two_qubit_diagonal(st, probe, s, (rh, r0, r0, rh))
    h_branch = project_qubit(st, probe, KET_H)
    v_branch = project_qubit(st, probe, KET_V)
    eta = v_branch.norm_squared
    if eta < ZERO_PROBABILITY:
        # below this the herald is rounding noise, not a physical event
        return EntanglementResult(probe_frequency, 0.0, float("nan"), None, mode,
                                  h_branch.norm_squared)
    heralded = v_branch.normalized()
    fid = state_fidelity(heralded, target_state(mode, heralded.labels))
    return EntanglementResult(probe_frequency, eta, fid, heralded, mode,
                              h_branch.norm_squared)


def entangle_pair(pair: QDPair, omega: float,
                  mode=EntanglementMode.ANTISYMMETRIC) -> EntanglementResult:
    """Herald an entangled spin pair with a probe at frequency ``omega``."""
    refl1, refl2 = pair.reflections(omega)
    return herald_pair(refl1, refl2, mode, float(omega))


def fidelity_formula(r_h1, r_01, r_h2, r_02,
                     mode=EntanglementMode.ANTISYMMETRIC) -> float:
    """Closed-form fidelity of the V-heralded pair to the mode's target state."""
    same = abs(r_h1 * r_h2 - r_01 * r_02) ** 2
    cross = abs(r_h1 * r_02 - r_01 * r_h2) ** 2
    if same < 1e-300 and cross < 1e-300:
        raise Indeterminate("neither system imprints a spin-dependent phase")
    wanted = cross if EntanglementMode(mode) is EntanglementMode.ANTISYMMETRIC else same
    return float(wanted / (same + cross))


def efficiency_sweep(template: QDPair, delta_range,
                     mode=EntanglementMode.ANTISYMMETRIC) -> SweepResult:
    """Heralded efficiency and fidelity across transition-energy detunings.

    Points without a usable probe frequency are kept as gap rows (NaN values,
    ``gap`` set) so the grid stays rectangular.
    """
    delta_range = np.asarray(delta_range, dtype=float)
    if delta_range.size == 0:
        raise ValueError("empty detuning range")
    rows = {k: np.full(delta_range.size, np.nan)
            for k in ("probe_frequency", "eta", "eta_ratio", "fidelity")}
    gap = np.zeros(delta_range.size, dtype=bool)
    for i, d in enumerate(delta_range):
        pair = template.with_detuning(d)
        try:
            omega = solve_probe_frequency(pair, mode)
        except NoRootInBracket:
            gap[i] = True
            continue
        res = entangle_pair(pair, omega, mode)
        rows["probe_frequency"][i] = omega
        rows["eta"][i] = res.efficiency
        rows["eta_ratio"][i] = res.efficiency / ETA_MAX
        rows["fidelity"][i] = res.fidelity
    return SweepResult({"delta_energy": delta_range, **rows, "gap": gap})


@dataclass(frozen=True)
class FourSpinResult:
    state: PureState
    herald_probability: float
    stage_probabilities: tuple
    corrections: tuple          # (spin label, "X" | "Z")
    corrected_state: PureState
    ghz_fidelity: float


GHZ4 = PureState(tuple(spin(i) for i in range(4)),
                 (np.eye(16)[0] + np.eye(16)[15]) / np.sqrt(2))


def _ghz_corrections(state: PureState):
    amps = state.amplitudes
    n = state.num_qubits
    b = int(np.argmax(np.abs(amps)))
    bc = b ^ (2 ** n - 1)
    corrections = [(state.labels[k], "X") for k in range(n) if (b >> (n - 1 - k)) & 1]
    if np.real(amps[bc] * np.conj(amps[b])) < 0:
        corrections.append((state.labels[0], "Z"))
    out = state
    for label, p in corrections:
        out = apply_single_qubit(out, label, PAULI_X if p == "X" else PAULI_Z)
    return tuple(corrections), out


def merge_pairs(state_a: PureState, state_b: PureState, refl1, refl2):
    """Probe one spin from each pair (last of ``a``, first of ``b``) and herald V.

    Returns the normalised 4-spin state and the conditional herald probability.
    """
    a = PureState((spin(0), spin(1)), state_a.amplitudes)
    b = PureState((spin(2), spin(3)), state_b.amplitudes)
    probe = photon(0)
    st = tensor_product(PureState((probe,), KET_H), tensor_product(a, b))
    for s, (rh, r0) in ((spin(1), refl1), (spin(2), refl2)):
        st = apply_two_qubit_diagonal(st, probe, s, (rh, r0, r0, rh))
    branch = project_qubit(st, probe, KET_V)
    p = branch.norm_squared
    if p < ZERO_PROBABILITY:
        raise Indeterminate("merge herald has zero probability")
    return branch.normalized(), p


def entangle_four(pair_a: EntanglementResult, pair_b: EntanglementResult,
                  merge: QDPair | tuple, omega: float | None = None,
                  mode=EntanglementMode.ANTISYMMETRIC) -> FourSpinResult:
    """Fuse two heralded pairs into a GHZ-class four-spin state.

    ``merge`` is either a :class:`QDPair` (probe frequency solved if
    ``omega`` is None) or explicit ``((r_h1, r_01), (r_h2, r_02))``.
    """
    if pair_a.heralded_state is None or pair_b.heralded_state is None:
        raise ValueError("both input pairs must carry a heralded state")
    if isinstance(merge, QDPair):
        if omega is None:
            omega = solve_probe_frequency(merge, mode)
        refl1, refl2 = merge.reflections(omega)
    else:
        refl1, refl2 = merge
    state, p_merge = merge_pairs(pair_a.heralded_state, pair_b.heralded_state,
                                 refl1, refl2)
    stages = (pair_a.efficiency, pair_b.efficiency, p_merge)
    corrections, corrected = _ghz_corrections(state)
    return FourSpinResult(state, float(np.prod(stages)), stages, corrections,
                          corrected, state_fidelity(corrected, GHZ4))


def decoherence_factor(t: float, T2: float, n: int = 1) -> float:
    """Fidelity reduction ``(1 + exp(-n t / T2)) / 2`` for an n-spin register."""
    if not t >= 0:
        raise InvalidTime(f"interaction time must be non-negative, got {t}")
    if not T2 > 0:
        raise InvalidTime(f"T2 must be positive, got {T2}")
    if int(n) != n or n < 1:
        raise InvalidTime(f"register size must be a positive integer, got {n}")
    return float((1 + np.exp(-n * t / T2)) / 2)
