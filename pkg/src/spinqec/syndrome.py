"""Spin-photon stabilizer measurement protocols.

Data photons (``|L> = |0>``, ``|R> = |1>``) reflect one at a time off a
cavity holding a single electron spin. The spin-dependent selection rules
give the diagonal two-qubit map

    (L up, L down, R up, R down) -> (r_h, r_0, r_0, r_h)

so each photon of a given polarisation rotates the spin's relative phase by
``-+phi``. After a full star or plaquette the spin's relative phase encodes
the parity of the support, and a single spin read-out gives the syndrome.

Read-out basis depends on the support weight: with conditional phase
``s * pi/2`` an even-parity support leaves the spin in
``(|up> + exp(-i w s pi/2) |down>)/sqrt(2)``, i.e. an X eigenstate for
weight 4 and a Y eigenstate for weight 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .cavity import (CavitySystem, optimal_detuning, phase_difference,
                     reflection_cold, reflection_coupled)
from .errors import (BadRegisterSize, UnknownSupport, WeightMismatch,
                     ZeroProbabilityReadout)
from .lattice import (StabilizerKind, StabilizerRecord, SurfaceCodeLattice,
                      quiescent_state, stabilizer_expectation)
from .quantum import (HADAMARD, KET_H, KET_MINUS, KET_PLUS, KET_V, KET_YMINUS,
                      KET_YPLUS, PAULI_X, PAULI_Z, DensityOperator, PauliChannel,
                      PureState, QubitKind, apply_pauli_channel,
                      apply_single_qubit, apply_two_qubit_diagonal,
                      partial_trace, photon, project_qubit, spin,
                      tensor_product)

# below this fraction of the input weight a read-out branch counts as empty
ZERO_PROBABILITY = 1e-14


class InteractionMode(str, Enum):
    IDEAL = "ideal"
    PHYSICAL = "physical"


@dataclass(frozen=True)
class InteractionModel:
    """How a photon reflection acts on the (photon, spin) pair.

    ``IDEAL`` assumes unit-modulus reflections with a conditional phase of
    exactly ``phase_sign * pi/2`` on top of a common cold-cavity phase.
    ``PHYSICAL`` evaluates the cavity reflection amplitudes at ``delta``;
    ``phase_sign`` then only fixes which read-out basis labels are used and
    defaults to the sign of the conditional phase at ``delta``.
    """

    mode: InteractionMode = InteractionMode.IDEAL
    system: CavitySystem | None = None
    delta: float | None = None
    phase_sign: int | None = None
    cold_phase: float = 0.0

    def __post_init__(self):
        mode = InteractionMode(self.mode)
        object.__setattr__(self, "mode", mode)
        if mode is InteractionMode.PHYSICAL:
            if self.system is None or self.delta is None:
                raise ValueError("physical model needs a cavity system and a detuning")
            phi = float(phase_difference(self.system, self.delta))
            if phi == 0.0:
                raise ValueError(
                    f"no conditional phase at delta={self.delta}: the reflection "
                    "does not depend on the spin")
            if self.phase_sign is None:
                object.__setattr__(self, "phase_sign", 1 if phi > 0 else -1)
        elif self.phase_sign is None:
            object.__setattr__(self, "phase_sign", 1)
        if self.phase_sign not in (1, -1):
            raise ValueError(f"phase_sign must be +1 or -1, got {self.phase_sign}")

    @classmethod
    def ideal(cls, phase_sign: int = 1, cold_phase: float = 0.0):
        return cls(InteractionMode.IDEAL, phase_sign=phase_sign, cold_phase=cold_phase)

    @classmethod
    def physical(cls, system: CavitySystem, delta=None, target=-np.pi / 2,
                 choose="smallest", phase_sign=None):
        """Physical model; solves for ``delta`` (phase = ``target``) if omitted."""
        if delta is None:
            delta = optimal_detuning(system, target, choose=choose)
            if phase_sign is None:
                phase_sign = 1 if target > 0 else -1
        return cls(InteractionMode.PHYSICAL, system=system, delta=float(delta),
                   phase_sign=phase_sign)

    @property
    def conditional_phase(self) -> float:
        if self.mode is InteractionMode.IDEAL:
            return self.phase_sign * np.pi / 2
        return float(phase_difference(self.system, self.delta))

    @property
    def reflections(self) -> tuple[complex, complex]:
        """``(r_h, r_0)`` for this model."""
        if self.mode is InteractionMode.IDEAL:
            r0 = np.exp(1j * self.cold_phase)
            return complex(r0 * np.exp(1j * self.phase_sign * np.pi / 2)), complex(r0)
        omega = self.system.omega_c - self.delta
        return (complex(reflection_coupled(self.system, omega)),
                complex(reflection_cold(self.system, omega)))

    def at(self, delta) -> "InteractionModel":
        """Same physical system and read-out labelling, different detuning."""
        return InteractionModel(InteractionMode.PHYSICAL, self.system, float(delta),
                                self.phase_sign)


def interaction_coefficients(model: InteractionModel) -> np.ndarray:
    """Coefficients for ``(L up, L down, R up, R down)``."""
    rh, r0 = model.reflections
    return np.array([rh, r0, r0, rh], dtype=complex)


@dataclass(frozen=True)
class SyndromeOutcome:
    """One branch of a syndrome measurement.

    ``value`` is +1/-1, or 0 for the heralded-loss branch (whose ``state`` is
    always ``None``).
    """

    value: int
    readout_basis: str
    heralded_loss: bool
    probability: float
    state: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not -1e-12 <= self.probability <= 1 + 1e-12:
            raise ValueError(f"probability {self.probability} outside [0, 1]")


def distribution(outcomes) -> dict:
    """``{+1: p, -1: p, "loss": p}`` from a list of outcomes."""
    dist = {1: 0.0, -1: 0.0, "loss": 0.0}
    for o in outcomes:
        dist["loss" if o.heralded_loss else o.value] += o.probability
    return dist


def _spin_ket(initial_spin: str) -> np.ndarray:
    if initial_spin not in ("+", "-"):
        raise ValueError(f"initial spin must be '+' or '-', got {initial_spin!r}")
    return KET_PLUS if initial_spin == "+" else KET_MINUS


def readout_kets(weight: int, phase_sign: int, initial_spin: str = "+"):
    """Spin basis ``(basis name, ket for +1, ket for -1)`` for a support weight."""
    quarter_turns = (-weight * phase_sign + (2 if initial_spin == "-" else 0)) % 4
    return {
        0: ("X", KET_PLUS, KET_MINUS),
        2: ("X", KET_MINUS, KET_PLUS),
        1: ("Y", KET_YPLUS, KET_YMINUS),
        3: ("Y", KET_YMINUS, KET_YPLUS),
    }[quarter_turns]


def _free_spin_label(state):
    used = {l.index for l in state.labels if l.kind is QubitKind.SPIN}
    return spin(next(i for i in range(len(used) + 1) if i not in used))


def _run_protocol(state, support, model: InteractionModel, hadamard: bool,
                  initial_spin: str):
    """Shared ancilla pipeline; returns outcome branches (unnormalised)."""
    support = tuple(sorted(support, key=lambda l: l.index))
    for label in support:
        if label not in state.labels:
            raise UnknownSupport(f"support qubit {label} not in the state")
    ancilla = _free_spin_label(state)
    spin_state = PureState((ancilla,), _spin_ket(initial_spin))
    if isinstance(state, DensityOperator):
        spin_state = spin_state.to_density()
    st = tensor_product(state, spin_state)
    if hadamard:
        for q in support:
            st = apply_single_qubit(st, q, HADAMARD)
    coeffs = interaction_coefficients(model)
    for q in support:
        st = apply_two_qubit_diagonal(st, q, ancilla, coeffs)
    # |R> -> exp(i phi) |R> makes the L/R phase imprint common to both
    correction = np.diag([1.0, np.exp(1j * model.conditional_phase)])
    for q in support:
        st = apply_single_qubit(st, q, correction)
    if hadamard:
        for q in support:
            st = apply_single_qubit(st, q, HADAMARD)
    basis, ket_plus, ket_minus = readout_kets(len(support), model.phase_sign,
                                              initial_spin)
    return basis, [(+1, project_qubit(st, ancilla, ket_plus)),
                   (-1, project_qubit(st, ancilla, ket_minus))]


def _branches_to_outcomes(state, basis, branches, model):
    total = state.norm_squared
    outcomes = []
    kept = 0.0
    for value, branch in branches:
        p = branch.norm_squared
        kept += p
        post = branch.normalized() if p > ZERO_PROBABILITY * total else None
        outcomes.append(SyndromeOutcome(value, basis, False, p, post))
    if model.mode is InteractionMode.PHYSICAL:
        outcomes.append(SyndromeOutcome(0, basis, True, max(0.0, total - kept)))
    return outcomes


def _check_stabilizer(lattice, stab, kind=None, weight=None):
    if kind is not None and stab.kind is not kind:
        raise ValueError(f"expected a {kind.value}, got a {stab.kind.value}")
    if weight is not None and stab.weight != weight:
        raise WeightMismatch(
            f"{stab.name} has weight {stab.weight}, this protocol needs {weight}")
    if lattice is not None:
        missing = [l for l in stab.support if l not in lattice.data_qubits]
        if missing:
            raise UnknownSupport(f"{missing} not data qubits of the lattice")


def measure_plaquette(state, lattice, p: StabilizerRecord, model: InteractionModel,
                      initial_spin: str = "+") -> list[SyndromeOutcome]:
    """Weight-4 Z-parity measurement with a spin ancilla read out in X."""
    _check_stabilizer(lattice, p, StabilizerKind.PLAQUETTE, 4)
    basis, branches = _run_protocol(state, p.support, model, False, initial_spin)
    return _branches_to_outcomes(state, basis, branches, model)


def measure_star(state, lattice, s: StabilizerRecord, model: InteractionModel,
                 initial_spin: str = "+") -> list[SyndromeOutcome]:
    """Weight-4 X-parity measurement: Hadamards wrap the plaquette pipeline."""
    _check_stabilizer(lattice, s, StabilizerKind.STAR, 4)
    basis, branches = _run_protocol(state, s.support, model, True, initial_spin)
    return _branches_to_outcomes(state, basis, branches, model)


def measure_boundary(state, lattice, stab: StabilizerRecord, model: InteractionModel,
                     initial_spin: str = "+") -> list[SyndromeOutcome]:
    """Weight-3 boundary operator (star or plaquette); spin read out in Y."""
    _check_stabilizer(lattice, stab, None, 3)
    hadamard = stab.kind is StabilizerKind.STAR
    basis, branches = _run_protocol(state, stab.support, model, hadamard, initial_spin)
    return _branches_to_outcomes(state, basis, branches, model)


def measure_stabilizer(state, lattice, stab: StabilizerRecord, model: InteractionModel,
                       initial_spin: str = "+") -> list[SyndromeOutcome]:
    """Dispatch on kind and weight."""
    if stab.weight == 3:
        return measure_boundary(state, lattice, stab, model, initial_spin)
    if stab.kind is StabilizerKind.STAR:
        return measure_star(state, lattice, stab, model, initial_spin)
    return measure_plaquette(state, lattice, stab, model, initial_spin)


# --- photon as the measure qubit -------------------------------------------------

def _probe_label(state):
    used = {l.index for l in state.labels if l.kind is QubitKind.PHOTON}
    return photon(next(i for i in range(len(used) + 1) if i not in used))


def measure_swapped(spins_state: PureState, model: InteractionModel) -> list[SyndromeOutcome]:
    """Spins as data, one H-polarised probe photon as the measure qubit.

    The probe reflects off every spin's cavity in register order; H (V)
    detection signals +1 (-1). For odd weight a polarisation-dependent phase
    on ``|R>`` rotates the probe back onto the H/V basis before detection.
    Post-states still carry the per-spin phase imprint; see
    :func:`correct_swapped_phases`.
    """
    w = spins_state.num_qubits
    if w not in (3, 4):
        raise BadRegisterSize(f"swapped protocol needs 3 or 4 spins, got {w}")
    probe = _probe_label(spins_state)
    st = tensor_product(spins_state, PureState((probe,), KET_H))
    coeffs = interaction_coefficients(model)
    for s in spins_state.labels:
        st = apply_two_qubit_diagonal(st, probe, s, coeffs)
    phase = (w * model.phase_sign * np.pi / 2) % (2 * np.pi)
    if phase:
        st = apply_single_qubit(st, probe, np.diag([1.0, np.exp(1j * phase)]))
    branches = [(+1, project_qubit(st, probe, KET_H)),
                (-1, project_qubit(st, probe, KET_V))]
    return _branches_to_outcomes(spins_state, "PhotonHV", branches, model)


def correct_swapped_phases(spins_state, model: InteractionModel):
    """Reflect an ``|R>`` photon off each spin to equalise eigenstate phases.

    Spin up picks up ``r_0`` and spin down ``r_h``, which cancels the
    ``r_h``/``r_0`` imprint left by the probe's L component.
    """
    rh, r0 = model.reflections
    out = spins_state
    for s in spins_state.labels:
        out = apply_single_qubit(out, s, np.diag([r0, rh]))
    return out


# --- confidence -----------------------------------------------------------------

@lru_cache(maxsize=64)
def _quiescent_support(lattice: SurfaceCodeLattice, support: tuple) -> DensityOperator:
    return partial_trace(quiescent_state(lattice), support)


def _channel_on_support(lattice, stab, channel) -> DensityOperator:
    rho = _quiescent_support(lattice, tuple(sorted(stab.support, key=lambda l: l.index)))
    for q in stab.support:
        rho = apply_pauli_channel(rho, q, channel)
    return rho


def _select(lattice, stab_kind, stabilizer, weight):
    if stabilizer is not None:
        return stabilizer
    return lattice.find(stab_kind, weight)


def readout_branches(lattice: SurfaceCodeLattice, channel: PauliChannel,
                     model: InteractionModel, stab_kind="plaquette", *,
                     stabilizer=None, weight=None, initial_spin="+"):
    """Unnormalised post-read-out states of the channel-degraded quiescent support."""
    stab = _select(lattice, stab_kind, stabilizer, weight)
    rho = _channel_on_support(lattice, stab, channel)
    hadamard = stab.kind is StabilizerKind.STAR
    basis, branches = _run_protocol(rho, stab.support, model, hadamard, initial_spin)
    return stab, dict(branches)


def outcome_probabilities(lattice, channel, model, stab_kind="plaquette", *,
                          stabilizer=None, weight=None, initial_spin="+") -> dict:
    """Exact ``{+1, -1, "loss"}`` probabilities for one stabilizer read-out."""
    _, branches = readout_branches(lattice, channel, model, stab_kind,
                                   stabilizer=stabilizer, weight=weight,
                                   initial_spin=initial_spin)
    p_plus, p_minus = branches[1].trace, branches[-1].trace
    return {1: p_plus, -1: p_minus, "loss": max(0.0, 1.0 - p_plus - p_minus)}


def confidence(lattice: SurfaceCodeLattice, channel: PauliChannel,
               model: InteractionModel, stab_kind="plaquette", readout: int = 1, *,
               stabilizer: StabilizerRecord | None = None, weight: int | None = None,
               initial_spin: str = "+") -> float:
    """Probability that the stabilizer really has eigenvalue ``readout`` given
    that the spin read-out reported it.

    The quiescent state is degraded by ``channel`` on every data qubit, the
    chosen stabilizer is measured, and the trace over the matching parity
    projector is divided by the trace of the whole read-out branch. Qubits
    outside the support are traced out before the interaction; the channel
    is trace preserving, so this equals the full-register computation.

    Raises
    ------
    ZeroProbabilityReadout
        When the read-out branch carries no weight.
    """
    readout = int(readout)
    if readout not in (1, -1):
        raise ValueError(f"readout must be +1 or -1, got {readout}")
    stab, branches = readout_branches(lattice, channel, model, stab_kind,
                                      stabilizer=stabilizer, weight=weight,
                                      initial_spin=initial_spin)
    branch = branches[readout]
    denominator = branch.trace
    if denominator < 1e-300 or denominator < ZERO_PROBABILITY:
        raise ZeroProbabilityReadout(
            f"read-out {readout:+d} of {stab.name} has probability {denominator:.3g}")
    parity = stabilizer_expectation(branch, stab)  # normalised by the trace
    return float((1 + readout * parity) / 2)


# --- Monte Carlo ----------------------------------------------------------------

@dataclass
class SyndromeTally:
    stabilizers: tuple
    shots: int
    seed: int
    plus: np.ndarray
    minus: np.ndarray
    loss: np.ndarray

    def records(self) -> list[dict]:
        return [
            {"stab_id": s.name, "kind": s.kind.value, "weight": s.weight,
             "plus": int(self.plus[i]), "minus": int(self.minus[i]),
             "heralded_loss": int(self.loss[i]), "shots": self.shots}
            for i, s in enumerate(self.stabilizers)
        ]


def _conditional_table(lattice, stab, model):
    """``P(+1), P(-1)`` given even / odd support parity."""
    rho = _channel_on_support(lattice, stab, PauliChannel())
    flip = PAULI_X if stab.kind is StabilizerKind.PLAQUETTE else PAULI_Z
    odd = apply_single_qubit(rho, stab.support[0], flip)
    hadamard = stab.kind is StabilizerKind.STAR
    table = np.zeros((2, 2))
    for parity, r in enumerate((rho, odd)):
        _, branches = _run_protocol(r, stab.support, model, hadamard, "+")
        table[parity] = branches[0][1].trace, branches[1][1].trace
    return table


def sample_syndromes(lattice: SurfaceCodeLattice, channel: PauliChannel,
                     model: InteractionModel, shots: int, seed: int) -> SyndromeTally:
    """Monte Carlo syndrome statistics for one extraction round.

    Each shot draws i.i.d. Pauli errors on the quiescent state, then every
    stabilizer is read out once. A Pauli-degraded quiescent state is an
    eigenstate of every stabilizer, and the read-out statistics of one
    stabilizer depend only on its support parity, so outcomes are drawn from
    the exact protocol probabilities for that parity. Norm lost to lossy
    reflections is recorded as a heralded loss.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    stabs = lattice.stabilizers
    tables = np.array([_conditional_table(lattice, s, model) for s in stabs])
    rng = np.random.default_rng(seed)
    n = lattice.num_qubits
    u = rng.random((shots, n))
    p = channel.p
    cat = np.digitize(u, [1 - p, 1 - p + channel.x, 1 - p + channel.x + channel.y])
    xflip = ((cat == 1) | (cat == 2)).astype(np.int64)
    zflip = ((cat == 2) | (cat == 3)).astype(np.int64)
    h_star = lattice.check_matrix("star").astype(np.int64)
    h_plaq = lattice.check_matrix("plaquette").astype(np.int64)
    parity = np.concatenate([zflip @ h_star.T, xflip @ h_plaq.T], axis=1) % 2
    cols = np.arange(len(stabs))
    p_plus = tables[cols, parity, 0]
    p_minus = tables[cols, parity, 1]
    v = rng.random((shots, len(stabs)))
    is_plus = v < p_plus
    is_minus = ~is_plus & (v < p_plus + p_minus)
    is_loss = ~is_plus & ~is_minus
    return SyndromeTally(stabs, shots, seed, is_plus.sum(0), is_minus.sum(0),
                         is_loss.sum(0))
