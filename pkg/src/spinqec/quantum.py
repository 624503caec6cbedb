"""Dense state-vector / density-matrix engine over labelled qubits.

Amplitudes are indexed in label order with the first label as the most
significant bit. Photons encode ``|L> = |0>`` and ``|R> = |1>``; spins encode
``|up> = |0>`` and ``|down> = |1>``.

States are immutable; every operation returns a new object. Gates need not
be unitary: a lossy reflection simply leaves the state with norm below one
and the ``subnormalized`` flag set.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence, Union

import numpy as np
import scipy.linalg

from .errors import (DuplicateLabel, InvalidChannel, LabelMismatch, TooLarge,
                     UnknownLabel)

MAX_QUBITS = 14
_NORM_TOL = 1e-12

SQRT2 = np.sqrt(2.0)
I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = (KET0 + KET1) / SQRT2
KET_MINUS = (KET0 - KET1) / SQRT2
KET_YPLUS = (KET0 + 1j * KET1) / SQRT2
KET_YMINUS = (KET0 - 1j * KET1) / SQRT2

# polarisation / spin aliases
KET_L, KET_R = KET0, KET1
KET_H = KET_PLUS
KET_V = -1j * (KET0 - KET1) / SQRT2
KET_UP, KET_DOWN = KET0, KET1

PAULIS = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


class QubitKind(str, Enum):
    PHOTON = "photon"
    SPIN = "spin"


@dataclass(frozen=True, order=True)
class QubitLabel:
    kind: QubitKind
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"qubit index must be non-negative, got {self.index}")

    def __str__(self):
        return f"{self.kind.value[0]}{self.index}"


def photon(index: int) -> QubitLabel:
    return QubitLabel(QubitKind.PHOTON, index)


def spin(index: int) -> QubitLabel:
    return QubitLabel(QubitKind.SPIN, index)


def _check_labels(labels) -> tuple:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise DuplicateLabel(f"repeated qubit label in {[str(l) for l in labels]}")
    if len(labels) > MAX_QUBITS:
        raise TooLarge(f"{len(labels)} qubits exceeds the cap of {MAX_QUBITS}")
    return labels


@dataclass(frozen=True, eq=False)
class PureState:
    """State vector over an ordered list of qubit labels."""

    labels: tuple
    amplitudes: np.ndarray
    subnormalized: bool = False

    def __post_init__(self):
        labels = _check_labels(self.labels)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(labels):
            raise ValueError(
                f"{amps.size} amplitudes for {len(labels)} qubits")
        amps.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)
        if self.norm_squared > 1 + _NORM_TOL:
            raise ValueError(f"state norm^2 {self.norm_squared} exceeds 1")

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared))

    def index(self, label: QubitLabel) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"{label} not in register") from None

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def normalized(self) -> "PureState":
        return PureState(self.labels, self.amplitudes / self.norm)

    def to_density(self) -> "DensityOperator":
        a = self.amplitudes
        return DensityOperator(self.labels, np.outer(a, a.conj()),
                               self.subnormalized)

    @classmethod
    def product(cls, labels: Sequence[QubitLabel], kets) -> "PureState":
        """Tensor product of single-qubit kets, one per label."""
        amps = np.ones(1, dtype=complex)
        for ket in kets:
            amps = np.kron(amps, np.asarray(ket, dtype=complex))
        return cls(tuple(labels), amps)

    @classmethod
    def basis(cls, labels: Sequence[QubitLabel], bits) -> "PureState":
        """Computational basis state ``|bits>``."""
        return cls.product(labels, [KET1 if b else KET0 for b in bits])


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Density matrix over an ordered list of qubit labels."""

    labels: tuple
    matrix: np.ndarray
    subnormalized: bool = False

    def __post_init__(self):
        labels = _check_labels(self.labels)
        m = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** len(labels)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} for {len(labels)} qubits")
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if np.max(np.abs(m - m.conj().T)) > 1e-12 * scale:
            raise ValueError("density operator is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", m)
        if self.trace > 1 + _NORM_TOL:
            raise ValueError(f"trace {self.trace} exceeds 1")

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    norm_squared = trace

    def index(self, label: QubitLabel) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"{label} not in register") from None

    def tensor(self) -> np.ndarray:
        return self.matrix.reshape((2,) * (2 * self.num_qubits))

    def normalized(self) -> "DensityOperator":
        return DensityOperator(self.labels, self.matrix / self.trace)

    def is_psd(self, tol: float = 1e-10) -> bool:
        return bool(np.linalg.eigvalsh(self.matrix).min() >= -tol)


State = Union[PureState, DensityOperator]


@dataclass(frozen=True)
class PauliChannel:
    """Single-qubit Pauli channel with error probabilities ``x``, ``y``, ``z``."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        rates = (self.x, self.y, self.z)
        if not all(r >= 0 for r in rates) or not self.p <= 1 + 1e-15:
            raise InvalidChannel(
                f"invalid Pauli probabilities x={self.x}, y={self.y}, z={self.z}")

    @property
    def p(self) -> float:
        """Physical qubit error rate ``x + y + z``."""
        return self.x + self.y + self.z

    def swapped_xz(self) -> "PauliChannel":
        return PauliChannel(x=self.z, y=self.y, z=self.x)


class Measurement(NamedTuple):
    outcome: int
    probability: float
    state: State | None


def _is_unitary(gate: np.ndarray) -> bool:
    return np.allclose(gate.conj().T @ gate, np.eye(gate.shape[0]), atol=1e-12)


def _apply_to_axis(tensor: np.ndarray, gate: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(gate, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply_single_qubit(state: State, label: QubitLabel, gate) -> State:
    """Apply a 2x2 matrix (unitary or not) to one qubit."""
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got shape {gate.shape}")
    k = state.index(label)
    lossy = state.subnormalized or not _is_unitary(gate)
    if isinstance(state, PureState):
        t = _apply_to_axis(state.tensor(), gate, k)
        return PureState(state.labels, t.reshape(-1), lossy)
    n = state.num_qubits
    t = _apply_to_axis(state.tensor(), gate, k)
    t = _apply_to_axis(t, gate.conj(), n + k)
    return DensityOperator(state.labels, t.reshape(2 ** n, 2 ** n), lossy)


def _diagonal_factor(n: int, axes: Sequence[int], diag) -> np.ndarray:
    """Broadcastable factor placing a diagonal over ``axes`` of an n-qubit tensor."""
    k = len(axes)
    d = np.asarray(diag, dtype=complex).reshape((2,) * k)
    order = np.argsort(axes)
    d = np.transpose(d, order)
    shape = [1] * n
    for ax in axes:
        shape[ax] = 2
    return d.reshape(shape)


def apply_diagonal(state: State, labels: Sequence[QubitLabel], diag) -> State:
    """Multiply each computational branch of ``labels`` by a coefficient.

    ``diag`` has ``2**len(labels)`` entries ordered with ``labels[0]`` as the
    most significant bit.
    """
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise DuplicateLabel("diagonal gate addresses the same qubit twice")
    diag = np.asarray(diag, dtype=complex).reshape(-1)
    if diag.size != 2 ** len(labels):
        raise ValueError(f"{diag.size} coefficients for {len(labels)} qubits")
    axes = [state.index(l) for l in labels]
    lossy = state.subnormalized or not np.allclose(np.abs(diag), 1.0, atol=1e-12)
    n = state.num_qubits
    f = _diagonal_factor(n, axes, diag)
    if isinstance(state, PureState):
        return PureState(state.labels, (state.tensor() * f).reshape(-1), lossy)
    rows = f.reshape(f.shape + (1,) * n)
    cols = f.conj().reshape((1,) * n + f.shape)
    t = state.tensor() * rows * cols
    return DensityOperator(state.labels, t.reshape(2 ** n, 2 ** n), lossy)


def apply_two_qubit_diagonal(state: State, label_a: QubitLabel,
                             label_b: QubitLabel, diag) -> State:
    """Multiply the ``|ab>`` branches (00, 01, 10, 11) by four coefficients."""
    if label_a == label_b:
        raise DuplicateLabel(f"{label_a} used for both qubits")
    return apply_diagonal(state, (label_a, label_b), diag)


def apply_pauli_channel(rho: State, label: QubitLabel,
                        ch: PauliChannel) -> DensityOperator:
    """``(1-p) rho + x X rho X + y Y rho Y + z Z rho Z`` on one qubit."""
    if not isinstance(ch, PauliChannel):
        raise InvalidChannel(f"expected a PauliChannel, got {type(ch).__name__}")
    if isinstance(rho, PureState):
        rho = rho.to_density()
    rho.index(label)
    out = (1 - ch.p) * rho.matrix
    for w, P in ((ch.x, PAULI_X), (ch.y, PAULI_Y), (ch.z, PAULI_Z)):
        if w:
            out = out + w * apply_single_qubit(rho, label, P).matrix
    out = (out + out.conj().T) / 2
    return DensityOperator(rho.labels, out, rho.subnormalized)


def tensor_product(a: State, b: State) -> State:
    """``a (x) b`` with b's labels appended after a's."""
    labels = a.labels + b.labels
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(labels, np.kron(a.amplitudes, b.amplitudes),
                         a.subnormalized or b.subnormalized)
    ma = a.to_density().matrix if isinstance(a, PureState) else a.matrix
    mb = b.to_density().matrix if isinstance(b, PureState) else b.matrix
    return DensityOperator(labels, np.kron(ma, mb),
                           a.subnormalized or b.subnormalized)


def partial_trace(state: State, keep) -> DensityOperator:
    """Reduced density operator on ``keep`` (label order of the input is kept).

    Accepts a pure state directly so large registers never need their full
    density matrix.
    """
    keep = set(keep)
    for l in keep:
        state.index(l)
    n = state.num_qubits
    kept = [i for i, l in enumerate(state.labels) if l in keep]
    traced = [i for i in range(n) if i not in kept]
    dk, dt = 2 ** len(kept), 2 ** len(traced)
    labels = tuple(state.labels[i] for i in kept)
    if isinstance(state, PureState):
        m = np.transpose(state.tensor(), kept + traced).reshape(dk, dt)
        red = m @ m.conj().T
    else:
        t = np.transpose(state.tensor(), kept + traced
                         + [n + i for i in kept] + [n + i for i in traced])
        red = np.einsum("aibi->ab", t.reshape(dk, dt, dk, dt))
    red = (red + red.conj().T) / 2
    return DensityOperator(labels, red, state.subnormalized)


def permute(state: State, labels: Sequence[QubitLabel]) -> State:
    """Reorder the register to ``labels`` (same set)."""
    labels = tuple(labels)
    if set(labels) != set(state.labels) or len(labels) != state.num_qubits:
        raise LabelMismatch("permutation must use exactly the register labels")
    perm = [state.index(l) for l in labels]
    n = state.num_qubits
    if isinstance(state, PureState):
        t = np.transpose(state.tensor(), perm)
        return PureState(labels, t.reshape(-1), state.subnormalized)
    t = np.transpose(state.tensor(), perm + [n + p for p in perm])
    return DensityOperator(labels, t.reshape(2 ** n, 2 ** n), state.subnormalized)


def project_qubit(state: State, label: QubitLabel, ket) -> State:
    """Contract one qubit with ``<ket|`` and drop it from the register.

    The result is not renormalised; its norm squared (or trace) is the
    probability of the projection.
    """
    k = state.index(label)
    bra = np.asarray(ket, dtype=complex).conj()
    labels = state.labels[:k] + state.labels[k + 1:]
    if isinstance(state, PureState):
        t = np.tensordot(bra, state.tensor(), axes=([0], [k]))
        return PureState(labels, t.reshape(-1), True)
    n = state.num_qubits
    t = np.tensordot(bra, state.tensor(), axes=([0], [k]))
    t = np.tensordot(bra.conj(), t, axes=([0], [n - 1 + k]))
    m = t.reshape(2 ** (n - 1), 2 ** (n - 1))
    return DensityOperator(labels, (m + m.conj().T) / 2, True)


BASES = {
    "X": (KET_PLUS, KET_MINUS),
    "Y": (KET_YPLUS, KET_YMINUS),
    "Z": (KET0, KET1),
}


def measure_in_basis(state: State, label: QubitLabel, basis: str) -> list[Measurement]:
    """Projective Pauli measurement of one qubit.

    Returns ``[(+1, p_plus, post), (-1, p_minus, post)]``. Probabilities sum to
    the norm squared (trace) of the input, so loss shows up as a deficit.
    Post-states are renormalised and keep the measured qubit in its collapsed
    eigenstate; a post-state is ``None`` when its branch has zero weight.
    """
    try:
        kets = BASES[str(basis).upper()]
    except KeyError:
        raise ValueError(f"unknown basis {basis!r}") from None
    state.index(label)
    results = []
    for outcome, ket in zip((+1, -1), kets):
        proj = np.outer(ket, ket.conj())
        branch = apply_single_qubit(state, label, proj)
        p = branch.norm_squared
        if p < 1e-300:
            results.append(Measurement(outcome, 0.0, None))
        else:
            results.append(Measurement(outcome, p, branch.normalized()))
    return results


def state_fidelity(a: State, b: State) -> float:
    """Fidelity between two (normalised) states on the same labels.

    Pure-pure gives ``|<a|b>|^2``; mixed arguments use the Uhlmann form.
    """
    if set(a.labels) != set(b.labels) or a.num_qubits != b.num_qubits:
        raise LabelMismatch("fidelity requires identical label sets")
    b = permute(b, a.labels)
    a, b = a.normalized(), b.normalized()
    if isinstance(a, PureState) and isinstance(b, PureState):
        f = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    elif isinstance(a, PureState) or isinstance(b, PureState):
        psi, rho = (a, b) if isinstance(a, PureState) else (b, a)
        f = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes).real
    else:
        sa = scipy.linalg.sqrtm(a.matrix)
        f = np.trace(scipy.linalg.sqrtm(sa @ b.matrix @ sa)).real ** 2
    return float(min(1.0, max(0.0, f)))
