"""Planar and toric surface-code lattices and the quiescent state.

Planar (unrotated) layout on a ``(2d-1) x (2d-1)`` grid of integer
coordinates:

* data qubits sit where ``row + col`` is even,
* stars (X-type) sit at even row / odd column,
* plaquettes (Z-type) sit at odd row / even column.

Each check acts on its in-grid nearest neighbours, which gives weight-3
operators along the boundaries. The toric layout uses a ``2d x 2d``
periodic grid with data on ``row + col`` odd, stars on even/even vertices
and plaquettes on odd/odd faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidDistance, TooLarge, UnknownLabel
from .quantum import DensityOperator, PureState, photon

MAX_QUIESCENT_QUBITS = 13


class Geometry(str, Enum):
    PLANAR = "planar"
    TORIC = "toric"


class StabilizerKind(str, Enum):
    STAR = "star"
    PLAQUETTE = "plaquette"

    @property
    def pauli(self) -> str:
        return "X" if self is StabilizerKind.STAR else "Z"


@dataclass(frozen=True)
class StabilizerRecord:
    kind: StabilizerKind
    support: tuple
    position: tuple = ()
    id: int = 0

    def __post_init__(self):
        if len(set(self.support)) != len(self.support):
            raise ValueError("stabilizer support has repeated qubits")

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def name(self) -> str:
        return f"{self.kind.value[0].upper()}{self.id}"


@dataclass(frozen=True)
class SurfaceCodeLattice:
    geometry: Geometry
    distance: int
    data_qubits: tuple        # QubitLabel, index = qubit id
    coordinates: tuple        # (row, col) per data qubit
    stars: tuple
    plaquettes: tuple

    @property
    def num_qubits(self) -> int:
        return len(self.data_qubits)

    @property
    def stabilizers(self) -> tuple:
        return self.stars + self.plaquettes

    def of_kind(self, kind) -> tuple:
        kind = StabilizerKind(kind)
        return self.stars if kind is StabilizerKind.STAR else self.plaquettes

    def find(self, kind, weight=None, index: int = 0) -> StabilizerRecord:
        """The ``index``-th stabilizer of ``kind`` (optionally of a given weight)."""
        pool = [s for s in self.of_kind(kind) if weight is None or s.weight == weight]
        if len(pool) <= index:
            raise LookupError(f"no {kind} stabilizer of weight {weight} at index {index}")
        return pool[index]

    def mask(self, stab: StabilizerRecord) -> int:
        """Bitmask of the support in the lattice's amplitude ordering."""
        n = self.num_qubits
        m = 0
        for label in stab.support:
            m |= 1 << (n - 1 - self.data_qubits.index(label))
        return m

    def check_matrix(self, kind) -> np.ndarray:
        """Binary incidence matrix (stabilizers x qubits)."""
        stabs = self.of_kind(kind)
        h = np.zeros((len(stabs), self.num_qubits), dtype=np.uint8)
        for i, s in enumerate(stabs):
            for label in s.support:
                h[i, self.data_qubits.index(label)] = 1
        return h

    def to_dict(self) -> dict:
        qid = {q: i for i, q in enumerate(self.data_qubits)}
        return {
            "geometry": self.geometry.value,
            "distance": self.distance,
            "qubits": [{"id": i, "row": r, "col": c}
                       for i, (r, c) in enumerate(self.coordinates)],
            "stars": [[qid[q] for q in s.support] for s in self.stars],
            "plaquettes": [[qid[q] for q in p.support] for p in self.plaquettes],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _assemble(geometry, distance, coords, star_sites, plaq_sites, neighbours):
    coords = sorted(coords)
    labels = tuple(photon(i) for i in range(len(coords)))
    at = dict(zip(coords, labels))

    def records(kind, sites):
        out = []
        for i, site in enumerate(sorted(sites)):
            support = tuple(sorted((at[q] for q in neighbours(site) if q in at),
                                   key=lambda l: l.index))
            out.append(StabilizerRecord(kind, support, site, i))
        return tuple(out)

    return SurfaceCodeLattice(geometry, distance, labels, tuple(coords),
                              records(StabilizerKind.STAR, star_sites),
                              records(StabilizerKind.PLAQUETTE, plaq_sites))


def build_planar(distance: int) -> SurfaceCodeLattice:
    """Unrotated planar code: ``d^2 + (d-1)^2`` qubits, ``d(d-1)`` of each check."""
    if not isinstance(distance, (int, np.integer)) or distance < 2:
        raise InvalidDistance(f"planar distance must be an integer >= 2, got {distance!r}")
    size = 2 * distance - 1
    cells = [(r, c) for r in range(size) for c in range(size)]
    data = [(r, c) for r, c in cells if (r + c) % 2 == 0]
    stars = [(r, c) for r, c in cells if r % 2 == 0 and c % 2 == 1]
    plaqs = [(r, c) for r, c in cells if r % 2 == 1 and c % 2 == 0]

    def nbrs(site):
        r, c = site
        return [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]

    return _assemble(Geometry.PLANAR, distance, data, stars, plaqs, nbrs)


def build_toric(distance: int) -> SurfaceCodeLattice:
    """Toric code on a ``d x d`` torus: ``2 d^2`` qubits, ``d^2`` of each check."""
    if not isinstance(distance, (int, np.integer)) or distance < 2:
        raise InvalidDistance(f"toric distance must be an integer >= 2, got {distance!r}")
    size = 2 * distance
    cells = [(r, c) for r in range(size) for c in range(size)]
    data = [(r, c) for r, c in cells if (r + c) % 2 == 1]
    stars = [(r, c) for r, c in cells if r % 2 == 0 and c % 2 == 0]
    plaqs = [(r, c) for r, c in cells if r % 2 == 1 and c % 2 == 1]

    def nbrs(site):
        r, c = site
        return [((r - 1) % size, c), ((r + 1) % size, c),
                (r, (c - 1) % size), (r, (c + 1) % size)]

    return _assemble(Geometry.TORIC, distance, data, stars, plaqs, nbrs)


def gf2_rank(matrix) -> int:
    m = np.array(matrix, dtype=np.uint8) % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def quiescent_state(lattice: SurfaceCodeLattice) -> PureState:
    """Normalised ``prod_s (1 + X_s) |0...0>`` over the data qubits."""
    n = lattice.num_qubits
    if n > MAX_QUIESCENT_QUBITS:
        raise TooLarge(f"{n} data qubits exceeds the quiescent-state cap of "
                       f"{MAX_QUIESCENT_QUBITS}")
    psi = np.zeros(2 ** n)
    psi[0] = 1.0
    idx = np.arange(2 ** n)
    for s in lattice.stars:
        # (1 + X_s) maps amplitude at i onto i XOR mask
        psi = psi + psi[idx ^ lattice.mask(s)]
    psi /= np.linalg.norm(psi)
    return PureState(lattice.data_qubits, psi.astype(complex))


def _support_mask(state, stab: StabilizerRecord) -> int:
    n = state.num_qubits
    mask = 0
    for label in stab.support:
        try:
            k = state.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"{label} of {stab.name} not in state") from None
        mask |= 1 << (n - 1 - k)
    return mask


def _popcount_parity(values: np.ndarray) -> np.ndarray:
    parity = np.zeros(values.shape, dtype=np.int64)
    v = values.copy()
    while np.any(v):
        parity ^= v & 1
        v >>= 1
    return parity


def stabilizer_expectation(state, stab: StabilizerRecord) -> float:
    """Normalised expectation of the stabilizer's Pauli product."""
    mask = _support_mask(state, stab)
    idx = np.arange(2 ** state.num_qubits)
    if isinstance(state, DensityOperator):
        rho = state.matrix
        if stab.kind is StabilizerKind.STAR:
            val = np.sum(rho[idx ^ mask, idx])
        else:
            val = np.sum(np.diag(rho) * (1 - 2 * _popcount_parity(idx & mask)))
        return float(val.real / state.trace)
    a = state.amplitudes
    if stab.kind is StabilizerKind.STAR:
        val = np.vdot(a, a[idx ^ mask])
    else:
        val = np.sum(np.abs(a) ** 2 * (1 - 2 * _popcount_parity(idx & mask)))
    return float(np.real(val) / state.norm_squared)
