"""Dense complex linear algebra for quantum tone states.

States are unit vectors over a labeled orthonormal basis, transformations
are unitary matrices, and listening probabilities follow the Born rule
(|amplitude|^2 per basis outcome).  Everything here is immutable after
construction; the only stateful-looking operation, ``sample_outcome``,
threads an explicit ``SeededRng`` value instead of mutating one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .models import NoteLabel

# Tolerances for double precision at dimension <= 16.
NORM_EPS = 1e-9
UNITARY_EPS = 1e-9
ENT_EPS = 1e-9


class ZeroVectorError(ValueError):
    """Raised when normalizing a vector with no usable magnitude."""


class LabelMismatchError(ValueError):
    """Raised when basis labels repeat or disagree with the amplitudes."""


class BasisMismatchError(ValueError):
    """Raised when two states do not share the same labeled basis."""


class DimensionMismatchError(ValueError):
    """Raised when operator and state dimensions disagree."""


class NotUnitaryError(ValueError):
    """Raised when a matrix fails the unitarity check."""


class UnknownGateError(ValueError):
    """Raised for gate names outside the built-in set."""


class NotOrthonormalError(ValueError):
    """Raised when a claimed orthonormal basis is not one."""


class LabelCollisionError(ValueError):
    """Raised when tensoring states whose label sets overlap."""


class SameNoteError(ValueError):
    """Raised when a two-note construction is given the same note twice."""


class WrongDimensionError(ValueError):
    """Raised when an operation requires a specific dimension."""


def _as_amplitudes(values: Sequence[complex] | np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("amplitudes must form a non-empty 1-D vector")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("amplitudes must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit vector of complex amplitudes over distinct basis labels."""

    amps: np.ndarray
    basis_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        amps = _as_amplitudes(self.amps)
        labels = tuple(self.basis_labels)
        if len(labels) != amps.size:
            raise LabelMismatchError(
                f"{len(labels)} labels for {amps.size} amplitudes")
        if len(set(labels)) != len(labels):
            raise LabelMismatchError("basis labels must be pairwise distinct")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_EPS:
            raise ValueError(f"state vector norm is {norm}, expected 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return int(self.amps.size)

    def amplitude(self, label: str) -> complex:
        return complex(self.amps[self.basis_labels.index(label)])


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """Square complex matrix verified to satisfy U†U = I on construction."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError("unitary matrix must be square")
        if not is_unitary(m, UNITARY_EPS):
            raise NotUnitaryError("matrix fails U†U = I within tolerance")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent matrix, e.g. |s><s| for a state s."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError("projector must be square")
        if np.max(np.abs(m - m.conj().T)) > UNITARY_EPS:
            raise ValueError("projector must be Hermitian")
        if np.max(np.abs(m @ m - m)) > UNITARY_EPS:
            raise ValueError("projector must be idempotent")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True)
class Distribution:
    """Probabilities over labeled outcomes, in a fixed order, summing to 1."""

    outcomes: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.outcomes]
        if len(set(labels)) != len(labels):
            raise LabelMismatchError("outcome labels must be distinct")
        total = 0.0
        for label, p in self.outcomes:
            if not math.isfinite(p) or p < 0.0:
                raise ValueError(f"invalid probability {p} for {label!r}")
            total += p
        if abs(total - 1.0) > NORM_EPS:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    def probability(self, label: str) -> float:
        for known, p in self.outcomes:
            if known == label:
                return p
        raise KeyError(label)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.outcomes)


class BellKind(Enum):
    """The four maximally entangled two-mode states."""

    PSI_MINUS = "psi-"
    PSI_PLUS = "psi+"
    PHI_MINUS = "phi-"
    PHI_PLUS = "phi+"


# ---------------------------------------------------------------------------
# Deterministic splittable RNG.
#
# SplitMix64-style: 64-bit counter stream with an avalanche finalizer.
# Chosen over library generators because the sampling contract demands an
# immutable, explicitly threaded state and bit-identical streams across
# platforms and library versions.

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SeededRng:
    """Immutable RNG state; every draw returns the advanced state."""

    state: int

    @classmethod
    def from_seed(cls, seed: int) -> "SeededRng":
        return cls(seed & _MASK64)

    def split(self, index: int) -> "SeededRng":
        """Derive an independent stream for the given sub-stream index."""
        return SeededRng(_mix64((self.state + (index + 1) * _GAMMA) & _MASK64))

    def next_uint64(self) -> tuple[int, "SeededRng"]:
        advanced = (self.state + _GAMMA) & _MASK64
        return _mix64(advanced), SeededRng(advanced)

    def next_unit(self) -> tuple[float, "SeededRng"]:
        """Uniform draw on (0, 1]; zero is excluded on purpose so that
        zero-probability outcomes can never be sampled."""
        raw, rng = self.next_uint64()
        return (raw + 1) / 2.0 ** 64, rng


# ---------------------------------------------------------------------------
# Operations


def normalize(raw_amps: Sequence[complex] | np.ndarray,
              labels: Sequence[str]) -> StateVector:
    """Scale raw amplitudes to a unit vector over the given labels."""
    labels = tuple(labels)
    amps = _as_amplitudes(raw_amps)
    if len(labels) != amps.size or len(set(labels)) != len(labels):
        raise LabelMismatchError("labels must be distinct and match length")
    norm = float(np.linalg.norm(amps))
    if norm < NORM_EPS:
        raise ZeroVectorError("cannot normalize a (near-)zero vector")
    return StateVector(amps / norm, labels)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> with conjugation applied to ``a``."""
    if a.basis_labels != b.basis_labels:
        raise BasisMismatchError("states live on different bases")
    return complex(np.vdot(a.amps, b.amps))


def projector_of(s: StateVector) -> Projector:
    """Rank-one projector |s><s|."""
    return Projector(np.outer(s.amps, s.amps.conj()))


def apply_unitary(u: UnitaryMatrix, s: StateVector) -> StateVector:
    """Return U·s on the same basis labels."""
    if u.dim != s.dim:
        raise DimensionMismatchError(
            f"unitary is {u.dim}-dim, state is {s.dim}-dim")
    return StateVector(u.entries @ s.amps, s.basis_labels)


_GATE_TABLE = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2),
    "I": np.eye(2, dtype=np.complex128),
}

def gate(name: str, dim: int = 2) -> UnitaryMatrix:
    """Built-in two-dimensional gates: X (swap), H (Hadamard), I."""
    if dim != 2:
        raise WrongDimensionError("built-in gates are two-dimensional")
    try:
        return UnitaryMatrix(_GATE_TABLE[name])
    except KeyError:
        raise UnknownGateError(f"unknown gate {name!r}") from None


def _check_orthonormal(states: Sequence[StateVector], what: str) -> np.ndarray:
    rows = np.array([s.amps for s in states])
    gram = rows @ rows.conj().T
    if np.max(np.abs(gram - np.eye(len(states)))) > UNITARY_EPS:
        raise NotOrthonormalError(f"{what} basis is not orthonormal")
    return rows


def basis_change(from_basis: Sequence[StateVector],
                 to_basis: Sequence[StateVector]) -> UnitaryMatrix:
    """Unitary sending from_basis[i] to to_basis[i] for every i."""
    if len(from_basis) != len(to_basis) or not from_basis:
        raise DimensionMismatchError("bases must have equal nonzero size")
    dim = from_basis[0].dim
    for s in (*from_basis, *to_basis):
        if s.dim != dim:
            raise DimensionMismatchError("all basis states must share one dim")
        if s.basis_labels != from_basis[0].basis_labels:
            raise BasisMismatchError("basis states must share basis labels")
    if len(from_basis) != dim:
        raise DimensionMismatchError(
            f"need {dim} states to span a {dim}-dim space")
    src = _check_orthonormal(from_basis, "source")
    dst = _check_orthonormal(to_basis, "target")
    # U = sum_i |to_i><from_i|
    u = sum(np.outer(dst[i], src[i].conj()) for i in range(dim))
    return UnitaryMatrix(u)


def born_distribution(s: StateVector) -> Distribution:
    """Listening probabilities |amp_k|^2 in basis order."""
    probs = np.abs(s.amps) ** 2
    return Distribution(tuple(zip(s.basis_labels, (float(p) for p in probs))))


def sample_outcome(d: Distribution, rng: SeededRng) -> tuple[str, SeededRng]:
    """Draw one outcome by inverse CDF over the distribution's order.

    Accumulates probabilities in outcome order and picks the first outcome
    whose cumulative sum reaches the uniform draw.  Pure function of
    ``(d, rng)``; the advanced rng state is returned alongside the label.
    """
    u, rng = rng.next_unit()
    cumulative = 0.0
    for label, p in d.outcomes:
        cumulative += p
        if cumulative >= u:
            return label, rng
    return d.outcomes[-1][0], rng  # guard against cumulative rounding < 1


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Composite state; the left factor is the slower-varying index."""
    if set(a.basis_labels) & set(b.basis_labels):
        raise LabelCollisionError("tensor factors share basis labels")
    labels = tuple(f"{la}⊗{lb}" for la in a.basis_labels
                   for lb in b.basis_labels)
    return StateVector(np.kron(a.amps, b.amps), labels)


_BELL_AMPS = {
    BellKind.PSI_MINUS: (0.0, 1.0, -1.0, 0.0),
    BellKind.PSI_PLUS: (0.0, 1.0, 1.0, 0.0),
    BellKind.PHI_MINUS: (1.0, 0.0, 0.0, -1.0),
    BellKind.PHI_PLUS: (1.0, 0.0, 0.0, 1.0),
}


def bell_state(kind: BellKind, note_lo: "NoteLabel",
               note_hi: "NoteLabel") -> StateVector:
    """Maximally entangled state of two note modes.

    The composite basis is ordered (00, 01, 10, 11) over the occupancies of
    (note_lo, note_hi):

        psi-  (|01> - |10>)/√2      psi+  (|01> + |10>)/√2
        phi-  (|00> - |11>)/√2      phi+  (|00> + |11>)/√2
    """
    if note_lo == note_hi:
        raise SameNoteError("entangled pair needs two distinct notes")
    lo, hi = note_lo.name, note_hi.name
    labels = (f"0_{lo}⊗0_{hi}", f"0_{lo}⊗1_{hi}",
              f"1_{lo}⊗0_{hi}", f"1_{lo}⊗1_{hi}")
    amps = np.array(_BELL_AMPS[kind], dtype=np.complex128) / math.sqrt(2)
    return StateVector(amps, labels)


def is_entangled(s: StateVector) -> bool:
    """Two-mode entanglement test: a1·a4 != a2·a3 beyond tolerance."""
    if s.dim != 4:
        raise WrongDimensionError("entanglement test needs a 4-dim state")
    a = s.amps
    return bool(abs(a[0] * a[3] - a[1] * a[2]) > ENT_EPS)


def is_complementary(a: StateVector, b: StateVector) -> bool:
    """True when the states are neither orthogonal nor collinear.

    Uses the modulus of the (possibly complex) inner product, strictly
    between 0 and 1 within tolerance.
    """
    overlap = abs(inner_product(a, b))
    return ENT_EPS < overlap < 1.0 - ENT_EPS


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_EPS) -> bool:
    """Max-entry test of U†U = I."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError("unitarity test needs a square matrix")
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def states_equal_up_to_phase(a: StateVector, b: StateVector,
                             tol: float = NORM_EPS) -> bool:
    """Physical equality: overlap modulus 1 within tolerance."""
    return abs(abs(inner_product(a, b)) - 1.0) <= tol
