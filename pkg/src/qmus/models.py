"""Musical note labels and their two quantum representations.

A note can live in a *bundled octave* space (one octave's white keys as an
orthonormal basis of C^7 or C^8) or as an *occupancy mode* (a two-level
system that is silent |0> or sounding |1>).  This module builds the state
vectors for both, plus the rendering helpers shared by the score engine:
gray levels for mean occupancy and MIDI pitch numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import NORM_EPS, StateVector

PITCH_NAMES = ("c", "d", "e", "f", "g", "a", "b")

# White keys of the base octave, anchored at middle C.
_MIDI_BASE = {"c": 60, "d": 62, "e": 64, "f": 65, "g": 67, "a": 69, "b": 71}

# Mean-occupancy ladder used by the fading demos and the text renderer's
# reference scores; gray_level maps it to percents 100..10.
GRAY_LADDER = (1.00, 0.85, 0.70, 0.55, 0.40, 0.30, 0.20, 0.10)


class NoteOutOfBlockError(ValueError):
    """Raised when a note does not belong to the configured octave block."""


class NotNormalizedError(ValueError):
    """Raised for occupancy amplitudes that do not form a unit vector."""


class NotMonotoneError(ValueError):
    """Raised for level sequences that are not strictly monotone."""


class OctaveOutOfRangeError(ValueError):
    """Raised when a note has no MIDI pitch in 0..127."""


@dataclass(frozen=True)
class NoteLabel:
    """A white-key pitch name plus octave index (0 = base, 1 = primed)."""

    pitch: str
    octave: int = 0

    def __post_init__(self) -> None:
        if self.pitch not in PITCH_NAMES:
            raise ValueError(f"unknown pitch {self.pitch!r}")
        if self.octave < 0:
            raise ValueError("octave must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "NoteLabel":
        """Parse names like ``g`` or ``c'`` (primes raise the octave)."""
        stripped = text.rstrip("'")
        return cls(stripped, len(text) - len(stripped))

    @property
    def name(self) -> str:
        return self.pitch + "'" * self.octave

    @property
    def scale_position(self) -> int:
        """Position in the diatonic scale; higher means higher pitch."""
        return self.octave * 7 + PITCH_NAMES.index(self.pitch)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class OctaveModelConfig:
    """Bundled-octave dimension: 7 white keys, or 8 with the octave note."""

    dim: int = 7

    def __post_init__(self) -> None:
        if self.dim not in (7, 8):
            raise ValueError("octave block dimension must be 7 or 8")


def block_labels(cfg: OctaveModelConfig,
                 block_octave: int = 0) -> tuple[NoteLabel, ...]:
    """Notes of one octave block, in coordinate order (highest first)."""
    notes = [NoteLabel(p, block_octave) for p in reversed(PITCH_NAMES)]
    if cfg.dim == 8:
        notes.insert(0, NoteLabel("c", block_octave + 1))
    return tuple(notes)


def note_basis_state(n: NoteLabel, cfg: OctaveModelConfig) -> StateVector:
    """Cartesian basis vector of a note within the base octave block.

    Coordinates run from the top of the block down, so ``b`` occupies the
    first coordinate and ``c`` the last; the octave note (dim 8 only) sits
    above ``b``.
    """
    notes = block_labels(cfg)
    if n not in notes:
        raise NoteOutOfBlockError(
            f"{n.name} is not in the {cfg.dim}-dimensional base block")
    amps = np.zeros(cfg.dim, dtype=np.complex128)
    amps[notes.index(n)] = 1.0
    return StateVector(amps, tuple(note.name for note in notes))


def block_candidates(n: NoteLabel, cfg: OctaveModelConfig) -> frozenset[int]:
    """Octave blocks that contain the note under the given dimension.

    With dim 8 a ``c`` above the base octave is both the top of one block
    and the bottom of the next, so it belongs to two.
    """
    if cfg.dim == 7 or n.pitch != "c" or n.octave == 0:
        blocks = {n.octave}
    else:
        blocks = {n.octave - 1, n.octave}
    return frozenset(blocks)


@dataclass(frozen=True)
class OccupancyState:
    """One note mode: amplitude ``alpha`` for silence, ``beta`` for sound."""

    note: NoteLabel
    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        total = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(total - 1.0) > NORM_EPS:
            raise NotNormalizedError(
                f"|alpha|^2 + |beta|^2 = {total}, expected 1")


def occupancy_state(n: NoteLabel, alpha: complex, beta: complex,
                    renormalize: bool = False) -> OccupancyState:
    """Build an occupancy state, optionally rescaling to unit norm."""
    if renormalize:
        norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if norm < NORM_EPS:
            raise NotNormalizedError("cannot renormalize a zero mode")
        alpha, beta = alpha / norm, beta / norm
    return OccupancyState(n, complex(alpha), complex(beta))


def vacuum_state(n: NoteLabel) -> OccupancyState:
    return OccupancyState(n, 1.0, 0.0)


def occupied_state(n: NoteLabel) -> OccupancyState:
    return OccupancyState(n, 0.0, 1.0)


def occupancy_vector(s: OccupancyState) -> StateVector:
    """Two-dimensional state vector of one mode.

    Layout matches the gate matrices: the *occupied* basis vector |1> is
    (1, 0) and the vacuum |0> is (0, 1), so the sounding amplitude comes
    first and the labels read ("1_<note>", "0_<note>").
    """
    return StateVector(
        np.array([s.beta, s.alpha], dtype=np.complex128),
        (f"1_{s.note.name}", f"0_{s.note.name}"),
    )


def angle_state(n: NoteLabel, phi: float) -> OccupancyState:
    """Real-amplitude mode parametrized by one angle: (cos phi, sin phi)."""
    return OccupancyState(n, math.cos(phi), math.sin(phi))


def mean_occupancy(s: OccupancyState) -> float:
    """Expected excitation |beta|^2 of the mode, in [0, 1]."""
    return abs(s.beta) ** 2


@dataclass(frozen=True)
class GrayLevel:
    """Ink percentage for rendering: 100 = fully sounding, 0 = silent."""

    percent: int

    def __post_init__(self) -> None:
        if not 0 <= self.percent <= 100:
            raise ValueError("gray level must lie in 0..100")


def gray_level(s: OccupancyState) -> GrayLevel:
    """Mean occupancy as an integer percent, rounded half-up."""
    return GrayLevel(percent_of(mean_occupancy(s)))


def percent_of(probability: float) -> int:
    """Probability to integer percent, rounding halves up."""
    return int(math.floor(probability * 100.0 + 0.5))


def complementary_sequence(n: NoteLabel,
                           levels: Sequence[float]) -> list[OccupancyState]:
    """Occupancy states along a strictly monotone ladder of |beta|^2 levels.

    Amplitudes are real and non-negative, so every adjacent interior pair
    has overlap strictly between 0 and 1 (mutually complementary tones).
    Only the endpoints may sit at occupancy 0 or 1.
    """
    levels = [float(v) for v in levels]
    if any(not 0.0 <= v <= 1.0 for v in levels):
        raise ValueError("levels must lie in [0, 1]")
    if len(levels) > 1:
        steps = [b - a for a, b in zip(levels, levels[1:])]
        if not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            raise NotMonotoneError("levels must be strictly monotone")
    for v in levels[1:-1]:
        if not 0.0 < v < 1.0:
            raise NotMonotoneError(
                "interior levels must lie strictly inside (0, 1)")
    return [
        OccupancyState(n, math.sqrt(1.0 - v), math.sqrt(v)) for v in levels
    ]


def midi_pitch(n: NoteLabel) -> int:
    """MIDI number of a white key; base octave starts at middle C (60)."""
    pitch = _MIDI_BASE[n.pitch] + 12 * n.octave
    if not 0 <= pitch <= 127:
        raise OctaveOutOfRangeError(f"{n.name} falls outside MIDI range")
    return pitch


