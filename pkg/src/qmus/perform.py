"""From validated scores to listening distributions and rendered output.

Each timed event of a score is measured independently, so the joint
("melody") distribution of a voice is the product of its per-event Born
distributions; an entangled pair counts as a single joint measurement of
its two notes.  Sampling draws classical performances from those
distributions with a per-sample rng stream derived only from
``(seed, sample index)``, which makes every output byte-reproducible.

Renderers: Standard MIDI File (format 1, 480 ticks per quarter note),
CSV of a melody distribution, and a monospaced gray-level text sketch.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from . import qcore
from .models import (NoteLabel, midi_pitch, occupancy_state, occupancy_vector,
                     occupied_state, percent_of)
from .qcore import Distribution, SeededRng, StateVector
from .score import (DURATION_VALUES, BarEvent, BellEvent, Event, GateEvent,
                    OccEvent, PureEvent, ScoreAST, ScoreModel, SupEvent)

REST = "rest"

ENUM_CAP = 1_000_000

TICKS_PER_QUARTER = 480
_TICKS_PER_WHOLE = 4 * TICKS_PER_QUARTER
_NOTE_ON_VELOCITY = 80


class NotMeasurableError(ValueError):
    """Raised when asking for the distribution of a bar line."""


class EnumerationTooLargeError(ValueError):
    """Raised when the joint outcome count exceeds the enumeration cap."""

    def __init__(self, count: int, cap: int) -> None:
        super().__init__(
            f"{count} joint outcomes exceed the enumeration cap {cap}; "
            "sample performances instead")
        self.count = count
        self.cap = cap


class EmptyInputError(ValueError):
    """Raised when rendering an empty list of performances."""


@dataclass(frozen=True)
class EventDistribution:
    event_index: int
    dist: Distribution


@dataclass(frozen=True)
class MelodyDistribution:
    """Joint outcome probabilities, sorted by descending probability."""

    entries: tuple[tuple[tuple[str, ...], float], ...]

    def probability(self, melody: tuple[str, ...]) -> float:
        for known, p in self.entries:
            if known == melody:
                return p
        return 0.0


class HeardNote(NamedTuple):
    voice: str
    label: str  # note name, "lo+hi" for a sounding pair, or "rest"
    duration: Fraction


@dataclass(frozen=True)
class PerformanceSample:
    """One classical realization of a score."""

    seed: int  # initial state of this sample's rng stream
    index: int
    heard: tuple[HeardNote, ...]
    probability: float

    @property
    def melody(self) -> tuple[str, ...]:
        return tuple(note.label for note in self.heard)


# ---------------------------------------------------------------------------
# Per-event states and distributions


def _mode_outcome(label: str) -> str:
    """Occupancy basis label to heard label: "1_g" -> "g", "0_g" -> rest."""
    if label.startswith("1_"):
        return label[2:]
    if label.startswith("0_"):
        return REST
    return label


def _event_state(event: Event, model: ScoreModel | None) -> StateVector:
    """State vector of a two-dimensional (gateable) event."""
    if isinstance(event, SupEvent):
        return qcore.normalize([amp.value for amp, _ in event.parts],
                               [note.name for _, note in event.parts])
    if isinstance(event, OccEvent):
        return occupancy_vector(occupancy_state(
            event.note, event.alpha.value, event.beta.value))
    if isinstance(event, PureEvent):
        return occupancy_vector(occupied_state(event.note))
    if isinstance(event, GateEvent):
        inner = _event_state(event.inner, model)
        return qcore.apply_unitary(qcore.gate(event.gate), inner)
    raise NotMeasurableError(f"no state vector for {event!r}")


def _event_dist(event: Event, model: ScoreModel | None) -> Distribution:
    if isinstance(event, BarEvent):
        raise NotMeasurableError("a bar line is not a measurable event")
    if isinstance(event, PureEvent):
        return Distribution(((event.note.name, 1.0),))
    if isinstance(event, BellEvent):
        state = qcore.bell_state(event.kind, event.note_lo, event.note_hi)
        probs = [p for _, p in qcore.born_distribution(state).outcomes]
        lo, hi = event.note_lo.name, event.note_hi.name
        labels = (REST, hi, lo, f"{lo}+{hi}")  # basis order 00,01,10,11
        return Distribution(tuple(zip(labels, probs)))
    born = qcore.born_distribution(_event_state(event, model))
    return Distribution(tuple(
        (_mode_outcome(label), p) for label, p in born.outcomes))


def event_distribution(ast: ScoreAST, voice_id: str,
                       event_index: int) -> EventDistribution:
    """Born distribution of one timed event of one voice."""
    events = ast.voice(voice_id).events
    if not 0 <= event_index < len(events):
        raise IndexError(
            f"event index {event_index} out of range for voice "
            f"'{voice_id}' with {len(events)} events")
    return EventDistribution(event_index,
                             _event_dist(events[event_index], ast.model))


def _measurable(events: Iterable[Event]) -> list[Event]:
    return [e for e in events if not isinstance(e, BarEvent)]


def _enumerate_joint(dists: list[Distribution],
                     cap: int) -> MelodyDistribution:
    count = 1
    for d in dists:
        count *= len(d.outcomes)
    if count > cap:
        raise EnumerationTooLargeError(count, cap)
    entries = []
    for combo in itertools.product(*(d.outcomes for d in dists)):
        p = 1.0
        for _, q in combo:
            p *= q
        entries.append((tuple(label for label, _ in combo), p))
    entries.sort(key=lambda entry: (-entry[1], entry[0]))
    return MelodyDistribution(tuple(entries))


def melody_distribution(ast: ScoreAST, voice_id: str,
                        cap: int = ENUM_CAP) -> MelodyDistribution:
    """Exact joint distribution over one voice's heard melodies."""
    dists = [_event_dist(e, ast.model)
             for e in _measurable(ast.voice(voice_id).events)]
    return _enumerate_joint(dists, cap)


def score_distribution(ast: ScoreAST, cap: int = ENUM_CAP) \
        -> MelodyDistribution:
    """Joint distribution across all voices (voices are independent)."""
    dists = [_event_dist(e, ast.model)
             for voice in ast.voices for e in _measurable(voice.events)]
    return _enumerate_joint(dists, cap)


# ---------------------------------------------------------------------------
# Sampling


def sample_performance(ast: ScoreAST, seed: int,
                       count: int) -> list[PerformanceSample]:
    """Draw ``count`` independent performances of the whole score.

    Sample ``k`` is produced from the rng stream split off ``(seed, k)``,
    so results do not depend on evaluation order and repeat exactly for
    the same arguments.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    plan = []
    for voice in ast.voices:
        for event in _measurable(voice.events):
            dist = _event_dist(event, ast.model)
            pmap = dict(dist.outcomes)
            plan.append((voice.id, dist, pmap,
                         DURATION_VALUES[event.dur or "q"]))
    root = SeededRng.from_seed(seed)
    samples = []
    for k in range(count):
        rng = root.split(k)
        stream_seed = rng.state
        heard = []
        probability = 1.0
        for voice_id, dist, pmap, duration in plan:
            label, rng = qcore.sample_outcome(dist, rng)
            probability *= pmap[label]
            heard.append(HeardNote(voice_id, label, duration))
        samples.append(PerformanceSample(stream_seed, k, tuple(heard),
                                         probability))
    return samples


# ---------------------------------------------------------------------------
# MIDI rendering


def _vlq(value: int) -> bytes:
    """Variable-length quantity used for MIDI delta times."""
    if value < 0:
        raise ValueError("delta time cannot be negative")
    chunks = [value & 0x7F]
    value >>= 7
    while value:
        chunks.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(chunks))


def _label_pitches(label: str) -> list[int]:
    return [midi_pitch(NoteLabel.parse(name)) for name in label.split("+")]


def _tempo_track(tempo_bpm: int) -> bytes:
    microseconds = round(60_000_000 / tempo_bpm)
    data = _vlq(0) + b"\xff\x51\x03" + microseconds.to_bytes(3, "big")
    data += _vlq(0) + b"\xff\x2f\x00"
    return b"MTrk" + len(data).to_bytes(4, "big") + data


def _track_chunk(notes: list[HeardNote]) -> bytes:
    data = bytearray()
    pending = 0
    for note in notes:
        ticks = int(note.duration * _TICKS_PER_WHOLE)
        if note.label == REST:
            pending += ticks
            continue
        pitches = _label_pitches(note.label)
        for i, pitch in enumerate(pitches):
            data += _vlq(pending if i == 0 else 0)
            data += bytes((0x90, pitch, _NOTE_ON_VELOCITY))
            pending = 0
        for i, pitch in enumerate(pitches):
            data += _vlq(ticks if i == 0 else 0)
            data += bytes((0x80, pitch, 0))
    data += _vlq(pending) + b"\xff\x2f\x00"
    return b"MTrk" + len(data).to_bytes(4, "big") + bytes(data)


def render_midi(samples: list[PerformanceSample], tempo_bpm: int) -> bytes:
    """Standard MIDI File, format 1, one track per sampled voice.

    Track 0 carries the single tempo meta event; every sample then
    contributes one track per voice, in voice order.  Channel 0
    throughout; note-on velocity 80; a rest advances the clock without
    emitting notes.  Output depends only on the arguments.
    """
    if not samples:
        raise EmptyInputError("no performances to render")
    tracks: list[bytes] = [_tempo_track(tempo_bpm)]
    for sample in samples:
        voice_order: list[str] = []
        by_voice: dict[str, list[HeardNote]] = {}
        for note in sample.heard:
            if note.voice not in by_voice:
                voice_order.append(note.voice)
                by_voice[note.voice] = []
            by_voice[note.voice].append(note)
        if not voice_order:
            voice_order.append("")
            by_voice[""] = []
        for voice_id in voice_order:
            tracks.append(_track_chunk(by_voice[voice_id]))
    header = (b"MThd" + (6).to_bytes(4, "big") + (1).to_bytes(2, "big") +
              len(tracks).to_bytes(2, "big") +
              TICKS_PER_QUARTER.to_bytes(2, "big"))
    return header + b"".join(tracks)


# ---------------------------------------------------------------------------
# CSV rendering


def render_csv(md: MelodyDistribution) -> str:
    """One row per melody, most probable first, 12 significant digits."""
    lines = ["melody,probability"]
    for melody, p in md.entries:
        lines.append(f"{'-'.join(melody)},{format(p, '.12g')}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Text rendering


def _event_notes(event: Event) -> list[NoteLabel]:
    if isinstance(event, PureEvent):
        return [event.note]
    if isinstance(event, SupEvent):
        return [note for _, note in event.parts]
    if isinstance(event, OccEvent):
        return [event.note]
    if isinstance(event, GateEvent):
        return _event_notes(event.inner)
    if isinstance(event, BellEvent):
        return [event.note_lo, event.note_hi]
    return []


def _event_cells(event: Event, model: ScoreModel | None) -> dict[str, str]:
    """Weight cells for one column: note name -> rendered percent."""
    if isinstance(event, BellEvent):
        probs = dict(_event_dist(event, model).outcomes)
        lo, hi = event.note_lo.name, event.note_hi.name
        both = probs[f"{lo}+{hi}"]
        return {
            lo: f"[{percent_of(probs[lo] + both)}]",
            hi: f"[{percent_of(probs[hi] + both)}]",
        }
    cells = {}
    for label, p in _event_dist(event, model).outcomes:
        if label != REST:
            cells[label] = str(percent_of(p))
    return cells


def render_text(ast: ScoreAST) -> str:
    """Monospaced sketch: one line per note, one column per event.

    Cells carry the integer gray percent of each note in each event
    (phases are dropped); entangled pairs are bracketed.
    """
    blocks: list[str] = []
    for voice in ast.voices:
        lines = [f"voice {voice.id}"]
        notes: list[NoteLabel] = []
        for event in voice.events:
            for note in _event_notes(event):
                if note not in notes:
                    notes.append(note)
        if notes:
            notes.sort(key=lambda n: -n.scale_position)
            columns: list[dict[str, str]] = []
            for event in voice.events:
                if isinstance(event, BarEvent):
                    columns.append({note.name: "|" for note in notes})
                else:
                    columns.append(_event_cells(event, ast.model))
            widths = [max((len(cell) for cell in col.values()), default=1)
                      for col in columns]
            name_width = max(len(note.name) for note in notes) + 1
            for note in notes:
                cells = [col.get(note.name, "").rjust(width)
                         for col, width in zip(columns, widths)]
                lines.append(f"{note.name + ':':<{name_width}} "
                             + "  ".join(cells).rstrip())
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
