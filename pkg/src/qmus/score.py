"""Parser and printer for the quantum score DSL (``.qms`` files).

Grammar (UTF-8 text, ``#`` starts a line comment)::

    score   := header voice+
    header  := "model" ("bundled" int | "modes") newline "tempo" int newline
    voice   := "voice" ident "{" (event | "|")* "}"
    event   := (pure | sup | occ | gated | bell) dur
    pure    := note
    sup     := "sup" ["~"] "{" amp note ("," amp note)* "}"
    occ     := "occ" "(" note "," amp "," amp ")"
    gated   := ("X"|"H"|"I") "(" event_nodur ")"
    bell    := ("psi-"|"psi+"|"phi-"|"phi+") "(" note "," note ")"
    note    := [a-g] "'"*
    dur     := "w" | "h" | "q" | "e"
    amp     := decimal | int "/" int | "-" amp     (optional trailing "i")

``sup`` demands amplitudes that already form a unit vector; ``sup~`` asks
for auto-normalization.  Amplitude literals are kept as exact rationals so
that printing and re-parsing reproduces the score exactly.

Parsing is total: any input yields either a validated ``ScoreAST`` or a
list of ``ParseError`` values (all failures are collected, never raised).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from .models import NoteLabel, OctaveModelConfig, block_candidates
from .qcore import NORM_EPS, BellKind

DURATION_NAMES = ("w", "h", "q", "e")
DURATION_VALUES = {
    "w": Fraction(1),
    "h": Fraction(1, 2),
    "q": Fraction(1, 4),
    "e": Fraction(1, 8),
}
GATE_NAMES = ("X", "H", "I")

_NOTE_RE = re.compile(r"^[a-g]'*$")
_BELL_NAMES = {k.value: k for k in BellKind}

_MAX_GATE_DEPTH = 64


@dataclass(frozen=True)
class ParseError:
    line: int
    col: int
    message: str
    found_token: str = ""

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


def _pow10_denominator(den: int) -> int | None:
    """Smallest k with den | 10^k, or None when no such k exists."""
    k = 0
    for p in (2, 5):
        exp = 0
        while den % p == 0:
            den //= p
            exp += 1
        k = max(k, exp)
    return k if den == 1 else None


@dataclass(frozen=True)
class Amp:
    """Exact amplitude literal: a signed rational, optionally imaginary.

    ``frac`` records whether the source wrote it as a fraction ("4/5") or
    a decimal ("0.8"); printing preserves that choice.
    """

    mag: Fraction
    imag: bool = False
    frac: bool = False

    def __post_init__(self) -> None:
        if not self.frac and _pow10_denominator(self.mag.denominator) is None:
            raise ValueError(
                f"{self.mag} has no exact decimal form; use frac=True")

    @property
    def value(self) -> complex:
        return complex(0, float(self.mag)) if self.imag else complex(
            float(self.mag))

    @property
    def mag_squared(self) -> Fraction:
        return self.mag * self.mag

    def __str__(self) -> str:
        mag = self.mag
        sign = "-" if mag < 0 else ""
        mag = abs(mag)
        if self.frac:
            body = f"{mag.numerator}/{mag.denominator}"
        elif mag.denominator == 1:
            body = str(mag.numerator)
        else:
            k = _pow10_denominator(mag.denominator)
            digits = str(mag.numerator * 10 ** k // mag.denominator)
            digits = digits.rjust(k + 1, "0")
            body = f"{digits[:-k]}.{digits[-k:]}"
        return f"{sign}{body}{'i' if self.imag else ''}"


_POS = tuple[int, int]


@dataclass(frozen=True)
class PureEvent:
    note: NoteLabel
    dur: str | None = None
    pos: _POS = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class SupEvent:
    parts: tuple[tuple[Amp, NoteLabel], ...]
    renorm: bool = False
    dur: str | None = None
    pos: _POS = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class OccEvent:
    note: NoteLabel
    alpha: Amp
    beta: Amp
    dur: str | None = None
    pos: _POS = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class GateEvent:
    gate: str
    inner: "Event"
    dur: str | None = None
    pos: _POS = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class BellEvent:
    kind: BellKind
    note_lo: NoteLabel
    note_hi: NoteLabel
    dur: str | None = None
    pos: _POS = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class BarEvent:
    pos: _POS = field(default=(1, 1), compare=False, repr=False)


Event = Union[PureEvent, SupEvent, OccEvent, GateEvent, BellEvent, BarEvent]


@dataclass(frozen=True)
class ScoreModel:
    kind: str  # "bundled" or "modes"
    dim: int | None = None


@dataclass(frozen=True)
class Voice:
    id: str
    events: tuple[Event, ...]


@dataclass(frozen=True)
class ScoreAST:
    model: ScoreModel | None
    tempo_bpm: int | None
    voices: tuple[Voice, ...]

    def voice(self, voice_id: str) -> Voice:
        for v in self.voices:
            if v.id == voice_id:
                return v
        raise KeyError(voice_id)


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Token:
    kind: str  # name | number | punct | newline | eof | error
    text: str
    line: int
    col: int


_PUNCT = set("{}(),|~-")
_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_NAME_BODY = _NAME_START | set("0123456789")


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, i, n = 1, 1, 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            tokens.append(_Token("newline", "\n", line, col))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        start_col = col
        if ch in _NAME_START:
            j = i
            while j < n and source[j] in _NAME_BODY:
                j += 1
            while j < n and source[j] == "'":
                j += 1
            text = source[i:j]
            if text in ("psi", "phi") and j < n and source[j] in "+-":
                text += source[j]
                j += 1
            tokens.append(_Token("name", text, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and \
                    source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] == "/" and j + 1 < n and \
                    source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] == "i":
                j += 1
            tokens.append(_Token("number", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        tokens.append(_Token("error", ch, line, start_col))
        i += 1
        col += 1
    last_line = line
    last_col = col
    tokens.append(_Token("eof", "", last_line, max(1, last_col - 1) if
                         col > 1 else 1))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, source: str) -> None:
        self.tokens = _lex(source)
        self.i = 0
        self.errors: list[ParseError] = []

    # -- token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def skip_newlines(self) -> None:
        while self.at("newline"):
            self.advance()

    def error_at(self, tok: _Token, message: str) -> None:
        self.errors.append(ParseError(tok.line, tok.col, message, tok.text))

    def expect_punct(self, text: str, context: str) -> bool:
        if self.at("punct", text):
            self.advance()
            return True
        tok = self.peek()
        self.error_at(tok, f"expected '{text}' {context}")
        return False

    # -- grammar

    def parse_score(self) -> ScoreAST:
        model = self.parse_header_model()
        tempo = self.parse_header_tempo()
        voices: list[Voice] = []
        while True:
            self.skip_newlines()
            if self.at("eof"):
                break
            if self.at("name", "voice"):
                voice = self.parse_voice()
                if voice is not None:
                    voices.append(voice)
                continue
            self.error_at(self.peek(), "expected 'voice'")
            # resynchronize on the next voice declaration
            while not self.at("eof") and not self.at("name", "voice"):
                self.advance()
        return ScoreAST(model, tempo, tuple(voices))

    def parse_header_model(self) -> ScoreModel | None:
        self.skip_newlines()
        if not self.at("name", "model"):
            self.error_at(self.peek(),
                          "missing header: expected 'model bundled <dim>' "
                          "or 'model modes'")
            return None
        self.advance()
        tok = self.peek()
        if tok.kind == "name" and tok.text == "modes":
            self.advance()
            self.end_of_header_line("after 'model modes'")
            return ScoreModel("modes")
        if tok.kind == "name" and tok.text == "bundled":
            self.advance()
            dim = self.parse_int("octave block dimension")
            self.end_of_header_line("after the model declaration")
            return ScoreModel("bundled", dim)
        self.error_at(tok, "model must be 'bundled <dim>' or 'modes'")
        self.skip_to_newline()
        return None

    def parse_header_tempo(self) -> int | None:
        self.skip_newlines()
        if not self.at("name", "tempo"):
            self.error_at(self.peek(),
                          "missing header: expected 'tempo <bpm>'")
            return None
        self.advance()
        tempo = self.parse_int("tempo")
        if tempo is not None and tempo <= 0:
            self.error_at(self.peek(), "tempo must be a positive integer")
            tempo = None
        self.end_of_header_line("after the tempo declaration")
        return tempo

    def parse_int(self, what: str) -> int | None:
        tok = self.peek()
        if tok.kind == "number" and tok.text.isdigit():
            self.advance()
            return int(tok.text)
        self.error_at(tok, f"expected an integer {what}")
        return None

    def end_of_header_line(self, context: str) -> None:
        if self.at("newline") or self.at("eof"):
            return
        self.error_at(self.peek(), f"expected end of line {context}")
        self.skip_to_newline()

    def skip_to_newline(self) -> None:
        while not self.at("newline") and not self.at("eof"):
            self.advance()

    def parse_voice(self) -> Voice | None:
        self.advance()  # 'voice'
        tok = self.peek()
        if tok.kind != "name":
            self.error_at(tok, "expected a voice name")
            return None
        voice_id = self.advance().text
        self.skip_newlines()
        if not self.expect_punct("{", "to open the voice body"):
            return Voice(voice_id, ())
        events: list[Event] = []
        while True:
            self.skip_newlines()
            if self.at("punct", "}"):
                self.advance()
                break
            if self.at("eof"):
                self.error_at(self.peek(), f"voice '{voice_id}' is not "
                              "closed with '}'")
                break
            if self.at("punct", "|"):
                tok = self.advance()
                events.append(BarEvent(pos=(tok.line, tok.col)))
                continue
            event = self.parse_event()
            if event is not None:
                events.append(event)
            else:
                self.recover_inside_voice()
        return Voice(voice_id, tuple(events))

    def recover_inside_voice(self) -> None:
        """Skip at least one token, up to a plausible event boundary."""
        self.advance()
        while not self.at("eof"):
            tok = self.peek()
            if tok.kind in ("newline",):
                return
            if tok.kind == "punct" and tok.text in "|}":
                return
            if tok.kind == "name" and (
                    tok.text in ("sup", "occ", "voice") or
                    tok.text in GATE_NAMES or tok.text in _BELL_NAMES or
                    _NOTE_RE.match(tok.text)):
                return
            self.advance()

    def parse_event(self) -> Event | None:
        head = self.parse_head(depth=0)
        if head is None:
            return None
        tok = self.peek()
        if tok.kind == "name" and tok.text in DURATION_NAMES:
            self.advance()
            return _with_duration(head, tok.text)
        self.error_at(tok, "expected a duration (w, h, q or e)")
        return None

    def parse_head(self, depth: int) -> Event | None:
        tok = self.peek()
        if tok.kind != "name":
            self.error_at(tok, "expected an event")
            return None
        pos = (tok.line, tok.col)
        if tok.text == "sup":
            return self.parse_sup(pos)
        if tok.text == "occ":
            return self.parse_occ(pos)
        if tok.text in GATE_NAMES:
            return self.parse_gated(pos, depth)
        if tok.text in _BELL_NAMES:
            return self.parse_bell(pos)
        if _NOTE_RE.match(tok.text):
            self.advance()
            return PureEvent(NoteLabel.parse(tok.text), pos=pos)
        self.error_at(tok, "expected an event")
        return None

    def parse_sup(self, pos: _POS) -> SupEvent | None:
        self.advance()  # 'sup'
        renorm = False
        if self.at("punct", "~"):
            renorm = True
            self.advance()
        if not self.expect_punct("{", "after 'sup'"):
            return None
        parts: list[tuple[Amp, NoteLabel]] = []
        while True:
            amp = self.parse_amp()
            if amp is None:
                return None
            note = self.parse_note()
            if note is None:
                return None
            parts.append((amp, note))
            if self.at("punct", ","):
                self.advance()
                continue
            if self.at("punct", "}"):
                self.advance()
                return SupEvent(tuple(parts), renorm, pos=pos)
            self.error_at(self.peek(),
                          "expected ',' or '}' in the superposition")
            return None

    def parse_occ(self, pos: _POS) -> OccEvent | None:
        self.advance()  # 'occ'
        if not self.expect_punct("(", "after 'occ'"):
            return None
        note = self.parse_note()
        if note is None or not self.expect_punct(",", "after the note"):
            return None
        alpha = self.parse_amp()
        if alpha is None or not self.expect_punct(",", "after the silent "
                                                  "amplitude"):
            return None
        beta = self.parse_amp()
        if beta is None or not self.expect_punct(")", "to close 'occ'"):
            return None
        return OccEvent(note, alpha, beta, pos=pos)

    def parse_gated(self, pos: _POS, depth: int) -> GateEvent | None:
        gate_tok = self.advance()
        if depth >= _MAX_GATE_DEPTH:
            self.error_at(gate_tok, "gate nesting is too deep")
            return None
        if not self.expect_punct("(", f"after gate '{gate_tok.text}'"):
            return None
        inner = self.parse_head(depth + 1)
        if inner is None:
            return None
        if not self.expect_punct(")", "to close the gated event"):
            return None
        return GateEvent(gate_tok.text, inner, pos=pos)

    def parse_bell(self, pos: _POS) -> BellEvent | None:
        kind = _BELL_NAMES[self.advance().text]
        if not self.expect_punct("(", "after the pair kind"):
            return None
        lo = self.parse_note()
        if lo is None or not self.expect_punct(",", "between the pair's "
                                               "notes"):
            return None
        hi = self.parse_note()
        if hi is None or not self.expect_punct(")", "to close the pair"):
            return None
        return BellEvent(kind, lo, hi, pos=pos)

    def parse_note(self) -> NoteLabel | None:
        tok = self.peek()
        if tok.kind == "name" and _NOTE_RE.match(tok.text):
            self.advance()
            return NoteLabel.parse(tok.text)
        self.error_at(tok, "expected a note (a-g, primes raise the octave)")
        return None

    def parse_amp(self) -> Amp | None:
        sign = 1
        while self.at("punct", "-"):
            sign = -sign
            self.advance()
        tok = self.peek()
        if tok.kind != "number":
            self.error_at(tok, "expected an amplitude")
            return None
        self.advance()
        text = tok.text
        imag = text.endswith("i")
        if imag:
            text = text[:-1]
        if "/" in text:
            num, _, den = text.partition("/")
            if "." in num or "." in den:
                self.error_at(tok, "fraction amplitudes need integer parts")
                return None
            if int(den) == 0:
                self.error_at(tok, "fraction amplitude has a zero "
                              "denominator")
                return None
            return Amp(sign * Fraction(int(num), int(den)), imag, frac=True)
        return Amp(sign * Fraction(text), imag, frac=False)


def _with_duration(event: Event, dur: str) -> Event:
    if isinstance(event, PureEvent):
        return PureEvent(event.note, dur, event.pos)
    if isinstance(event, SupEvent):
        return SupEvent(event.parts, event.renorm, dur, event.pos)
    if isinstance(event, OccEvent):
        return OccEvent(event.note, event.alpha, event.beta, dur, event.pos)
    if isinstance(event, GateEvent):
        return GateEvent(event.gate, event.inner, dur, event.pos)
    if isinstance(event, BellEvent):
        return BellEvent(event.kind, event.note_lo, event.note_hi, dur,
                         event.pos)
    raise TypeError(f"cannot attach a duration to {event!r}")


def parse(source: str) -> ScoreAST | list[ParseError]:
    """Parse and validate; returns the AST or every collected error."""
    parser = _Parser(source)
    for tok in parser.tokens:
        if tok.kind == "error":
            parser.error_at(tok, f"unexpected character {tok.text!r}")
    ast = parser.parse_score()
    errors = parser.errors + validate(ast)
    if errors:
        return sorted(errors, key=lambda e: (e.line, e.col))
    return ast


# ---------------------------------------------------------------------------
# Validation


def _norm_squared_error(parts: list[Amp], pos: _POS,
                        what: str, hint: str = "") -> ParseError | None:
    norm_sq = sum((a.mag_squared for a in parts), Fraction(0))
    if abs(float(norm_sq) - 1.0) > NORM_EPS:
        shown = format(float(norm_sq), ".6g")
        return ParseError(pos[0], pos[1],
                          f"{what} norm² = {shown}, expected 1{hint}")
    return None


def _effective_dim(event: Event, model: ScoreModel | None) -> int | None:
    if isinstance(event, PureEvent):
        if model is None:
            return None  # cannot judge a bare note without a model
        return 2 if model.kind == "modes" else 1
    if isinstance(event, SupEvent):
        return len(event.parts)
    if isinstance(event, OccEvent):
        return 2
    if isinstance(event, BellEvent):
        return 4
    if isinstance(event, GateEvent):
        return _effective_dim(event.inner, model)
    return 0


def _shares_block(notes: list[NoteLabel], dim: int) -> bool:
    cfg = OctaveModelConfig(dim)
    common = None
    for note in notes:
        candidates = block_candidates(note, cfg)
        common = candidates if common is None else common & candidates
    return common is None or bool(common)


def _validate_event(event: Event, model: ScoreModel | None,
                    errors: list[ParseError]) -> None:
    bundled = model is not None and model.kind == "bundled"
    if isinstance(event, SupEvent):
        notes = [note for _, note in event.parts]
        if len(set(notes)) != len(notes):
            errors.append(ParseError(*event.pos,
                                     "superposition repeats a note"))
        if all(a.mag == 0 for a, _ in event.parts):
            errors.append(ParseError(*event.pos,
                                     "superposition has no nonzero "
                                     "amplitude"))
        elif not event.renorm:
            err = _norm_squared_error([a for a, _ in event.parts], event.pos,
                                      "superposition",
                                      " (use sup~ to renormalize)")
            if err is not None:
                errors.append(err)
        if bundled and model.dim in (7, 8) and \
                not _shares_block(notes, model.dim):
            errors.append(ParseError(*event.pos,
                                     "superposition notes span more than "
                                     "one octave block"))
    elif isinstance(event, OccEvent):
        if bundled:
            errors.append(ParseError(*event.pos,
                                     "occ events require the modes model"))
        err = _norm_squared_error([event.alpha, event.beta], event.pos,
                                  "occupancy")
        if err is not None:
            errors.append(err)
    elif isinstance(event, BellEvent):
        if bundled:
            errors.append(ParseError(*event.pos,
                                     "entangled pairs require the modes "
                                     "model"))
        if event.note_lo == event.note_hi:
            errors.append(ParseError(*event.pos,
                                     "entangled pair needs two distinct "
                                     "notes"))
    elif isinstance(event, GateEvent):
        dim = _effective_dim(event.inner, model)
        if dim is not None and dim != 2:
            errors.append(ParseError(*event.pos,
                                     f"gate {event.gate} needs a "
                                     f"two-dimensional event, got {dim} "
                                     "dimensions"))
        _validate_event(event.inner, model, errors)


def validate(ast: ScoreAST) -> list[ParseError]:
    """Semantic checks; returns an empty list for a valid score."""
    errors: list[ParseError] = []
    if ast.model is not None and ast.model.kind == "bundled" and \
            ast.model.dim not in (7, 8):
        errors.append(ParseError(1, 1, "octave block dimension must be "
                                 "7 or 8"))
    if not ast.voices:
        errors.append(ParseError(1, 1, "score declares no voice"))
    seen: set[str] = set()
    for voice in ast.voices:
        if voice.id in seen:
            errors.append(ParseError(1, 1,
                                     f"duplicate voice id '{voice.id}'"))
        seen.add(voice.id)
        for event in voice.events:
            if not isinstance(event, BarEvent) and event.dur is not None \
                    and event.dur not in DURATION_NAMES:
                errors.append(ParseError(*event.pos,
                                         f"unknown duration "
                                         f"'{event.dur}'"))
            _validate_event(event, ast.model, errors)
    return errors


# ---------------------------------------------------------------------------
# Pretty printer


def _event_text(event: Event) -> str:
    if isinstance(event, PureEvent):
        body = event.note.name
    elif isinstance(event, SupEvent):
        inner = ", ".join(f"{amp} {note}" for amp, note in event.parts)
        body = f"sup{'~' if event.renorm else ''}{{{inner}}}"
    elif isinstance(event, OccEvent):
        body = f"occ({event.note}, {event.alpha}, {event.beta})"
    elif isinstance(event, GateEvent):
        body = f"{event.gate}({_event_text(event.inner)})"
    elif isinstance(event, BellEvent):
        body = f"{event.kind.value}({event.note_lo}, {event.note_hi})"
    else:
        raise TypeError(f"unknown event {event!r}")
    if event.dur is not None:
        body += f" {event.dur}"
    return body


def pretty_print(ast: ScoreAST) -> str:
    """Canonical text form; parsing it back yields an equal AST."""
    lines: list[str] = []
    if ast.model is not None:
        if ast.model.kind == "bundled":
            lines.append(f"model bundled {ast.model.dim}")
        else:
            lines.append("model modes")
    if ast.tempo_bpm is not None:
        lines.append(f"tempo {ast.tempo_bpm}")
    for voice in ast.voices:
        lines.append(f"voice {voice.id} {{")
        for event in voice.events:
            if isinstance(event, BarEvent):
                lines.append("  |")
            else:
                lines.append(f"  {_event_text(event)}")
        lines.append("}")
    return "\n".join(lines) + "\n"


def iter_events(ast: ScoreAST) -> Iterator[tuple[str, Event]]:
    """All events of all voices in score order, tagged with the voice id."""
    for voice in ast.voices:
        for event in voice.events:
            yield voice.id, event
