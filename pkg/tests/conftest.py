from pathlib import Path

import pytest

from qmus.score import ScoreAST, parse

REPO_ROOT = Path(__file__).resolve().parents[1]
SCORES_DIR = REPO_ROOT / "scores"
GOLDEN_DIR = Path(__file__).parent / "golden"

TWO_NOTE_SOURCE = (
    "model bundled 7\n"
    "tempo 120\n"
    "voice v1 { sup{0.8 c, 0.6 g} q sup{0.6 c, 0.8 g} q }\n"
)


def parse_ok(source: str) -> ScoreAST:
    result = parse(source)
    assert isinstance(result, ScoreAST), f"unexpected errors: {result}"
    return result


@pytest.fixture
def two_note_ast() -> ScoreAST:
    return parse_ok(TWO_NOTE_SOURCE)


@pytest.fixture
def two_note_path() -> Path:
    return SCORES_DIR / "two_note_fifth.qms"
