import subprocess
import sys

import pytest

from qmus.cli import run

from conftest import GOLDEN_DIR, SCORES_DIR, TWO_NOTE_SOURCE


@pytest.fixture
def broken_score(tmp_path):
    path = tmp_path / "broken.qms"
    path.write_text("voice v1 { sup{0.5 c, 0.5 g} q }\n")
    return path


class TestCheck:
    def test_valid_score(self, two_note_path, capsys):
        assert run(["check", str(two_note_path)]) == 0
        assert capsys.readouterr().out == "OK\n"

    def test_all_shipped_scores_are_valid(self, capsys):
        for path in sorted(SCORES_DIR.glob("*.qms")):
            assert run(["check", str(path)]) == 0, path
        capsys.readouterr()

    def test_broken_score_reports_every_error(self, broken_score, capsys):
        assert run(["check", str(broken_score)]) == 1
        err = capsys.readouterr().err
        lines = err.strip().splitlines()
        assert len(lines) >= 2
        for line in lines:
            location, _, message = line.partition(": ")
            row, _, col = location.partition(":")
            assert row.isdigit() and col.isdigit()
            assert message

    def test_missing_file(self, tmp_path, capsys):
        assert run(["check", str(tmp_path / "nope.qms")]) == 2
        assert "cannot read" in capsys.readouterr().err


class TestAnalyze:
    def test_two_note_csv_to_stdout(self, two_note_path, capsys):
        assert run(["analyze", str(two_note_path)]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "melody,probability"
        assert out.splitlines()[1] == "c-g,0.4096"

    def test_stdout_is_byte_stable(self, two_note_path, capsys):
        run(["analyze", str(two_note_path)])
        first = capsys.readouterr().out
        run(["analyze", str(two_note_path)])
        assert capsys.readouterr().out == first

    def test_out_flag_writes_file(self, two_note_path, tmp_path, capsys):
        target = tmp_path / "dist.csv"
        assert run(["analyze", str(two_note_path), "--out",
                    str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text() == \
            (GOLDEN_DIR / "two_note_fifth.csv").read_text()

    def test_enumeration_cap_env(self, two_note_path, capsys, monkeypatch):
        monkeypatch.setenv("QMUS_ENUM_CAP", "2")
        assert run(["analyze", str(two_note_path)]) == 3
        err = capsys.readouterr().err
        assert "4 joint outcomes" in err and "sample" in err

    def test_invalid_cap_env_is_ignored(self, two_note_path, capsys,
                                        monkeypatch):
        monkeypatch.setenv("QMUS_ENUM_CAP", "many")
        assert run(["analyze", str(two_note_path)]) == 0
        assert "ignoring invalid" in capsys.readouterr().err


class TestPerform:
    def test_log_format(self, two_note_path, capsys):
        assert run(["perform", str(two_note_path), "--seed", "42",
                    "--count", "3"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3
        index, melody, probability = lines[0].split(" ")
        assert index == "0"
        assert melody == "c-g"
        assert float(probability) == pytest.approx(0.4096, abs=1e-12)

    def test_deterministic_across_runs(self, two_note_path, capsys):
        run(["perform", str(two_note_path), "--seed", "42", "--count", "5"])
        first = capsys.readouterr().out
        run(["perform", str(two_note_path), "--seed", "42", "--count", "5"])
        assert capsys.readouterr().out == first

    def test_zero_count_is_a_usage_error(self, two_note_path, capsys):
        assert run(["perform", str(two_note_path), "--count", "0"]) == 2
        assert "--count" in capsys.readouterr().err

    def test_defaults_to_seed_zero_count_one(self, two_note_path, capsys):
        assert run(["perform", str(two_note_path)]) == 0
        default = capsys.readouterr().out
        run(["perform", str(two_note_path), "--seed", "0", "--count", "1"])
        assert capsys.readouterr().out == default
        assert len(default.splitlines()) == 1


class TestRender:
    def test_midi_matches_golden(self, two_note_path, tmp_path):
        target = tmp_path / "out.mid"
        assert run(["render", str(two_note_path), "--format", "midi",
                    "--seed", "42", "--out", str(target)]) == 0
        golden = (GOLDEN_DIR / "two_note_fifth_seed42.mid").read_bytes()
        assert target.read_bytes() == golden

    def test_midi_count_adds_tracks(self, two_note_path, tmp_path):
        target = tmp_path / "out.mid"
        run(["render", str(two_note_path), "--format", "midi",
             "--count", "3", "--out", str(target)])
        data = target.read_bytes()
        assert int.from_bytes(data[10:12], "big") == 4  # tempo + 3 samples

    def test_csv_format(self, two_note_path, capsys):
        assert run(["render", str(two_note_path), "--format", "csv"]) == 0
        assert capsys.readouterr().out == \
            (GOLDEN_DIR / "two_note_fifth.csv").read_text()

    def test_text_format(self, capsys):
        assert run(["render", str(SCORES_DIR / "half_g.qms"),
                    "--format", "text"]) == 0
        assert capsys.readouterr().out == "voice solo\ng: 50\n"

    def test_format_is_required(self, two_note_path, capsys):
        assert run(["render", str(two_note_path)]) == 2
        capsys.readouterr()

    def test_write_failure_is_io_error(self, two_note_path, tmp_path,
                                       capsys):
        target = tmp_path / "missing" / "out.csv"
        assert run(["analyze", str(two_note_path), "--out",
                    str(target)]) == 2
        assert "cannot write" in capsys.readouterr().err


class TestEntryPoints:
    def test_module_invocation(self, tmp_path):
        score = tmp_path / "s.qms"
        score.write_text(TWO_NOTE_SOURCE)
        result = subprocess.run(
            [sys.executable, "-m", "qmus", "check", str(score)],
            capture_output=True, text=True)
        assert result.returncode == 0
        assert result.stdout == "OK\n"

    def test_sampling_agrees_across_processes(self, two_note_path, capsys):
        args = ["perform", str(two_note_path), "--seed", "42",
                "--count", "10"]
        assert run(args) == 0
        in_process = capsys.readouterr().out
        result = subprocess.run([sys.executable, "-m", "qmus", *args],
                                capture_output=True, text=True)
        assert result.stdout == in_process

    def test_usage_error_exit_code(self):
        result = subprocess.run(
            [sys.executable, "-m", "qmus", "frobnicate"],
            capture_output=True, text=True)
        assert result.returncode == 2

    def test_help_exits_cleanly(self):
        result = subprocess.run(
            [sys.executable, "-m", "qmus", "--help"],
            capture_output=True, text=True)
        assert result.returncode == 0
        assert "analyze" in result.stdout
