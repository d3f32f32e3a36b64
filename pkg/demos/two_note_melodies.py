"""Quantum parallelism on two tones.

A score whose two events are superpositions of c and g never plays the
same way twice: every listener hears one classical melody, drawn from the
exact joint distribution computed below.
"""
from pathlib import Path
from collections import Counter

from qmus import (born_distribution, melody_distribution, normalize,
                  sample_performance)
from qmus.score import parse

SCORE = Path(__file__).resolve().parents[1] / "scores" / "two_note_fifth.qms"


def main() -> None:
    print(f"score: {SCORE.name}\n{SCORE.read_text()}")
    ast = parse(SCORE.read_text())

    state = normalize([4, 3], ("c", "g"))
    print("first event state amplitudes:", state.amps)
    print("per-listening probabilities:",
          dict(born_distribution(state).outcomes))

    md = melody_distribution(ast, "v1")
    print("\nexact melody distribution:")
    for melody, p in md.entries:
        print(f"  {'-'.join(melody):<5} {p:.4f}")

    n = 20_000
    counts = Counter(s.melody for s in sample_performance(ast, 42, n))
    print(f"\nempirical frequencies over {n} seeded performances:")
    for melody, p in md.entries:
        print(f"  {'-'.join(melody):<5} {counts[melody] / n:.4f}"
              f"  (exact {p:.4f})")

    print("\nfirst five performances (seed 42):")
    for s in sample_performance(ast, 42, 5):
        print(f"  #{s.index}: {'-'.join(s.melody)}"
              f"  p = {s.probability:.4f}")


if __name__ == "__main__":
    main()
