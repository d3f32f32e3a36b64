"""Occupancy modes rendered as gray levels.

Each note is a two-level mode: silent |0> or sounding |1>.  The mean
occupancy |beta|^2 maps to an ink percentage, which the text renderer
draws as one column per event.
"""
import math
from pathlib import Path

from qmus import (GRAY_LADDER, NoteLabel, angle_state, gray_level,
                  mean_occupancy, render_text)
from qmus.models import complementary_sequence, occupancy_vector
from qmus.qcore import is_complementary
from qmus.score import parse

SCORES = Path(__file__).resolve().parents[1] / "scores"


def main() -> None:
    g = NoteLabel("g")
    print("one real angle parametrizes a mode: alpha=cos(phi), "
          "beta=sin(phi)")
    for phi in (0.0, math.pi / 6, math.pi / 4, math.pi / 2):
        s = angle_state(g, phi)
        print(f"  phi={phi:.3f}  occupancy={mean_occupancy(s):.3f}"
              f"  gray={gray_level(s).percent}%")

    print("\nthe fading ladder and its gray percents:")
    states = complementary_sequence(NoteLabel("a"), GRAY_LADDER)
    print(" ", " ".join(str(gray_level(s).percent) for s in states))

    print("\nadjacent ladder tones are complementary "
          "(overlap strictly inside (0,1)):")
    vectors = [occupancy_vector(s) for s in states]
    flags = [is_complementary(x, y) for x, y in zip(vectors, vectors[1:])]
    print(" ", flags)

    for name in ("gray_ladder.qms", "fading_a.qms"):
        source = (SCORES / name).read_text()
        print(f"\n{name} rendered as a text sketch:")
        print(render_text(parse(source)))


if __name__ == "__main__":
    main()
