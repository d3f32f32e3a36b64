"""Entangled two-note states and what a sampled audience hears.

A two-mode state with amplitudes (a1, a2, a3, a4) over (00, 01, 10, 11)
is entangled exactly when a1*a4 != a2*a3.  The four maximally entangled
pairs satisfy it; sampling them shows the perfect (anti)correlations.
"""
from collections import Counter
from pathlib import Path

from qmus import (BellKind, NoteLabel, bell_state, inner_product,
                  is_entangled, normalize, sample_performance, tensor)
from qmus.score import parse

SCORES = Path(__file__).resolve().parents[1] / "scores"


def main() -> None:
    e, a = NoteLabel("e"), NoteLabel("a")
    print("the four entangled pairs over e and a:")
    states = {kind: bell_state(kind, e, a) for kind in BellKind}
    for kind, state in states.items():
        print(f"  {kind.value}: amps={state.amps}"
              f"  entangled={is_entangled(state)}")

    print("\npairwise overlaps (an orthonormal family):")
    for left in BellKind:
        row = [abs(inner_product(states[left], states[right]))
               for right in BellKind]
        print("  " + "  ".join(f"{v:.1f}" for v in row))

    plus = normalize([1, 1], ("0_e", "1_e"))
    silent_a = normalize([1, 0], ("0_a", "1_a"))
    product = tensor(plus, silent_a)
    print(f"\na product state is never entangled: {is_entangled(product)}")

    ast = parse((SCORES / "bell_pairs.qms").read_text())
    n = 10_000
    counts = Counter(s.melody for s in sample_performance(ast, 7, n))
    print(f"\n{n} performances of bell_pairs.qms "
          "(psi events: exactly one note; phi events: both or neither):")
    for melody, count in counts.most_common(8):
        print(f"  {'-'.join(melody):<20} {count / n:.4f}")

    cross = bell_state(BellKind.PHI_PLUS, e, NoteLabel("a", 1))
    print(f"\nentanglement across octaves (e with a'): "
          f"{is_entangled(cross)}")


if __name__ == "__main__":
    main()
