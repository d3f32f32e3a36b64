"""Coherent superposition as a change of basis.

Sending a silent g through the Hadamard gate yields the half-half tone;
equivalently, the instrument can be "retuned" so that the rotated pair
(|0>+|1>)/sqrt(2), (|0>-|1>)/sqrt(2) becomes its natural basis.
"""
from qmus import (NoteLabel, apply_unitary, basis_change, born_distribution,
                  gate, inner_product, is_complementary, normalize)
from qmus.models import occupancy_vector, vacuum_state


def main() -> None:
    g = NoteLabel("g")
    vacuum = occupancy_vector(vacuum_state(g))
    print("vacuum g:", vacuum.amps, vacuum.basis_labels)

    mixed = apply_unitary(gate("H"), vacuum)
    print("after H:", mixed.amps)
    print("listening probabilities:",
          dict(born_distribution(mixed).outcomes))

    target = normalize([-1, 1], vacuum.basis_labels)  # (|0>-|1>)/sqrt(2)
    overlap = inner_product(mixed, target)
    print(f"overlap with the half-half target state: {overlap:.3f} "
          "(global phase -1, same physical state)")

    labels = vacuum.basis_labels
    sounding = normalize([1, 0], labels)
    retuned = [normalize([1, 1], labels), normalize([1, -1], labels)]
    u = basis_change([sounding, normalize([0, 1], labels)], retuned)
    print("\nretuning unitary (columns are the rotated pair):")
    print(u.entries.round(3))

    print("\nvacuum vs the half-half tone is a complementary pair:",
          is_complementary(vacuum, mixed))
    print("vacuum vs itself is not:", is_complementary(vacuum, vacuum))


if __name__ == "__main__":
    main()
