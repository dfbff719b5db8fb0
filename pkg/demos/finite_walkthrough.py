"""Walk through the four-point example: axioms, constants, orbits, P property."""

from pbmetric import (
    check_banach, check_chatterjea, check_orbit_contraction, fixed_points, iterate_all,
    minimal_coefficient, p_property, verify_axioms,
)
from pbmetric.golden import example1_discrepancies, example1_map, example1_space


def main():
    space, T = example1_space(), example1_map()
    print("distance table:")
    for x, row in zip(space.points, space.table):
        print(f"  {x}: " + "  ".join(f"{str(v):>2}" for v in row))

    rep = verify_axioms(space, 4)
    print(f"axioms at s = 4: {rep.passed}")
    s_min, witness = minimal_coefficient(space, with_witness=True)
    print(f"least coefficient: {s_min} (attained at x, y, z = {witness})")
    print(f"with s = 1, pm4 fails at {verify_axioms(space, 1).witnesses['pm4']}")

    banach = check_banach(space, T)
    print(f"Banach constant {banach.constant} at {banach.witness}")
    ch = check_chatterjea(space, T, 4)
    print(f"Chatterjea constant {ch.constant}, needs < {ch.threshold}: admissible={ch.admissible}")
    print(f"orbit constant {check_orbit_contraction(space, T).constant}")

    for tr in iterate_all(space, T):
        print(f"  orbit from {tr.orbit[0]}: {tr.orbit}  steps {[str(b) for b in tr.b]}")
    fp = fixed_points(space, T)
    print(f"fixed points {fp.points}, self-distances "
          + ", ".join(f"p({u},{u}) = {v}" for u, v in fp.self_distances.items()))
    print(f"P property: {p_property(space, T).implication}")

    print("printed vs corrected:")
    for d in example1_discrepancies(space):
        print(f"  {d['item']}: printed {d['printed']}, corrected {d['corrected']} ({d['reason']})")


if __name__ == "__main__":
    main()
