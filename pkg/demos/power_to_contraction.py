"""A map that is not a contraction but whose square is, made into one by reweighting."""

from fractions import Fraction

from pbmetric import (
    PartialBMetricSpace, SelfMap, build_h_series, build_pprime, check_banach,
    verify_transform_contraction,
)


def main():
    d = {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 2}
    space = PartialBMetricSpace.from_function(
        "abc", lambda x, y: 0 if x == y else d.get((x, y), d.get((y, x))), 1)
    T = SelfMap.from_dict({"a": "a", "b": "a", "c": "b"})

    print(f"Banach constant of T: {check_banach(space, T).constant}")
    print(f"Banach constant of T^2: {check_banach(space, T.power(2)).constant}")

    K, lam = Fraction(1, 4), Fraction(3, 2)
    t = build_pprime(space, T, 2, K, lam)
    for x in space.points:
        print("  " + "  ".join(f"{str(t.p(x, y)):>4}" for y in space.points))
    chk = verify_transform_contraction(t)
    print(f"T contracts p' by 1/lam = {1 / lam}: {chk.holds}; identity exact: {chk.identity_holds}")

    h = build_h_series(space, T, lam, n=2, K=K)
    print(f"series metric equals p' here; sandwich factor {h.details['sandwich_factor']}")


if __name__ == "__main__":
    main()
