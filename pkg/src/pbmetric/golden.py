"""Reference instances with known answers.

Example 1 is a four-point space with ``p(x,y) = |x-y|^2 + max{x,y}`` off the
diagonal, ``p(x,x) = x`` except ``p(1,1) = 0``, and the map
``1->1, 2->1, 3->2, 4->2``. Its published form prints two values that clash
with the formula and with the stated unique fixed point (``p(1,3) = 4`` and
``T3 = 3``); both are kept here as ``PRINTED`` and reported side by side.

Example 2 is ``[0, 1]`` with ``p(x,y) = |x-y|^2`` and ``Tx = exp(x - 2)``.
"""

from __future__ import annotations

import math

from .contraction import (
    check_banach, check_chatterjea, check_chatterjea_kannan,
    check_chatterjea_max, check_orbit_contraction, check_power_banach,
)
from .maps import SelfMap
from .picard import certify_rate, fixed_points, iterate, iterate_all, step_ratios
from .space import FunctionSpace, PartialBMetricSpace, minimal_coefficient, verify_axioms
from .stability import StabilityParams, run_perturbed, scaled_fixed_point, stability_condition

EXAMPLE1_S = 4

# values as printed alongside the example
PRINTED = {
    "p": {(1, 2): 3, (1, 3): 4, (1, 4): 13, (2, 3): 4, (2, 4): 8, (3, 4): 5},
    "map": {1: 1, 2: 1, 3: 3, 4: 2},
    "unique_fixed_point": 1,
    # the worked inequalities evaluate p(T3, T4) as p(2, 2)
    "p_T3_T4_as": (2, 2),
}


def example1_distance(x, y) -> int:
    if x == y:
        return 0 if x == 1 else x
    return abs(x - y) ** 2 + max(x, y)


def example1_space(declared_s=EXAMPLE1_S) -> PartialBMetricSpace:
    return PartialBMetricSpace.from_function((1, 2, 3, 4), example1_distance, declared_s)


def example1_map() -> SelfMap:
    return SelfMap.from_dict({1: 1, 2: 1, 3: 2, 4: 2})


def example1_discrepancies(space=None) -> list:
    """Printed values that disagree with the formula or with uniqueness."""
    space = space or example1_space()
    out = []
    for (x, y), printed in PRINTED["p"].items():
        value = space.p(x, y)
        if value != printed:
            out.append({"item": f"p({x},{y})", "printed": printed, "corrected": value,
                        "reason": "formula |x-y|^2 + max{x,y} disagrees"})
    printed_map = SelfMap.from_dict(PRINTED["map"])
    fixed = fixed_points(space, printed_map).points
    a, b = PRINTED["p_T3_T4_as"]
    if fixed != [PRINTED["unique_fixed_point"]]:
        for x in fixed:
            if x != PRINTED["unique_fixed_point"]:
                out.append({"item": f"T{x}", "printed": printed_map(x), "corrected": a,
                            "reason": f"printed map fixes {x}, contradicting the unique "
                                      f"fixed point; p(T3,T4) is evaluated as p({a},{b})"})
    return out


def example2_space(k=2, grid=51) -> FunctionSpace:
    return FunctionSpace(0.0, 1.0, "abs_diff_pow_k", {"k": k}, grid, declared_s=2.0 ** k)


def example2_map(shift=2.0) -> SelfMap:
    return SelfMap.closed_form("exp_shift", shift=shift)


def _example1_report() -> dict:
    space, T = example1_space(), example1_map()
    axioms = verify_axioms(space, EXAMPLE1_S)
    s_min, witness = minimal_coefficient(space, with_witness=True)
    fp = fixed_points(space, T)
    banach = check_banach(space, T)
    traces = iterate_all(space, T)
    ck = check_chatterjea_kannan(space, T, (banach.constant, 0, 0, 0, 0), EXAMPLE1_S)
    return {
        "example": 1,
        "axioms_at_s": {"s": EXAMPLE1_S, "passed": axioms.passed,
                        "pm": [axioms.pm1, axioms.pm2, axioms.pm3, axioms.pm4]},
        "minimal_s": {"value": s_min, "witness": witness},
        "constants": {
            "banach": {"value": banach.constant, "witness": banach.witness},
            "power_banach": check_power_banach(space, T, 4).constants,
            "chatterjea": _summ(check_chatterjea(space, T, EXAMPLE1_S)),
            "chatterjea_max": _summ(check_chatterjea_max(space, T, EXAMPLE1_S)),
            "orbit": _summ(check_orbit_contraction(space, T)),
            "chatterjea_kannan": {"lambdas": ck.details["lambdas"],
                                  "parameter_sum": ck.details["parameter_sum"],
                                  "admissible": ck.admissible},
        },
        "fixed_points": fp.points,
        "self_distance": {u: fp.self_distances[u] for u in fp.points},
        "orbits": {tr.orbit[0]: tr.orbit for tr in traces},
        "discrepancies": example1_discrepancies(space),
    }


def _summ(rep):
    return {"value": rep.constant, "witness": rep.witness, "admissible": rep.admissible}


def _example2_report(steps=10_000) -> dict:
    space, T = example2_space(), example2_map()
    trace = iterate(space, T, 1.0, max_iter=200, tol=1e-24)
    u = trace.fixed_point
    lam1 = math.exp(-2.0)
    ratios = step_ratios(space, trace, u, floor=1e-20)
    params = StabilityParams((lam1, 0.0, 0.0, 0.0, 0.0), 4.0)
    trial = run_perturbed(space, T, u, scaled_fixed_point, steps, params=params)
    cert = certify_rate(trace, lam1, 4.0, tol=1e-15)
    sampled_s = minimal_coefficient(space)
    return {
        "example": 2,
        "k": 2,
        "fixed_point": u,
        "residual": abs(u - float(T(u))),
        "iterations": trace.iterations,
        "lambda1": lam1,
        "max_step_ratio": max(ratios) if ratios else 0.0,
        "rate_certificate": cert.all_pass,
        "s": {"stated_2^k": 4.0, "sharp_2^(k-1)": 2.0, "sampled_minimal": sampled_s},
        "stability_condition": {
            label: {"holds": c.holds, "lhs": c.lhs, "contraction": c.contraction}
            for label, c in (("s=4", stability_condition(params)),
                             ("s=2", stability_condition(StabilityParams(params.lambdas, 2.0))))
        },
        "stability_trial": {
            "schedule": "y_n = n/(n+1) u",
            "steps": steps,
            "final_drift": trial.raw_drift[-1],
            "final_distance": trial.a[-1],
            "final_abs_gap": abs(trial.y[-1] - u),
            "verdict": trial.verdict,
            "recurrence_ok": trial.recurrence_ok,
        },
    }


def reproduce_examples(which) -> dict:
    """Golden report for example 1 or 2 (``which`` may be "all")."""
    if which in (1, "1"):
        return _example1_report()
    if which in (2, "2"):
        return _example2_report()
    if which == "all":
        return {"example1": _example1_report(), "example2": _example2_report()}
    raise ValueError(f"unknown example {which!r}")
