"""Acceptance criteria, one recorded PASS/FAIL line each.

Each test records its verdict in ``conftest.ACCEPTANCE`` before asserting, so
the terminal summary lists every criterion even when some fail.
"""

import math
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from pbmetric import (
    check_banach, check_chatterjea, check_lemma_sequences, fixed_points, minimal_coefficient,
    verify_axioms,
)
from pbmetric.golden import example1_discrepancies, example1_map, example1_space, reproduce_examples
from pbmetric.picard import certify_rate, iterate_all
from pbmetric.search import GenConfig, instance, probe, random_space
from pbmetric.serialize import dump, map_from_dict, space_from_dict, space_to_dict

pytestmark = pytest.mark.slow


def record(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    return ok


def test_criterion_1_example1():
    space, T = example1_space(), example1_map()
    t0 = time.perf_counter()
    axioms = verify_axioms(space, 4)
    elapsed = time.perf_counter() - t0
    s_min = minimal_coefficient(space)
    banach = check_banach(space, T).constant
    fp = fixed_points(space, T)
    items = sorted(d["item"] for d in example1_discrepancies(space))
    ok = (axioms.passed and elapsed < 1 and s_min == Fraction(15, 11)
          and banach == Fraction(3, 4) and fp.points == [1] and fp.self_distances[1] == 0
          and items == ["T3", "p(1,3)"])
    record(1, ok, f"axioms@4={axioms.passed} in {elapsed:.4f}s, s_min={s_min}, "
                  f"banach={banach}, F(T)={fp.points}, discrepancies={items}")
    assert ok


def test_criterion_2_example2():
    rep = reproduce_examples(2)
    st = rep["stability_trial"]
    u = rep["fixed_point"]
    checks = {
        "residual": rep["residual"] < 1e-12,
        "iterations": rep["iterations"] < 200,
        "step_ratio": rep["max_step_ratio"] <= math.exp(-2.0) + 1e-6,
        "drift": st["final_drift"] < 1e-8,
        # p-distance p(y_N, u) = |y_N - u|^2; the raw gap u/(N+1) is reported alongside
        "gap": st["final_distance"] < 1e-6 and st["steps"] == 10_000,
    }
    ok = all(checks.values())
    record(2, ok, f"u={u:.15f}, residual={rep['residual']:.1e}, iterations={rep['iterations']}, "
                  f"max ratio={rep['max_step_ratio']:.4f}, drift={st['final_drift']:.1e}, "
                  f"p(y_N,u)={st['final_distance']:.1e} (raw |y_N-u|={st['final_abs_gap']:.1e})")
    assert ok, checks


def test_criterion_3_transform():
    cfg = GenConfig(target="transform", trials=75_000)
    t0 = time.perf_counter()
    rep = probe(cfg)
    elapsed = time.perf_counter() - t0
    ok = rep.hypothesis >= 10_000 and not rep.counterexamples and elapsed < 60
    record(3, ok, f"{rep.hypothesis} power-contraction instances from {rep.trials} trials, "
                  f"{len(rep.counterexamples)} failures, {elapsed:.1f}s")
    assert ok, rep.counterexamples[:1]


@pytest.fixture(scope="module")
def soundness():
    reps = {}
    for target in ("chatterjea", "chatterjea-max", "chatterjea-kannan"):
        reps[target] = probe(GenConfig(target=target, trials=10_000, stability_runs=8))
    return reps


def test_criterion_4_soundness(soundness):
    parts = []
    ok = True
    for target, rep in soundness.items():
        good = rep.hypothesis > 0 and not rep.counterexamples and not rep.certificate_failures
        ok &= good
        parts.append(f"{target}: {rep.verified}/{rep.hypothesis} unique, "
                     f"{len(rep.certificate_failures)} rate-certificate failures")
    record(4, ok, "; ".join(parts))
    assert ok


def test_criterion_4_uniqueness_only(soundness):
    """The uniqueness half of criterion 4 on its own."""
    for rep in soundness.values():
        assert rep.hypothesis > 0 and rep.verified == rep.hypothesis and not rep.counterexamples


def test_chatterjea_rate_with_s_restored(soundness):
    """Every Chatterjea trace fits the rate lam*s / (1 - lam*s)."""
    rep = soundness["chatterjea"]
    cfg = GenConfig(target="chatterjea")
    for rec in rep.certificate_failures:
        space, T = instance(cfg, rec["trial"])
        s = Fraction(rec["s"])
        lam = check_chatterjea(space, T, s).constant
        mu = lam * s / (1 - lam * s)
        for tr in iterate_all(space, T):
            assert not certify_rate(tr, mu, s).step_failures


def test_criterion_5_stability(soundness):
    st = soundness["chatterjea-kannan"].stability
    trials = st.get("trials", 0)
    failures = trials - st.get("converged", 0)
    ok = trials >= 1000 and failures == 0
    record(5, ok, f"{trials} geometric-noise trials on {st.get('eligible_instances', 0)} "
                  f"eligible instances, {failures} failures, "
                  f"{st.get('recurrence_failures', 0)} recurrence failures")
    assert ok


def test_criterion_6_pproperty():
    rep = probe(GenConfig(target="orbit-pproperty", trials=100_000))
    subset_failures = [c for c in rep.counterexamples if "contained" in c["reason"]]
    ok = rep.hypothesis >= 10_000 and not rep.counterexamples
    record(6, ok, f"{rep.verified}/{rep.hypothesis} instances with orbit constant < 1 and "
                  f"F(T) nonempty keep F(T^n) = F(T) for n <= 8; "
                  f"{len(subset_failures)} subset failures over {rep.trials} instances")
    assert ok


def test_criterion_7_lemma():
    N = 40
    a = [Fraction(n + 1, 2 ** n) for n in range(N + 1)]
    c = [Fraction(1, 2 ** n) for n in range(N)]
    v = check_lemma_sequences(a, c, Fraction(1, 2))
    small = all(a[n] < Fraction(1, 10 ** 6) for n in range(30, N + 1))
    ok = v.premise_holds and small and v.verdict == "converges"
    record(7, ok, f"premise={v.premise_holds}, a_30={float(a[30]):.2e}, "
                  f"bound B_40={float(v.bound):.2e}, verdict={v.verdict}")
    assert ok


def test_criterion_8_window():
    cfg = GenConfig(target="s-window", trials=100_000)
    t0 = time.perf_counter()
    rep = probe(cfg)
    elapsed = time.perf_counter() - t0
    again = probe(cfg)
    deterministic = dump(rep) == dump(again)
    inj = rep.injected or {}
    injected_ok = inj.get("hypothesis") and inj.get("verified") and inj.get("s_min") == Fraction(15, 11)
    replay_ok = True
    for rec in rep.counterexamples:
        space, T = instance(cfg, rec["trial"])
        same_seed = space_to_dict(random_space(cfg, rec["seed"])) == rec["space"]
        loaded = space_from_dict(rec["space"])
        T2 = map_from_dict(rec["map"], loaded)
        replay_ok &= (same_seed and space_to_dict(space) == rec["space"]
                      and all(T2(x) == T(x) for x in space.points))
    ok = elapsed < 300 and deterministic and injected_ok and replay_ok
    sub = rep.subcounts
    record(8, ok, f"{rep.trials} trials in {elapsed:.1f}s, deterministic={deterministic}, "
                  f"injected s={inj.get('s_min')} verified={inj.get('verified')}, "
                  f"open window {sub['open']['verified']}/{sub['open']['hypothesis']} verified, "
                  f"sharp window {sub.get('sharp', {}).get('verified')}/"
                  f"{sub.get('sharp', {}).get('hypothesis')}, "
                  f"{len(rep.counterexamples)} counterexamples all replayed={replay_ok}")
    assert ok
