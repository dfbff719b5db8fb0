import json
import random
from collections import Counter
from fractions import Fraction

import pytest

from pbmetric import verify_axioms
from pbmetric.errors import GenerationError, ParameterError
from pbmetric.search import (
    OPEN_TARGETS, PROVED_TARGETS, GenConfig, complete_lambdas, instance, probe,
    random_map, random_space, trial_seed,
)
from pbmetric.serialize import dump, map_from_dict, space_from_dict, space_to_dict
from pbmetric.space import minimal_coefficient
from pbmetric import check_chatterjea_kannan


class TestGenerator:
    def test_seed_is_stable(self):
        assert trial_seed(0, 0) == trial_seed(0, 0)
        assert trial_seed(0, 1) != trial_seed(1, 0)

    def test_ten_thousand_spaces_pass_axioms(self):
        cfg = GenConfig()
        for i in range(10_000):
            sp = random_space(cfg, trial_seed(0, i))
            assert verify_axioms(sp, sp.declared_s).passed, i

    def test_declared_s_is_minimal(self):
        cfg = GenConfig(n_points=5)
        for i in range(200):
            sp = random_space(cfg, trial_seed(3, i))
            assert sp.declared_s == minimal_coefficient(sp)

    def test_grid(self):
        cfg = GenConfig(denominator=4, max_value=2)
        for i in range(100):
            sp = random_space(cfg, i)
            for row in sp.table:
                assert all(v.denominator in (1, 2, 4) and 0 <= v <= 2 for v in row)

    def test_zero_self_distances(self):
        cfg = GenConfig(zero_self_prob=1.0)
        for i in range(50):
            sp = random_space(cfg, i)
            assert all(sp.p(x, x) == 0 for x in sp.points)

    def test_map_coverage(self):
        cfg = GenConfig(n_points=3)
        sp = random_space(cfg, 0)
        counts = Counter(tuple(random_map(sp, k).table.values()) for k in range(10_000))
        # 27 maps, ~370 expected each
        assert len(counts) == 27
        assert min(counts.values()) > 250

    def test_single_point(self):
        cfg = GenConfig(n_points=1, target="chatterjea-max", trials=5)
        rep = probe(cfg)
        assert rep.trials == 5 and rep.clean

    def test_budget_exhausted(self):
        # two points at distance 1: a draw collides when both self-distances are 1
        cfg = GenConfig(n_points=2, denominator=1, max_value=1, zero_self_prob=0.0,
                        resample_budget=1)
        failures = 0
        for seed in range(40):
            try:
                random_space(cfg, seed)
            except GenerationError as exc:
                failures += 1
                assert exc.seed == seed
        assert 0 < failures < 40

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            GenConfig(target="nope")
        with pytest.raises(ParameterError):
            GenConfig(n_points=0)
        with pytest.raises(ParameterError):
            GenConfig(trials=-1)

    def test_lambda_completion_is_least(self):
        cfg = GenConfig(target="chatterjea-kannan")
        done = 0
        for i in range(300):
            sp, T = instance(cfg, i + 1)
            lam = complete_lambdas(sp, T, random.Random(i))
            if lam is None or lam[0] == 0:
                continue
            done += 1
            s = sp.declared_s
            assert check_chatterjea_kannan(sp, T, lam, s).details["inequality_holds"]
            lower = (lam[0] * Fraction(999, 1000),) + lam[1:]
            assert not check_chatterjea_kannan(sp, T, lower, s).details["inequality_holds"]
        assert done > 50


class TestProbe:
    def test_empty(self):
        rep = probe(GenConfig(trials=0))
        assert rep.trials == 0 and rep.hypothesis == 0 and rep.stats["s_min"] == {"count": 0}

    @pytest.mark.parametrize("target", PROVED_TARGETS + OPEN_TARGETS)
    def test_deterministic(self, target):
        cfg = GenConfig(target=target, trials=60, seed=11)
        assert dump(probe(cfg)) == dump(probe(cfg))

    def test_seed_changes_outcome(self):
        a = probe(GenConfig(target="power-banach", trials=50, seed=1))
        b = probe(GenConfig(target="power-banach", trials=50, seed=2))
        assert dump(a) != dump(b)

    @pytest.mark.parametrize("target", ["power-banach", "transform", "orbit-pproperty"])
    def test_proved_targets_are_clean(self, target):
        rep = probe(GenConfig(target=target, trials=300))
        assert rep.proved_target and rep.hypothesis > 0
        assert not rep.counterexamples and rep.verified == rep.hypothesis

    def test_injected_example(self):
        rep = probe(GenConfig(target="s-window", trials=5))
        inj = rep.injected
        assert inj["s_min"] == Fraction(15, 11) and inj["region"] == "open"
        assert inj["hypothesis"] and inj["verified"] and inj["fixed_point"] == 1
        assert inj["lambda"] == Fraction(1, 3)

    def test_no_injection_elsewhere(self):
        assert probe(GenConfig(target="chatterjea", trials=3)).injected is None
        assert probe(GenConfig(target="s-window", trials=3, inject_golden=False)).injected is None

    def test_window_counterexample_replays(self):
        cfg = GenConfig(target="s-window", trials=400)
        rep = probe(cfg)
        assert rep.counterexamples, "expected open-window counterexamples at this size"
        for rec in rep.counterexamples[:5]:
            rec = json.loads(dump(rec))
            sp, T = instance(cfg, rec["trial"])
            assert space_to_dict(sp) == rec["space"]
            assert space_to_dict(random_space(cfg, rec["seed"])) == rec["space"]
            loaded = space_from_dict(rec["space"])
            T2 = map_from_dict(rec["map"], loaded)
            assert all(T2(x) == T(x) for x in sp.points)
            assert rec["region"] == "open"


@pytest.mark.parametrize("K,n", [(Fraction(255, 256), 8), (Fraction(1023, 1024), 2),
                                 (Fraction(1, 2), 2), (Fraction(1, 64), 5)])
def test_transform_lambda_is_valid(K, n):
    from pbmetric.search import _lam_for
    lam = _lam_for(K, n)
    assert lam > 1 and lam ** n * K < 1
