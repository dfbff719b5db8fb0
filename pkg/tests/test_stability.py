import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pbmetric import PartialBMetricSpace, SelfMap, check_lemma_sequences, run_perturbed, stability_condition
from pbmetric.errors import ParameterError, PreconditionError
from pbmetric.golden import example2_map, example2_space
from pbmetric.picard import iterate
from pbmetric.stability import (
    CONVERGED, INCONCLUSIVE, StabilityParams, geometric_noise, make_schedule, picard_orbit,
    scaled_fixed_point,
)


def lemma_bound(a0, c, h):
    """B_N by the closed sum h^N a0 + sum h^(N-1-i) c_i."""
    N = len(c)
    return h ** N * a0 + sum(h ** (N - 1 - i) * c[i] for i in range(N))


class TestCondition:
    def test_banach_only(self):
        cond = stability_condition(StabilityParams.exact((Fraction(1, 4), 0, 0, 0, 0), 2))
        assert cond.holds and cond.lhs == 1
        assert cond.step_factor == Fraction(1, 4) and cond.contraction == Fraction(1, 2)

    def test_boundary_fails(self):
        cond = stability_condition(StabilityParams.exact((Fraction(1, 2), 0, 0, 0, 0), 2))
        assert cond.lhs == 2 and not cond.holds and cond.contraction == 1

    def test_all_terms(self):
        p = StabilityParams.exact((Fraction(1, 10), Fraction(1, 2), Fraction(1, 10),
                                   Fraction(1, 20), Fraction(1, 20)), 2)
        cond = stability_condition(p)
        assert cond.lhs == Fraction(2, 5) + Fraction(1, 5) + 6 * Fraction(1, 10)
        assert p.step_factor == Fraction(2, 5) / Fraction(8, 5)

    def test_l2_is_irrelevant(self):
        a = stability_condition(StabilityParams.exact((Fraction(1, 8), 0, 0, 0, 0), 3))
        b = stability_condition(StabilityParams.exact((Fraction(1, 8), 5, 0, 0, 0), 3))
        assert a.lhs == b.lhs

    def test_bad_params(self):
        with pytest.raises(ParameterError):
            StabilityParams.exact((1, 0, 0), 2)
        with pytest.raises(ParameterError):
            StabilityParams.exact((0, 0, 0, 0, 0), Fraction(1, 2))

    @given(st.lists(st.fractions(0, 1), min_size=5, max_size=5), st.fractions(1, 4))
    def test_contraction_below_one_iff_condition(self, lams, s):
        cond = stability_condition(StabilityParams.exact(lams, s))
        if cond.contraction is not None:
            assert (cond.contraction < 1) == cond.holds


class TestLemma:
    def test_oracle_sequences(self):
        N = 40
        a = [Fraction(n + 1, 2 ** n) for n in range(N + 1)]
        c = [Fraction(1, 2 ** n) for n in range(N)]
        v = check_lemma_sequences(a, c, Fraction(1, 2))
        assert v.premise_holds and v.verdict == "converges"
        assert v.bound == lemma_bound(a[0], c, Fraction(1, 2)) == Fraction(2 * N + 1, 2 ** N)
        for n in range(30, N + 1):
            assert a[n] < Fraction(1, 10 ** 6)
            assert v.bounds[n] >= a[n]

    def test_premise_violation(self):
        v = check_lemma_sequences([1, 1, 5], [0, 0], Fraction(1, 2))
        assert not v.premise_holds and v.witness == 0

    def test_persistent_noise_is_inconclusive(self):
        v = check_lemma_sequences([1] * 20, [Fraction(1, 2)] * 19, Fraction(1, 2))
        assert v.premise_holds and v.verdict == "inconclusive" and not v.c_vanishes

    def test_h_range(self):
        with pytest.raises(ParameterError):
            check_lemma_sequences([1, 1], [0], 1)

    @given(st.lists(st.fractions(0, 10), min_size=2, max_size=12), st.fractions(0, Fraction(99, 100)))
    def test_bound_dominates(self, c, h):
        a = [Fraction(1)]
        for v in c:
            a.append(h * a[-1] + v)
        verdict = check_lemma_sequences(a, c, h)
        assert verdict.premise_holds
        assert all(b >= x for b, x in zip(verdict.bounds, a))


class TestTrials:
    @pytest.fixture
    def star(self):
        # 0 is the fixed point; all other points map onto it
        pts = (0, 1, 2, 3)
        sp = PartialBMetricSpace.from_function(pts, lambda x, y: 0 if x == y else x + y, 1)
        return sp, SelfMap(table={x: 0 for x in pts})

    def test_finite_geometric_noise(self, star):
        sp, T = star
        params = StabilityParams.exact((0, 0, 0, 0, 0), 1)
        for seed in range(5):
            tr = run_perturbed(sp, T, 0, geometric_noise(r=4, seed=seed), 40, params=params)
            assert tr.verdict == CONVERGED and tr.recurrence_ok

    def test_picard_schedule(self, ex1):
        sp, T = ex1
        tr = run_perturbed(sp, T, 1, picard_orbit(4), 8)
        assert tr.y[:4] == [4, 2, 1, 1] and tr.verdict == CONVERGED
        # an unperturbed orbit drifts by the self-distance p(Ty, Ty)
        assert tr.raw_drift == [sp.p(T(y), T(y)) for y in tr.y[:-1]]

    def test_non_vanishing_drift(self, star):
        sp, T = star
        tr = run_perturbed(sp, T, 0, [3] * 21, 20)
        assert tr.verdict == INCONCLUSIVE and not tr.drift_vanished and not tr.falsifies

    def test_q_must_be_fixed(self, ex1):
        with pytest.raises(PreconditionError):
            run_perturbed(*ex1, 2, picard_orbit(), 5)

    def test_short_schedule(self, star):
        with pytest.raises(ParameterError):
            run_perturbed(*star, 0, [1, 0], 5)

    def test_scaled_needs_numeric(self, star):
        with pytest.raises(TypeError):
            run_perturbed(*star, 0, scaled_fixed_point, 5)

    def test_unknown_schedule(self):
        with pytest.raises(ValueError):
            make_schedule("zigzag")

    def test_example2_scaled(self):
        space, T = example2_space(), example2_map()
        u = iterate(space, T, 1.0, max_iter=200, tol=1e-24).fixed_point
        params = StabilityParams((math.exp(-2.0), 0.0, 0.0, 0.0, 0.0), 4.0)
        tr = run_perturbed(space, T, u, scaled_fixed_point, 10_000, params=params)
        assert tr.verdict == CONVERGED and tr.recurrence_ok
        assert tr.raw_drift[-1] < 1e-8 and tr.a[-1] < 1e-6

    def test_example2_geometric_noise(self):
        space, T = example2_space(), example2_map()
        u = iterate(space, T, 1.0, max_iter=200, tol=1e-24).fixed_point
        for seed in range(3):
            tr = run_perturbed(space, T, u, geometric_noise(r=0.5, seed=seed), 200)
            assert tr.verdict == CONVERGED

    def test_constant_offset_does_not_converge(self):
        space, T = example2_space(), example2_map()
        u = iterate(space, T, 1.0, max_iter=200, tol=1e-24).fixed_point
        tr = run_perturbed(space, T, u, make_schedule("constant-offset", offset=0.1), 100)
        assert tr.verdict == INCONCLUSIVE and not tr.falsifies
