import math
from fractions import Fraction

import pytest
from hypothesis import given
from scipy.optimize import brentq

from pbmetric import PartialBMetricSpace, SelfMap, certify_rate, fixed_points, iterate, iterate_all
from pbmetric.errors import ParameterError
from pbmetric.golden import example2_map, example2_space
from pbmetric.picard import DIVERGENT, MAX_ITER, step_ratios

from conftest import spaces_with_maps


class TestFinite:
    def test_example1_orbits(self, ex1):
        space, T = ex1
        orbits = {tr.orbit[0]: tr.orbit for tr in iterate_all(space, T)}
        assert orbits[4] == [4, 2, 1, 1]
        assert orbits[3] == [3, 2, 1, 1]
        assert all(tr.fixed_point == 1 and tr.self_distance == 0 for tr in iterate_all(space, T))

    def test_example1_fixed_set(self, ex1):
        fp = fixed_points(*ex1)
        assert fp.points == [1] and fp.unique == 1 and fp.self_distances[1] == 0

    def test_two_cycle_hits_max_iter(self):
        sp = PartialBMetricSpace.discrete(("a", "b"))
        tr = iterate(sp, SelfMap.from_dict({"a": "b", "b": "a"}), "a", max_iter=7)
        assert tr.verdict == MAX_ITER and tr.iterations == 7 and not tr.converged

    def test_divergence_heuristic(self):
        # steps p(i, i+1) = i + 1 keep growing along the shift i -> i + 1
        pts = range(15)
        sp = PartialBMetricSpace.from_function(pts, lambda x, y: 0 if x == y else max(x, y))
        T = SelfMap(table={i: min(i + 1, 14) for i in pts})
        tr = iterate(sp, T, 0)
        assert tr.verdict == DIVERGENT and tr.iterations == 11

    def test_start_must_be_a_point(self, ex1):
        with pytest.raises(ValueError):
            iterate(*ex1, 9)

    def test_fixed_point_needs_finite(self):
        with pytest.raises(TypeError):
            fixed_points(example2_space(), example2_map())

    @given(spaces_with_maps())
    def test_orbit_stays_inside_and_fixed_is_fixed(self, sm):
        space, T = sm
        for tr in iterate_all(space, T):
            assert all(x in space.index for x in tr.orbit)
            assert tr.b == [space.p(x, y) for x, y in zip(tr.orbit, tr.orbit[1:])]
            if tr.converged:
                assert T(tr.fixed_point) == tr.fixed_point
                assert tr.fixed_point in fixed_points(space, T)


class TestNumeric:
    def test_example2_matches_root_finder(self):
        tr = iterate(example2_space(), example2_map(), 1.0, max_iter=200, tol=1e-24)
        u_ref = brentq(lambda u: u - math.exp(u - 2.0), 0.0, 1.0, xtol=1e-15)
        assert tr.converged and tr.mode == "numerical"
        assert tr.iterations < 200
        assert abs(tr.fixed_point - u_ref) < 1e-12
        assert abs(tr.fixed_point - math.exp(tr.fixed_point - 2.0)) < 1e-12

    def test_example2_step_ratios(self):
        space = example2_space()
        tr = iterate(space, example2_map(), 1.0, max_iter=200, tol=1e-24)
        ratios = step_ratios(space, tr, tr.fixed_point, floor=1e-20)
        assert ratios and max(ratios) <= math.exp(-2.0) + 1e-6


    def test_outside_interval(self):
        with pytest.raises(ValueError):
            iterate(example2_space(), example2_map(), 2.0)


class TestCertificate:
    def test_example1_banach_rate(self, ex1):
        space, T = ex1
        for tr in iterate_all(space, T):
            assert certify_rate(tr, Fraction(3, 4), 4).all_pass

    def test_failure_is_reported(self, ex1):
        space, T = ex1
        tr = iterate(space, T, 4)
        cert = certify_rate(tr, Fraction(1, 100), 4)
        assert not cert.all_pass and cert.step_failures[0][0] == 1

    def test_mu_range(self, ex1):
        tr = iterate(*ex1, 4)
        with pytest.raises(ParameterError):
            certify_rate(tr, 1, 4)

    def test_tail_skipped_when_s_mu_large(self, ex1):
        tr = iterate(*ex1, 4)
        assert certify_rate(tr, Fraction(3, 4), 4).tail_checked == 0
        assert certify_rate(tr, Fraction(1, 5), 4).tail_checked > 0

    @given(spaces_with_maps())
    def test_banach_constant_certifies(self, sm):
        from pbmetric import check_banach, minimal_coefficient
        space, T = sm
        k = check_banach(space, T).constant
        if k is not None and k < 1:
            s = minimal_coefficient(space)
            for tr in iterate_all(space, T):
                assert not certify_rate(tr, k, s).step_failures
