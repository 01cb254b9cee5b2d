import itertools

import numpy as np
import pytest

from confpersist.errors import BudgetExceeded, NotInherited, ToleranceInvalid
from confpersist.metric import FiniteMetricSpace, cycle_graph, path_graph, sample_circle, shortest_path_metric
from confpersist.obstruction import obstruction_report
from confpersist.regular import (
    SampledMap,
    is_affine_kr_regular,
    is_kr_regular,
    moment_curve,
    probe_kr_regular,
    realization_check,
    restrict_map,
    trigonometric_curve,
)


def line_map(ts, cols):
    ts = np.asarray(ts, dtype=float)
    X = FiniteMetricSpace([f"t{i}" for i in range(len(ts))], np.abs(ts[:, None] - ts[None]))
    return SampledMap(X, cols(ts))


class TestLinear:
    def test_moment_curve_vandermonde(self):
        f = moment_curve([1, 2, 3], 3)
        assert np.linalg.det(f.values) == pytest.approx(2.0)
        assert is_kr_regular(f, 3, 0.0).passed

    def test_antipodal_points(self):
        X = sample_circle(2, 1.0)
        f = SampledMap(X, [[1.0, 0.0], [-1.0, 0.0]])
        v = is_kr_regular(f, 2, 0.01)
        assert not v.passed
        assert v.witness["subset"] == ["0", "1"]
        assert v.witness["numerical_rank"] == 1
        assert v.witness["separation"] > 2 * 0.01

    def test_affine_line_in_plane(self):
        f = moment_curve([1, 2, 3], 2)
        v = is_kr_regular(f, 3, 0.0)
        assert not v.passed and v.witness["numerical_rank"] <= 2

    def test_monotone_in_k_and_r(self):
        f = moment_curve(np.linspace(-1, 1, 7), 3)
        assert is_kr_regular(f, 3, 0.0)
        for k in (1, 2, 3):
            for r in (0.0, 0.1, 0.2, 0.5, 1.0):
                assert is_kr_regular(f, k, r).passed

    def test_complex_field(self):
        n = 12
        X = sample_circle(n, 1.0)
        z = np.exp(2j * np.pi * np.arange(n) / n)
        f = SampledMap(X, np.column_stack([np.ones(n), z]), "complex")
        assert is_kr_regular(f, 2, 0.0).passed
        g = SampledMap(X, np.column_stack([z, 1j * z]), "complex")
        assert not is_kr_regular(g, 2, 0.0).passed

    def test_tolerance_invalid(self):
        f = moment_curve([1, 2, 3], 3)
        for tol in (0, -1, float("nan")):
            with pytest.raises(ToleranceInvalid):
                is_kr_regular(f, 2, 0.0, tol=tol)

    def test_budget(self):
        f = moment_curve(np.arange(12.0), 3)
        with pytest.raises(BudgetExceeded):
            is_kr_regular(f, 3, 0.0, budget=10)

    def test_probe_is_not_certifying(self):
        f = moment_curve(np.linspace(0, 1, 8), 3)
        v = probe_kr_regular(f, 3, 0.0, samples=50)
        assert v.passed and not v.certifying

    def test_order_independent(self):
        ts = np.array([0.3, -1.0, 2.0, 0.7, 1.1])
        f = moment_curve(ts, 3)
        perm = [4, 2, 0, 3, 1]
        g = moment_curve(ts[perm], 3)
        assert is_kr_regular(f, 3, 0.0).passed == is_kr_regular(g, 3, 0.0).passed


class TestAffine:
    def test_triangle(self):
        f = line_map([0, 1, 3], lambda t: np.column_stack([t, t ** 2]))
        assert is_affine_kr_regular(f, 3, 0.0).passed

    def test_collinear(self):
        f = line_map([0, 1, 3], lambda t: np.column_stack([t, 2 * t]))
        assert not is_affine_kr_regular(f, 3, 0.0).passed

    def test_linear_implies_affine(self):
        f = moment_curve(np.linspace(-2, 2, 6), 3)
        for k in (2, 3):
            for r in (0.0, 0.4, 1.0):
                if is_kr_regular(f, k, r):
                    assert is_affine_kr_regular(f, k, r)

    def test_complex_rejected(self):
        X = sample_circle(3, 1.0)
        f = SampledMap(X, np.ones((3, 2)), "complex")
        with pytest.raises(ValueError):
            is_affine_kr_regular(f, 2, 0.0)


class TestRealization:
    def test_moment_curve(self):
        f = moment_curve([0.0, 1.0, 2.5, 3.0, 4.2], 3)
        v = realization_check(f, 3, 0.0)
        assert v.passed
        assert len(v.certificates) == 5 + 10 + 10
        assert all(c["smallest_relative_singular_value"] > 0 for c in v.certificates)

    def test_constant_map(self):
        X = sample_circle(5, 1.0)
        v = realization_check(SampledMap(X, np.ones((5, 2))), 3, 0.0)
        assert not v.passed and v.failed_at == 2

    def test_generic_low_dimension(self):
        rng = np.random.default_rng(7)
        X = sample_circle(6, 1.0)
        f = SampledMap(X, rng.normal(size=(6, 2)))
        assert not is_kr_regular(f, 3, 0.0)
        assert realization_check(f, 3, 0.0).passed


class TestRestrict:
    def test_whole_space(self):
        f = moment_curve([1, 2, 3, 4], 3)
        g = restrict_map(f, f.domain.points)
        assert np.array_equal(g.values, f.values)

    def test_subset_keeps_regularity(self):
        f = moment_curve([0.0, 1.0, 2.0, 3.0, 4.0], 3)
        assert is_kr_regular(f, 3, 0.0)
        for sub in itertools.combinations(f.domain.points, 3):
            g = restrict_map(f, sub)
            assert is_kr_regular(g, 3, 0.0).passed
            assert g.domain.n == 3

    def test_not_inherited(self):
        X = shortest_path_metric(cycle_graph(4))
        f = SampledMap(X, np.eye(4))
        with pytest.raises(NotInherited):
            restrict_map(f, X.points, intrinsic=shortest_path_metric(path_graph(4)))


class TestSoundness:
    def test_circle_bound_against_maps(self):
        n = 24
        rep = obstruction_report(sample_circle(n, 1.0), 2, 1 / n, 1 / n, [0.0, 0.04, 0.08, 0.12, 0.16, 0.2])
        planar = trigonometric_curve(n, 1.0, constant=False)
        assert planar.N == 2 and not is_kr_regular(planar, 2, 1 / n)
        lifted = trigonometric_curve(n, 1.0)
        assert lifted.N == 3 and is_kr_regular(lifted, 2, 1 / n)
        # any map that passes must live in dimension >= the certified bound
        assert lifted.N >= rep.N_lb_real
        moment = SampledMap(lifted.domain, moment_curve(np.linspace(0, 1, n), 3).values)
        assert is_kr_regular(moment, 2, 1 / n) and moment.N >= rep.N_lb_real
