import itertools
import math

import pytest

from confpersist.complex import FilteredComplex, Snapshot
from confpersist.covering import (
    ConfigRipsComplex,
    CoveringCocycle,
    build_config_rips,
    compose,
    inverse,
    matching_bijection,
    parity,
    verify_covering,
    w1,
)
from confpersist.errors import CocycleViolation, GuardViolated
from confpersist.metric import FiniteMetricSpace, sample_circle
from confpersist.persistence import coboundary, is_coboundary

CIRCLE12 = sample_circle(12, 12.0)


def circle_model(n=12, L=12.0, k=2, grid=(1.0, 2.0), dim_cap=2):
    X = sample_circle(n, L)
    return build_config_rips(X, k, L / n, list(grid), dim_cap)


class TestPermutations:
    def test_compose_inverse(self):
        for p in itertools.permutations(range(4)):
            assert compose(p, inverse(p)) == (0, 1, 2, 3)
            assert compose(inverse(p), p) == (0, 1, 2, 3)

    def test_parity(self):
        assert parity((0, 1, 2)) == 0
        assert parity((1, 0, 2)) == 1
        assert parity((1, 2, 0)) == 0
        for p, q in itertools.product(itertools.permutations(range(3)), repeat=2):
            assert parity(compose(p, q)) == (parity(p) + parity(q)) % 2


class TestMatching:
    def test_identity(self):
        assert matching_bijection((0, 6), (0, 6), 1.0, CIRCLE12) == (0, 1)

    def test_shift_keeps_order(self):
        assert matching_bijection((0, 6), (1, 7), 1.0, CIRCLE12) == (0, 1)

    def test_crossing_is_transposition(self):
        assert matching_bijection((0, 6), (5, 11), 1.0, CIRCLE12) == (1, 0)

    def test_reverse_is_inverse(self):
        X = sample_circle(9, 9.0)
        for c, c2 in itertools.permutations(itertools.combinations(range(9), 3), 2):
            if min(X.dist[a, b] for a, b in itertools.combinations(c, 2)) <= 2:
                continue
            if min(X.dist[a, b] for a, b in itertools.combinations(c2, 2)) <= 2:
                continue
            p = matching_bijection(c, c2, 1.0, X)
            q = matching_bijection(c2, c, 1.0, X)
            assert (p is None) == (q is None)
            if p is not None:
                assert q == inverse(p)

    def test_no_match(self):
        assert matching_bijection((0, 6), (2, 8), 1.0, CIRCLE12) is None

    def test_guard(self):
        with pytest.raises(GuardViolated):
            matching_bijection((0, 1), (0, 6), 1.0, CIRCLE12)


class TestBuild:
    def test_circle_vertex_count(self):
        K = circle_model()
        assert len(K.configurations) == 42
        dists = sorted(CIRCLE12.dist[c] for c in K.configurations)
        assert dists.count(3) == 12 and dists.count(6) == 6
        assert K.excluded_triangles == []

    def test_two_points(self):
        X = FiniteMetricSpace(["a", "b"], [[0, 5], [5, 0]])
        K = build_config_rips(X, 2, 1.0, [1.0])
        snap = K.snapshot()
        assert snap.count(0) == 1 and snap.count(1) == 0

    def test_guard(self):
        with pytest.raises(GuardViolated):
            build_config_rips(CIRCLE12, 2, 2.0, [1.0, 2.0])

    def test_invariants(self):
        K = circle_model(24, 1.0, grid=(1 / 24, 0.1, 0.2))
        g = K.cocycle
        for (i, j), p in g.perms.items():
            assert compose(g(j, i), g(i, j)) == tuple(range(g.k))
            ci, cj = K.configurations[i], K.configurations[j]
            assert all(K.X.dist[ci[a], cj[p[a]]] <= K.delta + 1e-12 for a in range(g.k))
        for s in K.complex.simplices:
            if len(s) == 3:
                assert g.holds_on(s)
        for c in K.configurations:
            assert K.X.separated(K.X.dist[c], K.r_lo)

    def test_filtration_value_is_min_half_sep(self):
        K = circle_model()
        for s, v in K.complex.simplices.items():
            assert v == min(CIRCLE12.dist[K.configurations[i]] / 2 for i in s)


class TestVerifyCovering:
    def test_circle_nontrivial_double_cover(self):
        K = circle_model(24, 1.0, grid=(1 / 24,))
        rep = verify_covering(K)
        assert rep.ok and rep.sheets == 2
        assert rep.base_components == 1 and rep.total_components == 1

    def test_k1_identity(self):
        X = sample_circle(6, 6.0)
        K = build_config_rips(X, 1, 1.0, [1.0])
        rep = verify_covering(K)
        assert rep.sheets == 1 and set(rep.fiber_sizes) == {1}
        assert rep.total_components == rep.base_components

    def test_two_far_pairs(self):
        D = [[0, 4, 2, 2], [4, 0, 2, 2], [2, 2, 0, 4], [2, 2, 4, 0]]
        X = FiniteMetricSpace(["a", "b", "c", "d"], D)
        K = build_config_rips(X, 2, 1.0, [1.5])
        rep = verify_covering(K)
        assert rep.base_vertices == 2 and rep.base_components == 2
        assert rep.total_components == 4 and rep.fiber_sizes == [2, 2]

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_fiber_size(self, k):
        K = circle_model(12, 1.0, k=k, grid=(1 / 12, 0.1))
        rep = verify_covering(K)
        assert rep.ok and set(rep.fiber_sizes) == {math.factorial(k)}
        assert rep.free and rep.transitive and rep.deck_commutes

    def test_violation(self):
        configs = [(0, 6), (1, 7), (2, 8)]
        g = CoveringCocycle(2, configs, {(0, 1): (0, 1), (1, 2): (0, 1), (0, 2): (1, 0)})
        simp = {(0,): 3.0, (1,): 3.0, (2,): 3.0, (0, 1): 3.0, (1, 2): 3.0, (0, 2): 3.0, (0, 1, 2): 3.0}
        K = ConfigRipsComplex(CIRCLE12, 2, 1.0, 1.0, 1.0, configs, FilteredComplex(simp), g)
        with pytest.raises(CocycleViolation) as err:
            verify_covering(K)
        assert err.value.triangle == (0, 1, 2)


class TestW1:
    def test_identity_cocycle(self):
        g = CoveringCocycle(3, [(0, 3, 6), (1, 4, 7)], {(0, 1): (0, 1, 2)})
        assert w1(g).is_zero()

    def test_circle_not_coboundary(self):
        K = circle_model(24, 1.0, grid=(1 / 24,))
        snap = K.snapshot()
        w = w1(K.cocycle).restrict(snap)
        assert coboundary(w, snap).is_zero()
        assert not is_coboundary(w, snap)

    def test_k3_transposition_loop(self):
        # four 3-point configurations of a 9-point circle around a square loop;
        # three edges carry the identity, one carries a transposition
        configs = [(0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 7)]
        perms = {(0, 1): (0, 1, 2), (1, 2): (0, 1, 2), (2, 3): (0, 1, 2), (0, 3): (1, 0, 2)}
        w = w1(CoveringCocycle(3, configs, perms))
        loop = [(0, 1), (1, 2), (2, 3), (0, 3)]
        assert sum(w[e] for e in loop) % 2 == 1
        snap = Snapshot([(i,) for i in range(4)] + loop, 0.0)
        assert not is_coboundary(w.restrict(snap), snap)

    def test_restriction_is_literal(self):
        K = circle_model(24, 1.0, grid=(1 / 24, 0.1, 0.2))
        w = w1(K.cocycle)
        for r1, r2 in itertools.combinations(sorted([1 / 24, 0.1, 0.2], reverse=True), 2):
            hi, lo = K.snapshot(r1), K.snapshot(r2)
            assert hi.is_subcomplex_of(lo)
            assert w.restrict(lo).restrict(hi) == w.restrict(hi)
            alone = build_config_rips(K.X, 2, K.delta, [r1])
            assert w.by_configuration(hi) == w1(alone.cocycle).by_configuration(alone.snapshot())

    def test_cocycle_on_all_triangles(self):
        K = circle_model(18, 1.0, k=3, grid=(1 / 18,), dim_cap=2)
        snap = K.snapshot()
        w = w1(K.cocycle).restrict(snap)
        assert coboundary(w, snap).is_zero()
