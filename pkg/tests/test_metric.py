import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confpersist.errors import InvalidMetric, MetricContradiction, NonIntegerWeight
from confpersist.metric import (
    FiniteMetricSpace,
    WeightedGraph,
    cycle_graph,
    metric_inheritance_check,
    path_graph,
    sample_circle,
    shortest_path_metric,
    subdivide,
)

from fixtures import random_weighted_graph
from oracles import floyd_warshall


def dist(X, u, v):
    return X.dist[X.index(u), X.index(v)]


class TestShortestPaths:
    def test_four_cycle_antipodal(self):
        X = shortest_path_metric(cycle_graph(4))
        assert X.dist[0, 2] == 2

    def test_single_vertex(self):
        X = shortest_path_metric(WeightedGraph.from_edges(["a"], []))
        assert X.dist.tolist() == [[0]]

    def test_weighted_path(self):
        g = WeightedGraph.from_edges(["a", "b", "c"], [("a", "b", 3), ("b", "c", 4)])
        assert dist(shortest_path_metric(g), "a", "c") == 7

    def test_disconnected_is_infinite(self):
        g = WeightedGraph.from_edges(["a", "b", "c"], [("a", "b", 1)])
        X = shortest_path_metric(g)
        assert math.isinf(dist(X, "a", "c"))
        assert X.exact

    def test_matches_floyd_warshall(self):
        for seed in range(15):
            g = random_weighted_graph(seed)
            X = shortest_path_metric(g)
            ref = floyd_warshall(list(g.vertices), [(u, v, w) for (u, v), w in g.weights.items()])
            for u, v in itertools.product(g.vertices, repeat=2):
                assert dist(X, u, v) == ref[(u, v)]

    def test_fractional_weights_use_floats(self):
        g = WeightedGraph.from_edges(["a", "b", "c"], [("a", "b", 0.5), ("b", "c", 0.25)])
        X = shortest_path_metric(g)
        assert not X.exact
        assert dist(X, "a", "c") == pytest.approx(0.75)


class TestSubdivide:
    def test_unit_edge_unchanged(self):
        sd = subdivide(WeightedGraph.from_edges(["a", "b"], [("a", "b", 1)]))
        assert len(sd.graph.vertices) == 2 and len(sd.graph.edges) == 1

    def test_weight_three_edge(self):
        sd = subdivide(WeightedGraph.from_edges(["a", "b"], [("a", "b", 3)]))
        assert len(sd.graph.vertices) == 4
        assert len(sd.graph.edges) == 3
        assert all(w == 1 for w in sd.graph.weights.values())
        X = shortest_path_metric(sd.graph)
        assert dist(X, "a", "b") == 3
        # the path a - m1 - m2 - b: every vertex has degree <= 2
        deg = {v: 0 for v in sd.graph.vertices}
        for u, v in sd.graph.edges:
            deg[u] += 1
            deg[v] += 1
        assert sorted(deg.values()) == [1, 1, 2, 2]

    def test_triangle_twos(self):
        g = WeightedGraph.from_edges(["u", "v", "w"], [("u", "v", 2), ("v", "w", 2), ("u", "w", 2)])
        sd = subdivide(g)
        assert len(sd.graph.vertices) == 6 and len(sd.graph.edges) == 6
        X = shortest_path_metric(sd.graph)
        for a, b in itertools.combinations("uvw", 2):
            assert dist(X, a, b) == 2

    @pytest.mark.parametrize("w", [0, 1.5, -2])
    def test_non_integer_weight(self, w):
        g = WeightedGraph.from_edges(["a", "b"], [("a", "b", 1)])
        bad = WeightedGraph.__new__(WeightedGraph)
        object.__setattr__(bad, "vertices", g.vertices)
        object.__setattr__(bad, "weights", {("a", "b"): w})
        with pytest.raises(NonIntegerWeight):
            subdivide(bad)

    def test_counts_and_isometry_random(self):
        for seed in range(10):
            g = random_weighted_graph(seed, max_weight=5)
            sd = subdivide(g)
            total = sum(g.weights.values())
            assert len(sd.graph.edges) == total
            assert len(sd.graph.vertices) == len(g.vertices) + sum(w - 1 for w in g.weights.values())
            big = shortest_path_metric(sd.graph)
            base = shortest_path_metric(g)
            sub = big.subspace(g.vertices)
            assert np.array_equal(sub.dist, base.dist)


class TestCircle:
    def test_examples(self):
        assert sample_circle(4, 4).dist[0, 2] == 2
        assert sample_circle(2, 1).dist[0, 1] == 0.5
        X = sample_circle(6, 6)
        assert X.dist[1, 4] == 3 and X.dist[1, 3] == 2

    def test_formula(self):
        n, L = 10, 2.5
        X = sample_circle(n, L)
        for i, j in itertools.product(range(n), repeat=2):
            assert X.dist[i, j] == pytest.approx(L / n * min(abs(i - j), n - abs(i - j)))

    def test_ids_sort_numerically(self):
        X = sample_circle(12, 1.0)
        assert list(X.points[:3]) == ["00", "01", "02"]
        assert list(X.points) == sorted(X.points)


class TestInheritance:
    def test_path_in_c6_inherited(self):
        g = cycle_graph(6)
        X = shortest_path_metric(g)
        sub = X.points[:3]
        intrinsic = shortest_path_metric(g.induced(sub))
        assert metric_inheritance_check(X, sub, intrinsic).inherited

    def test_path_in_c4_violated(self):
        g = cycle_graph(4)
        X = shortest_path_metric(g)
        intrinsic = shortest_path_metric(g.induced(X.points))
        # dropping the closing edge gives the path 0-1-2-3
        path = shortest_path_metric(path_graph(4))
        v = metric_inheritance_check(X, X.points, path)
        assert not v.inherited
        assert tuple(v.witness) == (X.points[0], X.points[3])
        assert v.intrinsic == 3 and v.ambient == 1
        assert metric_inheritance_check(X, X.points, intrinsic).inherited

    def test_whole_space(self):
        X = sample_circle(7, 1.0)
        assert metric_inheritance_check(X, X.points).inherited

    def test_contradiction(self):
        X = shortest_path_metric(path_graph(3))
        shrunk = FiniteMetricSpace(X.points, np.where(X.dist > 0, 0.5, 0.0))
        with pytest.raises(MetricContradiction):
            metric_inheritance_check(X, X.points, shrunk)


class TestValidation:
    def test_asymmetric(self):
        with pytest.raises(InvalidMetric):
            FiniteMetricSpace(["a", "b"], [[0, 1], [2, 0]])

    def test_triangle_inequality(self):
        with pytest.raises(InvalidMetric):
            FiniteMetricSpace(["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])

    def test_zero_off_diagonal(self):
        with pytest.raises(InvalidMetric):
            FiniteMetricSpace(["a", "b"], [[0, 0], [0, 0]])

    def test_canonical_order(self):
        X = FiniteMetricSpace(["b", "a", "c"], [[0, 1, 2], [1, 0, 3], [2, 3, 0]])
        assert list(X.points) == ["a", "b", "c"]
        assert X.dist[X.index("a"), X.index("c")] == 3
        assert X.dist[X.index("b"), X.index("c")] == 2

    def test_immutable(self):
        X = sample_circle(4, 1.0)
        with pytest.raises(ValueError):
            X.dist[0, 1] = 9


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 8))
    verts = [f"p{i}" for i in range(n)]
    pairs = list(itertools.combinations(verts, 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = [(u, v, draw(st.integers(1, 6))) for u, v in chosen]
    return WeightedGraph.from_edges(verts, edges)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_metric_axioms_on_graph_metrics(g):
    D = shortest_path_metric(g).dist
    n = len(D)
    assert np.all(np.diag(D) == 0)
    assert np.array_equal(D, D.T)
    for i, j, k in itertools.product(range(n), repeat=3):
        if np.isfinite(D[i, j]) and np.isfinite(D[j, k]):
            assert D[i, k] <= D[i, j] + D[j, k]


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_subdivision_isometry_property(g):
    sd = subdivide(g)
    big = shortest_path_metric(sd.graph).subspace(g.vertices)
    assert np.array_equal(big.dist, shortest_path_metric(g).dist)


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_whole_space_always_inherited(g):
    X = shortest_path_metric(g)
    assert metric_inheritance_check(X, X.points).inherited
