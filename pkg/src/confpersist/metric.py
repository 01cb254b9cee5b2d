"""Finite metric spaces, weighted graphs and their shortest-path metrics."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidMetric, MetricContradiction, NonIntegerWeight

DEFAULT_TOL = 1e-9


def strictly_greater(a: float, b: float, tol: float = 0.0) -> bool:
    """``a > b`` where values within relative ``tol`` of each other count as equal."""
    if not a > b:
        return False
    if tol and math.isfinite(a) and math.isfinite(b):
        return not math.isclose(a, b, rel_tol=tol, abs_tol=0.0)
    return True


def at_most(a: float, b: float, tol: float = 0.0) -> bool:
    return not strictly_greater(a, b, tol)


def _is_integral(x) -> bool:
    if isinstance(x, (bool, np.bool_)):
        return False
    if isinstance(x, (int, np.integer)):
        return True
    return isinstance(x, (float, np.floating)) and math.isfinite(x) and float(x).is_integer()


class FiniteMetricSpace:
    """A finite set of opaque point ids with an extended-real distance matrix.

    Points are stored in canonical (lexicographic) order; everything downstream
    refers to points by their index in that order. ``exact`` spaces (all finite
    distances integral) compare with zero tolerance, the rest with a relative
    tolerance ``tol``.
    """

    def __init__(
        self,
        points: Sequence,
        dist,
        *,
        exact: bool | None = None,
        tol: float = DEFAULT_TOL,
        validate: bool = True,
    ):
        ids = [str(p) for p in points]
        if len(set(ids)) != len(ids):
            raise InvalidMetric("point identifiers must be unique")
        D = np.array(dist, dtype=float)
        if D.shape != (len(ids), len(ids)):
            raise InvalidMetric(f"distance matrix has shape {D.shape}, expected {(len(ids),) * 2}")
        order = sorted(range(len(ids)), key=ids.__getitem__)
        D = D[np.ix_(order, order)]
        D.setflags(write=False)
        self.points: tuple[str, ...] = tuple(ids[i] for i in order)
        self.dist = D
        finite = D[np.isfinite(D)]
        if exact is None:
            exact = bool(np.all(finite == np.round(finite)))
        self.exact = exact
        self.tol = 0.0 if exact else float(tol)
        self._index = {p: i for i, p in enumerate(self.points)}
        if validate:
            self.validate()

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={len(self)}, exact={self.exact})"

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, point) -> int:
        return self._index[str(point)]

    def indices(self, points: Iterable) -> tuple[int, ...]:
        return tuple(self._index[str(p)] for p in points)

    def labels(self, indices: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.points[i] for i in indices)

    def d(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    def separated(self, distance: float, r: float) -> bool:
        """Hard-sphere test ``distance > 2r`` (strict)."""
        return strictly_greater(distance, 2.0 * r, self.tol)

    def within(self, distance: float, delta: float) -> bool:
        return at_most(distance, delta, self.tol)

    def diameter(self) -> float:
        return float(self.dist.max()) if self.n else 0.0

    def subspace(self, points: Iterable) -> "FiniteMetricSpace":
        idx = sorted(self.indices(points))
        return FiniteMetricSpace(
            [self.points[i] for i in idx],
            self.dist[np.ix_(idx, idx)],
            exact=self.exact,
            tol=self.tol or DEFAULT_TOL,
            validate=False,
        )

    def validate(self) -> None:
        D = self.dist
        n = self.n
        if n == 0:
            return
        if np.isnan(D).any():
            raise InvalidMetric("distance matrix contains NaN")
        if np.any(np.diag(D) != 0):
            raise InvalidMetric("diagonal must be zero")
        if not np.array_equal(D, D.T):
            if self.exact or not np.allclose(D, D.T, rtol=self.tol, atol=0):
                raise InvalidMetric("distance matrix is not symmetric")
        off = D[~np.eye(n, dtype=bool)]
        if np.any(off <= 0):
            raise InvalidMetric("distinct points must have positive distance")
        slack = self.tol * np.where(np.isfinite(D), D, 0.0)
        for m in range(n):
            via = D[:, m, None] + D[None, m, :]
            bad = D > via + slack
            if bad.any():
                i, j = map(int, np.argwhere(bad)[0])
                raise InvalidMetric(
                    f"triangle inequality fails: d({self.points[i]},{self.points[j]}) > "
                    f"d({self.points[i]},{self.points[m]}) + d({self.points[m]},{self.points[j]})"
                )


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with positive edge weights (edges keyed by sorted id pairs)."""

    vertices: tuple[str, ...]
    weights: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise InvalidMetric("duplicate vertices")
        vset = set(verts)
        clean = {}
        for (u, v), w in self.weights.items():
            u, v = str(u), str(v)
            if u == v:
                raise InvalidMetric(f"self-loop at {u}")
            if u not in vset or v not in vset:
                raise InvalidMetric(f"edge {u}-{v} uses an unknown vertex")
            if not w > 0:
                raise InvalidMetric(f"edge {u}-{v} has non-positive weight {w}")
            key = (u, v) if u < v else (v, u)
            if key in clean:
                raise InvalidMetric(f"duplicate edge {key}")
            clean[key] = w
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "WeightedGraph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; missing weights are 1."""
        weights = {}
        for e in edges:
            u, v, *rest = e
            key = (str(u), str(v))
            if key in weights or key[::-1] in weights:
                raise InvalidMetric(f"duplicate edge {key}")
            weights[key] = rest[0] if rest else 1
        return cls(tuple(vertices), weights)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return list(self.weights)

    def integer_weights(self) -> bool:
        return all(_is_integral(w) for w in self.weights.values())

    def adjacency(self) -> dict[str, list[tuple[str, float]]]:
        adj: dict[str, list[tuple[str, float]]] = {v: [] for v in self.vertices}
        for (u, v), w in self.weights.items():
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def induced(self, subset: Iterable) -> "WeightedGraph":
        keep = {str(v) for v in subset}
        return WeightedGraph(
            tuple(v for v in self.vertices if v in keep),
            {e: w for e, w in self.weights.items() if e[0] in keep and e[1] in keep},
        )


@dataclass(frozen=True)
class SubdividedGraph:
    """``base`` with every edge of weight w replaced by a path of w unit edges."""

    base: WeightedGraph
    graph: WeightedGraph
    original: tuple[str, ...]


def cycle_graph(n: int, weight: float = 1) -> WeightedGraph:
    """Cycle C_n with zero-padded vertex ids so lexicographic order is numeric order."""
    ids = _padded_ids(n)
    if n == 1:
        return WeightedGraph(tuple(ids))
    if n == 2:
        return WeightedGraph.from_edges(ids, [(ids[0], ids[1], weight)])
    return WeightedGraph.from_edges(ids, [(ids[i], ids[(i + 1) % n], weight) for i in range(n)])


def path_graph(n: int, weight: float = 1) -> WeightedGraph:
    ids = _padded_ids(n)
    return WeightedGraph.from_edges(ids, [(ids[i], ids[i + 1], weight) for i in range(n - 1)])


def _padded_ids(n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [str(i).zfill(width) for i in range(n)]


def shortest_path_metric(g: WeightedGraph, *, tol: float = DEFAULT_TOL) -> FiniteMetricSpace:
    """All-pairs shortest paths by Dijkstra; unreachable pairs get ``inf``.

    Integer weights are summed as Python ints, so the result is exact.
    """
    exact = g.integer_weights()
    adj = g.adjacency()
    if exact:
        adj = {u: [(v, int(w)) for v, w in nbrs] for u, nbrs in adj.items()}
    pos = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    D = np.full((n, n), np.inf)
    for s in g.vertices:
        best = {s: 0}
        heap = [(0, s)]
        done = set()
        while heap:
            du, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w in adj[u]:
                nd = du + w
                if v not in best or nd < best[v]:
                    best[v] = nd
                    heapq.heappush(heap, (nd, v))
        row = pos[s]
        for v, dv in best.items():
            D[row, pos[v]] = dv
    return FiniteMetricSpace(g.vertices, D, exact=exact, tol=tol)


def subdivide(g: WeightedGraph) -> SubdividedGraph:
    """Replace each edge of integer weight w by w unit edges through w-1 new vertices."""
    for e, w in g.weights.items():
        if not _is_integral(w) or int(w) < 1:
            raise NonIntegerWeight(f"edge {e} has weight {w!r}; subdivision needs positive integers")
    taken = set(g.vertices)
    vertices = list(g.vertices)
    unit_edges = []
    for (u, v), w in g.weights.items():
        chain = [u]
        for i in range(1, int(w)):
            name = f"{u}~{v}#{i}"
            while name in taken:
                name += "'"
            taken.add(name)
            vertices.append(name)
            chain.append(name)
        chain.append(v)
        unit_edges.extend((a, b, 1) for a, b in zip(chain, chain[1:]))
    return SubdividedGraph(g, WeightedGraph.from_edges(vertices, unit_edges), tuple(g.vertices))


def sample_circle(n: int, circumference: float = 1.0) -> FiniteMetricSpace:
    """``n`` equally spaced points on a circle with the arc-length metric."""
    if n < 1 or not circumference > 0:
        raise InvalidMetric("need n >= 1 and a positive circumference")
    step = circumference / n
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    D = step * np.minimum(gap, n - gap)
    return FiniteMetricSpace(_padded_ids(n), D, validate=False)


@dataclass(frozen=True)
class InheritanceVerdict:
    inherited: bool
    witness: tuple[str, str] | None = None
    intrinsic: float | None = None
    ambient: float | None = None


def metric_inheritance_check(
    ambient: FiniteMetricSpace,
    subset: Iterable,
    intrinsic: FiniteMetricSpace | None = None,
) -> InheritanceVerdict:
    """Does the intrinsic metric of ``subset`` agree with the ambient one?

    ``intrinsic`` defaults to the restriction of ``ambient`` (always inherited).
    The first violated pair in canonical order is returned as a witness.
    """
    sub = sorted({str(p) for p in subset})
    for p in sub:
        if p not in ambient._index:
            raise InvalidMetric(f"{p} is not a point of the ambient space")
    if intrinsic is None:
        return InheritanceVerdict(True)
    if set(intrinsic.points) != set(sub):
        raise InvalidMetric("intrinsic metric must be defined on exactly the subset")
    tol = max(ambient.tol, intrinsic.tol)
    witness = None
    for a in range(len(sub)):
        for b in range(a + 1, len(sub)):
            p, q = sub[a], sub[b]
            di = intrinsic.d(intrinsic.index(p), intrinsic.index(q))
            da = ambient.d(ambient.index(p), ambient.index(q))
            if strictly_greater(da, di, tol):
                raise MetricContradiction(
                    f"intrinsic distance {di} < ambient {da} for ({p}, {q})"
                )
            if witness is None and strictly_greater(di, da, tol):
                witness = (p, q, di, da)
    if witness is None:
        return InheritanceVerdict(True)
    p, q, di, da = witness
    return InheritanceVerdict(False, (p, q), di, da)
