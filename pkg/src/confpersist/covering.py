"""Configuration-Rips model of the unordered configuration space, the
covering cocycle of the k!-sheeted covering and its sign class w1."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .complex import (
    CONFIG_RIPS,
    DEFAULT_BUDGET,
    Configuration,
    FilteredComplex,
    Snapshot,
    separation,
)
from .errors import BudgetExceeded, CocycleViolation, GuardViolated
from .metric import FiniteMetricSpace, strictly_greater
from .persistence import Z2, Cochain

Perm = tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q`` (apply q first)."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def parity(p: Perm) -> int:
    """0 for even permutations, 1 for odd."""
    seen = [False] * len(p)
    cycles = 0
    for i in range(len(p)):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return (len(p) - cycles) % 2


def matching_bijection(
    c: Sequence[int], c2: Sequence[int], delta: float, X: FiniteMetricSpace
) -> Perm | None:
    """Permutation ``p`` with ``c[i]`` matched to ``c2[p[i]]`` within ``delta``.

    Every point of ``c2`` must lie within ``delta`` of exactly one point of
    ``c`` and the assignment must be a bijection; otherwise None.
    """
    for conf in (c, c2):
        if not X.separated(separation(conf, X), delta):
            raise GuardViolated(f"separation of {X.labels(conf)} is not above 2*delta={2 * delta}")
    if len(c) != len(c2):
        return None
    perm = [-1] * len(c)
    for b, y in enumerate(c2):
        near = [a for a, x in enumerate(c) if X.within(X.d(x, y), delta)]
        if len(near) != 1 or perm[near[0]] != -1:
            return None
        perm[near[0]] = b
    return tuple(perm)


@dataclass
class CoveringCocycle:
    """Permutation labels on oriented edges of the configuration-Rips complex.

    ``perms[(i, j)]`` (i < j) transports the sorted labeling of configuration
    i to the matched labeling of configuration j; the reversed edge carries
    the inverse.
    """

    k: int
    configurations: list[Configuration]
    perms: dict[tuple[int, int], Perm] = field(default_factory=dict)

    def __call__(self, i: int, j: int) -> Perm:
        if i < j:
            return self.perms[(i, j)]
        return inverse(self.perms[(j, i)])

    def holds_on(self, tri: tuple[int, int, int]) -> bool:
        a, b, c = tri
        return compose(self(b, c), self(a, b)) == self(a, c)

    def records(self, labels: Sequence[str]) -> list[dict]:
        return [
            {"edge": [list(labels_of(self.configurations[i], labels)), list(labels_of(self.configurations[j], labels))],
             "perm": list(p)}
            for (i, j), p in sorted(self.perms.items())
        ]


def labels_of(c: Configuration, labels: Sequence[str]) -> tuple[str, ...]:
    return tuple(labels[i] for i in c)


@dataclass
class ConfigRipsComplex:
    X: FiniteMetricSpace
    k: int
    delta: float
    r_lo: float
    r_hi: float
    configurations: list[Configuration]
    complex: FilteredComplex
    cocycle: CoveringCocycle
    excluded_triangles: list[tuple[int, int, int]] = field(default_factory=list)

    def snapshot(self, r: float | None = None) -> Snapshot:
        return self.complex.snapshot(self.r_lo if r is None else r)

    def config_label(self, i: int) -> str:
        return "|".join(self.X.labels(self.configurations[i]))

    def vertex_of(self, c: Sequence[int]) -> int:
        return self._index[tuple(sorted(c))]

    def __post_init__(self):
        self._index = {c: i for i, c in enumerate(self.configurations)}


def build_config_rips(
    X: FiniteMetricSpace,
    k: int,
    delta: float,
    r_grid: Sequence[float],
    dim_cap: int = 2,
    budget: int = DEFAULT_BUDGET,
) -> ConfigRipsComplex:
    """Configurations as vertices, small-displacement matchings as edges.

    Vertices are the k-subsets surviving at ``min(r_grid)``; a simplex of
    dimension >= 2 is kept only if the covering cocycle closes up on each of
    its triangles. Failing triangles are listed in ``excluded_triangles``.
    """
    if not r_grid:
        raise ValueError("r_grid must contain at least one radius")
    r_lo, r_hi = min(r_grid), max(r_grid)
    if strictly_greater(delta, r_lo, X.tol):
        raise GuardViolated(f"delta={delta} exceeds the smallest radius {r_lo}")
    if not delta > 0:
        raise ValueError("delta must be positive")
    if math.comb(X.n, k) > budget:
        raise BudgetExceeded(f"C({X.n},{k}) configurations exceed the budget of {budget}")

    configs = [
        c for c in itertools.combinations(range(X.n), k) if X.separated(separation(c, X), r_lo)
    ]
    index = {c: i for i, c in enumerate(configs)}
    near = [[q for q in range(X.n) if X.within(X.d(p, q), delta)] for p in range(X.n)]

    perms: dict[tuple[int, int], Perm] = {}
    adj: list[set[int]] = [set() for _ in configs]
    work = 0
    for i, c in enumerate(configs):
        for moved in itertools.product(*(near[p] for p in c)):
            work += 1
            target = tuple(sorted(moved))
            j = index.get(target)
            if j is None or j <= i or (i, j) in perms:
                continue
            p = matching_bijection(c, target, delta, X)
            if p is not None:
                perms[(i, j)] = p
                adj[i].add(j)
                adj[j].add(i)
        if work > budget:
            raise BudgetExceeded("edge enumeration exceeded the budget")
    g = CoveringCocycle(k, configs, perms)

    value = [separation(c, X) / 2.0 for c in configs]
    simplices: dict[tuple[int, ...], float] = {(i,): value[i] for i in range(len(configs))}
    for (i, j) in perms:
        simplices[(i, j)] = min(value[i], value[j])

    excluded: list[tuple[int, int, int]] = []
    good: set[tuple[int, int, int]] = set()
    if dim_cap >= 2:
        for i in range(len(configs)):
            up = sorted(j for j in adj[i] if j > i)
            for a, j in enumerate(up):
                for l in up[a + 1:]:
                    if l in adj[j]:
                        tri = (i, j, l)
                        if g.holds_on(tri):
                            good.add(tri)
                            simplices[tri] = min(value[i], value[j], value[l])
                        else:
                            excluded.append(tri)
        level = sorted(good)
        for _ in range(3, dim_cap + 1):
            nxt = []
            for s in level:
                common = set.intersection(*(adj[v] for v in s))
                for v in sorted(w for w in common if w > s[-1]):
                    if all((a, b, v) in good for a, b in itertools.combinations(s, 2)):
                        t = s + (v,)
                        nxt.append(t)
                        simplices[t] = min(value[u] for u in t)
            if len(simplices) > budget:
                raise BudgetExceeded(f"{len(simplices)} simplices exceed the budget of {budget}")
            level = nxt
    labels = ["|".join(X.labels(c)) for c in configs]
    K = FilteredComplex(simplices, dim_cap, CONFIG_RIPS, labels, X.tol)
    return ConfigRipsComplex(X, k, delta, r_lo, r_hi, configs, K, g, excluded)


@dataclass
class CoveringReport:
    k: int
    sheets: int
    fiber_sizes: list[int]
    free: bool
    transitive: bool
    deck_commutes: bool
    base_vertices: int
    base_components: int
    total_components: int
    lifted_edges: int

    @property
    def ok(self) -> bool:
        return (
            all(s == self.sheets for s in self.fiber_sizes)
            and self.free
            and self.transitive
            and self.deck_commutes
        )

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "sheets": self.sheets,
            "fiber_size_min": min(self.fiber_sizes, default=self.sheets),
            "fiber_size_max": max(self.fiber_sizes, default=self.sheets),
            "free": self.free,
            "transitive": self.transitive,
            "deck_commutes": self.deck_commutes,
            "base_vertices": self.base_vertices,
            "base_components": self.base_components,
            "total_components": self.total_components,
            "lifted_edges": self.lifted_edges,
        }


def _deck(sigma: Perm, s: Perm) -> Perm:
    # right action (a_1..a_k)·sigma = (a_{sigma^-1(1)} .. a_{sigma^-1(k)})
    inv = inverse(sigma)
    return tuple(s[inv[m]] for m in range(len(s)))


def verify_covering(K: ConfigRipsComplex, g: CoveringCocycle | None = None, r: float | None = None) -> CoveringReport:
    """Build the total space of the covering over the complex at radius r and audit it.

    A sheet over configuration c is an ordering ``s`` of its points (the ordered
    configuration ``(c[s0], ..., c[s_{k-1}])``); edges lift through the matching.
    """
    g = K.cocycle if g is None else g
    snap = K.snapshot(r)
    for tri in snap.of_dim(2):
        if not g.holds_on(tri):
            raise CocycleViolation(f"cocycle fails on triangle {tri}", tri)
    k = g.k
    sigmas = list(itertools.permutations(range(k)))
    identity = tuple(range(k))
    sheet_id = {s: a for a, s in enumerate(sigmas)}
    base = [v[0] for v in snap.of_dim(0)]
    slot = {v: a for a, v in enumerate(base)}
    nsheets = len(sigmas)

    fiber_sizes = []
    free = transitive = True
    for v in base:
        c = g.configurations[v]
        fiber = {tuple(c[i] for i in s) for s in sigmas}
        fiber_sizes.append(len(fiber))
    s0 = sigmas[0]
    orbit = {_deck(sig, s0) for sig in sigmas}
    transitive = len(orbit) == nsheets
    for sig in sigmas:
        if sig != identity and any(_deck(sig, s) == s for s in sigmas):
            free = False

    rows, cols = [], []
    commutes = True
    edges = snap.of_dim(1)
    for (i, j) in edges:
        p = g(i, j)
        for s in sigmas:
            lifted = compose(p, s)
            rows.append(slot[i] * nsheets + sheet_id[s])
            cols.append(slot[j] * nsheets + sheet_id[lifted])
        for sig in sigmas:
            if any(compose(p, _deck(sig, s)) != _deck(sig, compose(p, s)) for s in sigmas):
                commutes = False
    nb = len(base)
    base_adj = coo_matrix((np.ones(len(edges)), ([slot[i] for i, _ in edges], [slot[j] for _, j in edges])), shape=(nb, nb))
    total_adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(nb * nsheets, nb * nsheets))
    base_cc = connected_components(base_adj, directed=False)[0] if nb else 0
    total_cc = connected_components(total_adj, directed=False)[0] if nb else 0
    return CoveringReport(
        k, math.factorial(k), fiber_sizes, free, transitive, commutes,
        nb, int(base_cc), int(total_cc), len(rows),
    )


@dataclass(eq=False)
class W1Cocycle(Cochain):
    """Sign of the covering cocycle as a Z/2 1-cochain on the model."""

    configurations: list[Configuration] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)

    def by_configuration(self, snap: Snapshot | None = None) -> dict[tuple[Configuration, Configuration], int]:
        """Value on every edge (zeros included), keyed by the two configurations."""
        conf = self.configurations
        return {
            (conf[i], conf[j]): self[(i, j)]
            for (i, j) in self.edges
            if snap is None or (i, j) in snap
        }

    def restrict(self, snap: Snapshot) -> Cochain:
        return Cochain(1, {s: v for s, v in self.values.items() if s in snap}, Z2, snap.r)


def w1(g: CoveringCocycle) -> W1Cocycle:
    return W1Cocycle(
        1, {e: parity(p) for e, p in g.perms.items()}, Z2, None, list(g.configurations), sorted(g.perms)
    )
