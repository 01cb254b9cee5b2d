"""Hard-sphere configuration sets, the filtered independence complex and the
configuration chain complex with its point-deletion boundary."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sps

from .errors import BudgetExceeded, IndexOutOfRange, NonMonotoneFiltration
from .metric import FiniteMetricSpace, strictly_greater

DEFAULT_BUDGET = 5_000_000

HARD_SPHERE = "hard_sphere_r"
CONFIG_RIPS = "config_rips_r"

Configuration = tuple[int, ...]
Simplex = tuple[int, ...]


def separation(c: Sequence[int], X: FiniteMetricSpace) -> float:
    """Minimum pairwise distance of a configuration (``inf`` for fewer than two points)."""
    if len(c) < 2:
        return math.inf
    idx = list(c)
    sub = X.dist[np.ix_(idx, idx)]
    return float(sub[np.triu_indices(len(idx), 1)].min())


def in_configuration_space(c: Sequence[int], X: FiniteMetricSpace, r: float) -> bool:
    return len(set(c)) == len(c) and X.separated(separation(c, X), r)


def iter_configurations(X: FiniteMetricSpace, k: int, r: float):
    """k-subsets with pairwise distance > 2r, in lexicographic order.

    Grown as cliques of the separation graph, so pruned subsets are never visited.
    """
    if k < 1:
        return
    n = X.n
    ok = [[j for j in range(i + 1, n) if X.separated(X.d(i, j), r)] for i in range(n)]
    ok_sets = [set(row) for row in ok]

    def grow(prefix, cands):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for v in cands:
            if k - len(prefix) == 1:
                yield tuple(prefix) + (v,)
            else:
                yield from grow(prefix + [v], [w for w in cands if w > v and w in ok_sets[v]])

    for i in range(n):
        if k == 1:
            yield (i,)
        else:
            yield from grow([i], ok[i])


def unordered_configurations(X: FiniteMetricSpace, k: int, r: float) -> list[Configuration]:
    return list(iter_configurations(X, k, r))


def ordered_configurations(X: FiniteMetricSpace, k: int, r: float) -> list[Configuration]:
    out = []
    for c in unordered_configurations(X, k, r):
        out.extend(itertools.permutations(c))
    out.sort()
    return out


class Snapshot:
    """The simplicial complex of a filtration at one value of the radius."""

    def __init__(self, simplices: Iterable[Simplex], r: float | None = None):
        by_dim: dict[int, list[Simplex]] = {}
        for s in simplices:
            by_dim.setdefault(len(s) - 1, []).append(tuple(s))
        top = max(by_dim, default=-1)
        self.r = r
        self.simplices: list[list[Simplex]] = [sorted(by_dim.get(q, [])) for q in range(top + 1)]
        self.index: list[dict[Simplex, int]] = [{s: i for i, s in enumerate(ss)} for ss in self.simplices]

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self, q: int) -> int:
        return len(self.simplices[q]) if 0 <= q < len(self.simplices) else 0

    def of_dim(self, q: int) -> list[Simplex]:
        return self.simplices[q] if 0 <= q < len(self.simplices) else []

    def __contains__(self, s) -> bool:
        q = len(s) - 1
        return 0 <= q < len(self.index) and tuple(s) in self.index[q]

    def __len__(self) -> int:
        return sum(len(ss) for ss in self.simplices)

    def is_subcomplex_of(self, other: "Snapshot") -> bool:
        return all(s in other for ss in self.simplices for s in ss)


class FilteredComplex:
    """Simplices with hard-sphere survival thresholds.

    ``simplices[s]`` is the value ``sep(s)/2``; the simplex is present at radius
    ``r`` exactly when ``r < sep(s)/2``, so complexes shrink as ``r`` grows.
    """

    def __init__(
        self,
        simplices: dict[Simplex, float],
        dim_cap: int | None = None,
        semantics: str = HARD_SPHERE,
        labels: Sequence | None = None,
        tol: float = 0.0,
    ):
        self.simplices = {tuple(s): float(v) for s, v in simplices.items()}
        top = max((len(s) - 1 for s in self.simplices), default=-1)
        self.dim_cap = top if dim_cap is None else dim_cap
        self.semantics = semantics
        self.labels = tuple(labels) if labels is not None else None
        self.tol = tol

    def __len__(self) -> int:
        return len(self.simplices)

    def __repr__(self) -> str:
        return f"FilteredComplex({len(self)} simplices, dim_cap={self.dim_cap}, {self.semantics})"

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def value(self, s: Simplex) -> float:
        return self.simplices[tuple(s)]

    def present(self, s: Simplex, r: float) -> bool:
        return strictly_greater(self.simplices[tuple(s)], r, self.tol)

    def snapshot(self, r: float) -> Snapshot:
        return Snapshot((s for s, v in self.simplices.items() if strictly_greater(v, r, self.tol)), r)

    def critical_values(self) -> list[float]:
        return sorted({v for v in self.simplices.values() if math.isfinite(v)})

    def filtration_order(self) -> list[Simplex]:
        """Entrance order in ``u = -sep/2``; ties by dimension then vertex tuple."""
        return sorted(self.simplices, key=lambda s: (-self.simplices[s], len(s), s))

    def check_monotone(self) -> None:
        for s, v in self.simplices.items():
            if len(s) < 2:
                continue
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                fv = self.simplices.get(f)
                if fv is None:
                    raise NonMonotoneFiltration(f"face {f} of {s} is missing")
                if fv < v:
                    raise NonMonotoneFiltration(f"face {f} leaves before its coface {s}")

    def records(self) -> list[dict]:
        """Export rows ``{"verts": [...], "sep": ...}`` in filtration order."""
        out = []
        for s in self.filtration_order():
            verts = [self.labels[i] for i in s] if self.labels is not None else list(s)
            out.append({"verts": verts, "sep": 2.0 * self.simplices[s]})
        return out


def build_independence_filtration(
    X: FiniteMetricSpace, k_max: int, budget: int = DEFAULT_BUDGET
) -> FilteredComplex:
    """All subsets of at most ``k_max`` points, valued by half their separation.

    At radius r the (k-1)-simplices are exactly the unordered configurations
    in ``Conf_k(X, r)``.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    total = sum(math.comb(X.n, j) for j in range(1, k_max + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} simplices exceed the budget of {budget}")
    half = X.dist / 2.0
    level = {(i,): math.inf for i in range(X.n)}
    simplices = dict(level)
    for _ in range(1, k_max):
        nxt = {}
        for s, v in level.items():
            for w in range(s[-1] + 1, X.n):
                nxt[s + (w,)] = min(v, float(half[list(s), w].min()))
        simplices.update(nxt)
        level = nxt
    return FilteredComplex(simplices, k_max - 1, HARD_SPHERE, X.points, X.tol)


def face_map(i: int, c: Sequence) -> tuple:
    """Delete the i-th coordinate (1-based) of an ordered configuration."""
    if not 1 <= i <= len(c):
        raise IndexOutOfRange(f"face index {i} outside 1..{len(c)}")
    c = tuple(c)
    return c[: i - 1] + c[i:]


def sigma_action(perm: Sequence[int], c: Sequence) -> tuple:
    """``(x_1..x_k) -> (x_perm(1) .. x_perm(k))`` with 0-based one-line ``perm``."""
    if sorted(perm) != list(range(len(c))):
        raise ValueError(f"{perm} is not a permutation of {len(c)} letters")
    return tuple(c[p] for p in perm)


def configuration_boundary(
    k: int, r: float, X: FiniteMetricSpace, ring: str = "Z"
) -> tuple[sps.csr_matrix, list[Configuration], list[Configuration]]:
    """Alternating point-deletion map ``C(Conf_k(X,r)) -> C(Conf_{k-1}(X,r))``.

    Returns the matrix with its row basis (k-1 tuples) and column basis
    (k tuples). The ``k = 1`` map is the zero map with no rows.
    """
    cols = ordered_configurations(X, k, r)
    if k <= 1:
        return sps.csr_matrix((0, len(cols)), dtype=np.int64), [], cols
    rows = ordered_configurations(X, k - 1, r)
    return _deletion_matrix(rows, cols, ring), rows, cols


def _deletion_matrix(rows, cols, ring):
    row_index = {c: i for i, c in enumerate(rows)}
    I, J, V = [], [], []
    for j, c in enumerate(cols):
        for i in range(1, len(c) + 1):
            I.append(row_index[face_map(i, c)])
            J.append(j)
            V.append(1 if i % 2 == 1 else -1)
    M = sps.csr_matrix((V, (I, J)), shape=(len(rows), len(cols)), dtype=np.int64)
    M.sum_duplicates()
    if ring == "Z2":
        M.data %= 2
        M.eliminate_zeros()
    return M


def inclusion_matrix(small: list, big: list) -> sps.csr_matrix:
    """0/1 matrix of the inclusion of basis ``small`` into basis ``big``."""
    pos = {c: i for i, c in enumerate(big)}
    J = list(range(len(small)))
    I = [pos[c] for c in small]
    return sps.csr_matrix((np.ones(len(small), dtype=np.int64), (I, J)), shape=(len(big), len(small)))


@dataclass
class ConfigurationChainComplex:
    r: float
    bases: dict[int, list[Configuration]]
    boundaries: dict[int, sps.csr_matrix]
    ring: str = "Z"

    def square_zero_failures(self) -> list[int]:
        bad = []
        for k in sorted(self.boundaries):
            if k >= 3:
                prod = self.boundaries[k - 1] @ self.boundaries[k]
                if self.ring == "Z2":
                    prod.data %= 2
                if prod.count_nonzero():
                    bad.append(k)
        return bad


def configuration_chain_complex(
    X: FiniteMetricSpace, k_max: int, r: float, ring: str = "Z"
) -> ConfigurationChainComplex:
    bases = {k: ordered_configurations(X, k, r) for k in range(1, k_max + 1)}
    boundaries = {1: sps.csr_matrix((0, len(bases[1])), dtype=np.int64)}
    for k in range(2, k_max + 1):
        boundaries[k] = _deletion_matrix(bases[k - 1], bases[k], ring)
    return ConfigurationChainComplex(r, bases, boundaries, ring)


@dataclass
class DeltaCheckReport:
    radii: list[float]
    k_max: int
    square_checks: int = 0
    square_failures: list[tuple[int, float]] = field(default_factory=list)
    commute_checks: int = 0
    commute_failures: list[tuple[int, float, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.square_failures and not self.commute_failures

    def as_dict(self) -> dict:
        return {
            "k_max": self.k_max,
            "radii": self.radii,
            "square_checks": self.square_checks,
            "square_failures": [list(f) for f in self.square_failures],
            "commute_checks": self.commute_checks,
            "commute_failures": [list(f) for f in self.commute_failures],
            "ok": self.ok,
        }


def critical_radii(X: FiniteMetricSpace) -> list[float]:
    """0 together with every finite half-distance, ascending."""
    D = X.dist[np.triu_indices(X.n, 1)]
    return sorted({0.0} | {float(d) / 2.0 for d in D if math.isfinite(d)})


def delta_check(
    X: FiniteMetricSpace, k_max: int = 3, radii: Sequence[float] | None = None, ring: str = "Z"
) -> DeltaCheckReport:
    """Audit ``d∘d = 0`` at every radius and ``d`` commuting with every inclusion."""
    radii = sorted(critical_radii(X) if radii is None else set(radii))
    report = DeltaCheckReport(list(radii), k_max)
    complexes = [configuration_chain_complex(X, k_max, r, ring) for r in radii]
    for cc in complexes:
        failed = cc.square_zero_failures()
        for k in range(2, k_max + 1):
            report.square_checks += 1
            if k in failed:
                report.square_failures.append((k, cc.r))
    for a, lo in enumerate(complexes):
        for hi in complexes[a + 1:]:
            # hi.r >= lo.r, so Conf(hi.r) sits inside Conf(lo.r)
            for k in range(2, k_max + 1):
                report.commute_checks += 1
                top = inclusion_matrix(hi.bases[k], lo.bases[k])
                bottom = inclusion_matrix(hi.bases[k - 1], lo.bases[k - 1])
                diff = bottom @ hi.boundaries[k] - lo.boundaries[k] @ top
                if ring == "Z2":
                    diff.data %= 2
                if diff.count_nonzero():
                    report.commute_failures.append((k, hi.r, lo.r))
    return report
