"""Largest hard-sphere radius admitting k disjoint spheres centred in X."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .complex import DEFAULT_BUDGET, separation
from .errors import BudgetExceeded, KTooLarge
from .metric import FiniteMetricSpace, strictly_greater

EXACT = "exact"
GREEDY = "greedy"


@dataclass(frozen=True)
class PackingResult:
    """``Conf_k(X, r)`` is nonempty exactly for ``r < r_star`` (exact mode).

    In greedy mode ``r_star`` is only a lower bound.
    """

    k: int
    r_star: float
    witness: tuple[str, ...]
    mode: str

    @property
    def lower_bound_only(self) -> bool:
        return self.mode == GREEDY

    def as_dict(self) -> dict:
        return {"k": self.k, "r_star": self.r_star, "witness": list(self.witness), "mode": self.mode}


def max_packing_radius(
    X: FiniteMetricSpace,
    k: int,
    mode: str = EXACT,
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
) -> PackingResult:
    """Max over k-subsets of half the minimum pairwise distance.

    Exact mode enumerates every subset (ties go to the lexicographically
    smallest). Greedy mode runs farthest-point insertion from every start;
    ``seed`` only shuffles the start order, the result is the same.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k > X.n:
        raise KTooLarge(f"k={k} exceeds the {X.n} points of X")
    if k == 1:
        return PackingResult(1, math.inf, (X.points[0],), mode)
    if mode == EXACT:
        return _exact(X, k, budget)
    if mode == GREEDY:
        return _greedy(X, k, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _exact(X: FiniteMetricSpace, k: int, budget: int) -> PackingResult:
    total = math.comb(X.n, k)
    if total > budget:
        raise BudgetExceeded(f"C({X.n},{k}) = {total} subsets exceed the budget of {budget}")
    D = X.dist
    best_sep, best = -1.0, None
    # depth-first with pruning: a partial subset never beats its own separation
    def grow(prefix, sep):
        nonlocal best_sep, best
        if len(prefix) == k:
            if sep > best_sep:
                best_sep, best = sep, tuple(prefix)
            return
        need = k - len(prefix)
        for v in range(prefix[-1] + 1, X.n - need + 1):
            s = min(sep, float(D[prefix, v].min()))
            if s > best_sep:
                grow(prefix + [v], s)

    for i in range(X.n - k + 1):
        grow([i], math.inf)
    return PackingResult(k, best_sep / 2.0, X.labels(best), EXACT)


def _greedy(X: FiniteMetricSpace, k: int, seed: int | None) -> PackingResult:
    starts = list(range(X.n))
    if seed is not None:
        np.random.default_rng(seed).shuffle(starts)
    D = X.dist
    best_sep, best = -1.0, None
    for s in starts:
        chosen = [s]
        gap = D[s].copy()
        gap[s] = -np.inf
        for _ in range(k - 1):
            v = int(np.argmax(gap))
            chosen.append(v)
            gap = np.minimum(gap, D[v])
            gap[chosen] = -np.inf
        c = tuple(sorted(chosen))
        sep = separation(c, X)
        if sep > best_sep or (sep == best_sep and c < best):
            best_sep, best = sep, c
    return PackingResult(k, best_sep / 2.0, X.labels(best), GREEDY)


def conf_nonempty(X: FiniteMetricSpace, k: int, r: float) -> bool:
    """Is there a k-configuration with all pairwise distances > 2r?"""
    if k <= 1:
        return X.n >= k
    if k > X.n:
        return False
    return strictly_greater(max_packing_radius(X, k).r_star, r, X.tol)
