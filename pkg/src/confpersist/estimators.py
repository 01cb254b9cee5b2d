"""scikit-learn style wrappers around the functional API.

Each transformer maps a collection of distance matrices (or metric spaces)
to one row of features per space, so they drop into a ``Pipeline``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_distance_collection, check_distance_matrix, check_positive_int
from .complex import DEFAULT_BUDGET, build_independence_filtration
from .obstruction import obstruction_report
from .packing import max_packing_radius
from .persistence import compute_persistence


class HardSpherePersistence(TransformerMixin, BaseEstimator):
    """Barcodes of the independence filtration, one ``(m, 3)`` array per input."""

    def __init__(self, k_max: int = 2, max_dim: int = 1, budget: int = DEFAULT_BUDGET):
        self.k_max = k_max
        self.max_dim = max_dim
        self.budget = budget

    def fit(self, X, y=None):
        check_positive_int(self.k_max, "k_max")
        if self.max_dim < 0:
            raise ValueError("max_dim must be nonnegative")
        return self

    def transform(self, X) -> list[np.ndarray]:
        out = []
        for space in check_distance_collection(X):
            K = build_independence_filtration(space, self.k_max, self.budget)
            out.append(compute_persistence(K, self.max_dim).to_array())
        return out


class BettiCurve(TransformerMixin, BaseEstimator):
    """Z/2 Betti numbers sampled on a fixed radius grid.

    Output columns are ordered by dimension, then radius.
    """

    def __init__(self, radii=(0.0,), k_max: int = 2, max_dim: int = 1, budget: int = DEFAULT_BUDGET):
        self.radii = radii
        self.k_max = k_max
        self.max_dim = max_dim
        self.budget = budget

    def fit(self, X, y=None):
        check_positive_int(self.k_max, "k_max")
        self.radii_ = np.asarray(self.radii, dtype=float)
        if self.radii_.ndim != 1 or (self.radii_ < 0).any():
            raise ValueError("radii must be a 1-d sequence of nonnegative numbers")
        self.n_features_out_ = (self.max_dim + 1) * len(self.radii_)
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "radii_"):
            raise RuntimeError("BettiCurve is not fitted")
        rows = []
        for space in check_distance_collection(X):
            bc = compute_persistence(build_independence_filtration(space, self.k_max, self.budget), self.max_dim)
            rows.append([bc.count(q, r) for q in range(self.max_dim + 1) for r in self.radii_])
        return np.array(rows, dtype=int)


class PackingRadius(TransformerMixin, BaseEstimator):
    """Largest hard-sphere radius for k spheres, one column per input space."""

    def __init__(self, k: int = 2, mode: str = "exact", budget: int = DEFAULT_BUDGET, seed: int | None = None):
        self.k = k
        self.mode = mode
        self.budget = budget
        self.seed = seed

    def fit(self, X, y=None):
        check_positive_int(self.k, "k")
        return self

    def transform(self, X) -> np.ndarray:
        spaces = check_distance_collection(X)
        return np.array(
            [[max_packing_radius(s, self.k, self.mode, self.budget, self.seed).r_star] for s in spaces]
        )


class RegularityObstruction(BaseEstimator):
    """Fit on one metric space; exposes the obstruction report and the real lower bound on N."""

    def __init__(self, k: int = 2, r: float = 0.0, delta: float = 0.0, r_grid=(0.0,), t_max: int = 2,
                 budget: int = DEFAULT_BUDGET):
        self.k = k
        self.r = r
        self.delta = delta
        self.r_grid = r_grid
        self.t_max = t_max
        self.budget = budget

    def fit(self, X, y=None):
        check_positive_int(self.k, "k")
        space = check_distance_matrix(X)
        self.report_ = obstruction_report(
            space, self.k, self.r, self.delta, list(self.r_grid), self.t_max, budget=self.budget
        )
        self.lower_bound_ = self.report_.N_lb_real
        self.lower_bound_complex_ = self.report_.N_lb_complex
        return self
