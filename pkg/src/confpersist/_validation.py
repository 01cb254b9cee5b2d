"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np

from .errors import InvalidMetric
from .metric import FiniteMetricSpace


def check_distance_matrix(D, ids=None) -> FiniteMetricSpace:
    """Accept a square array (or an existing space) and return a validated metric space."""
    if isinstance(D, FiniteMetricSpace):
        return D
    arr = np.asarray(D, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidMetric(f"expected a square distance matrix, got shape {arr.shape}")
    if np.isnan(arr).any():
        raise InvalidMetric("distance matrix contains NaN")
    if ids is None:
        width = len(str(max(arr.shape[0] - 1, 0)))
        ids = [str(i).zfill(width) for i in range(arr.shape[0])]
    return FiniteMetricSpace(ids, arr)


def check_distance_collection(Xs) -> list[FiniteMetricSpace]:
    """A single matrix/space or an iterable of them becomes a list of spaces."""
    if isinstance(Xs, FiniteMetricSpace):
        return [Xs]
    if isinstance(Xs, np.ndarray) and Xs.ndim == 2:
        return [check_distance_matrix(Xs)]
    if isinstance(Xs, np.ndarray) and Xs.ndim == 3:
        return [check_distance_matrix(D) for D in Xs]
    items = list(Xs)
    if not items:
        raise ValueError("empty collection of distance matrices")
    return [check_distance_matrix(D) for D in items]


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
