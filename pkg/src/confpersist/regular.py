"""Exhaustive checks of (k, r)-regularity, affine regularity and geometric
realization of independence-complex skeleta for sampled maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .complex import DEFAULT_BUDGET, iter_configurations, separation
from .errors import BudgetExceeded, NotInherited, ToleranceInvalid
from .metric import FiniteMetricSpace, _padded_ids, metric_inheritance_check, sample_circle

DEFAULT_RANK_TOL = 1e-8
_BATCH = 4096


@dataclass
class SampledMap:
    """Values of a map ``X -> F^N``; row i belongs to ``domain.points[i]``."""

    domain: FiniteMetricSpace
    values: np.ndarray
    field: str = "real"

    def __post_init__(self):
        dtype = complex if self.field == "complex" else float
        self.values = np.atleast_2d(np.asarray(self.values, dtype=dtype))
        if self.field not in ("real", "complex"):
            raise ValueError(f"unknown field {self.field!r}")
        if self.values.shape[0] != self.domain.n:
            raise ValueError(f"{self.values.shape[0]} rows for {self.domain.n} points")
        if self.values.shape[1] < 1:
            raise ValueError("target dimension N must be at least 1")

    @property
    def N(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_mapping(cls, domain: FiniteMetricSpace, values: dict, field: str = "real") -> "SampledMap":
        return cls(domain, np.array([values[p] for p in domain.points]), field)


@dataclass
class RegularityVerdict:
    passed: bool
    witness: dict | None = None
    tol: float = DEFAULT_RANK_TOL
    checked: int = 0
    certifying: bool = True

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "witness": self.witness,
            "tol": self.tol,
            "checked": self.checked,
            "certifying": self.certifying,
        }


def _check_tol(tol: float) -> None:
    if not (isinstance(tol, (int, float)) and math.isfinite(tol) and tol > 0):
        raise ToleranceInvalid(f"tolerance must be a positive finite number, got {tol!r}")


def _numerical_ranks(stack: np.ndarray, tol: float, scale: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Numerical rank and smallest relative singular value of each matrix in ``stack``."""
    if stack.shape[1] == 0:
        m = stack.shape[0]
        return np.zeros(m, dtype=int), np.ones(m)
    sv = np.linalg.svd(stack, compute_uv=False)
    top = sv[:, 0] if scale is None else np.maximum(sv[:, 0], scale)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where((top > 0)[:, None], sv / top[:, None], 0.0)
    ranks = (rel > tol).sum(axis=1)
    smallest = rel[:, -1] if stack.shape[1] <= stack.shape[2] else np.zeros(len(stack))
    return ranks, smallest


def _batches(X: FiniteMetricSpace, k: int, r: float, budget: int) -> Iterable[list[tuple[int, ...]]]:
    batch: list[tuple[int, ...]] = []
    count = 0
    for c in iter_configurations(X, k, r):
        count += 1
        if count > budget:
            raise BudgetExceeded(f"more than {budget} admissible {k}-subsets")
        batch.append(c)
        if len(batch) == _BATCH:
            yield batch
            batch = []
    if batch:
        yield batch


def _witness(f: SampledMap, c: tuple[int, ...], rank: int, ratio: float) -> dict:
    return {
        "subset": list(f.domain.labels(c)),
        "separation": separation(c, f.domain),
        "numerical_rank": int(rank),
        "smallest_relative_singular_value": float(ratio),
    }


def is_kr_regular(
    f: SampledMap, k: int, r: float, tol: float = DEFAULT_RANK_TOL, budget: int = DEFAULT_BUDGET
) -> RegularityVerdict:
    """Do all k points pairwise more than 2r apart map to linearly independent vectors?"""
    _check_tol(tol)
    checked = 0
    for batch in _batches(f.domain, k, r, budget):
        stack = f.values[np.array(batch)]
        ranks, smallest = _numerical_ranks(stack, tol)
        checked += len(batch)
        bad = np.flatnonzero(ranks < k)
        if bad.size:
            i = int(bad[0])
            return RegularityVerdict(False, _witness(f, batch[i], ranks[i], smallest[i]), tol, checked)
    return RegularityVerdict(True, None, tol, checked)


def is_affine_kr_regular(
    f: SampledMap, k: int, r: float, tol: float = DEFAULT_RANK_TOL, budget: int = DEFAULT_BUDGET
) -> RegularityVerdict:
    """Affine variant: the k-1 difference vectors of every admissible subset have rank k-1.

    Singular values are taken relative to the larger of the difference matrix
    norm and the largest point norm, so a vanishing difference is never
    rescaled into an independent one.
    """
    _check_tol(tol)
    if f.field != "real":
        raise ValueError("affine regularity is defined for real maps only")
    checked = 0
    for batch in _batches(f.domain, k, r, budget):
        pts = f.values[np.array(batch)]
        diffs = pts[:, 1:, :] - pts[:, :1, :]
        scale = np.linalg.norm(pts, axis=2).max(axis=1)
        ranks, smallest = _numerical_ranks(diffs, tol, scale)
        checked += len(batch)
        bad = np.flatnonzero(ranks < k - 1)
        if bad.size:
            i = int(bad[0])
            return RegularityVerdict(False, _witness(f, batch[i], ranks[i], smallest[i]), tol, checked)
    return RegularityVerdict(True, None, tol, checked)


def probe_kr_regular(
    f: SampledMap, k: int, r: float, samples: int = 1000, seed: int = 0, tol: float = DEFAULT_RANK_TOL
) -> RegularityVerdict:
    """Random-subset probe. Never certifies regularity; a failure is still a real witness."""
    _check_tol(tol)
    rng = np.random.default_rng(seed)
    X = f.domain
    checked = 0
    for _ in range(samples):
        c = tuple(sorted(rng.choice(X.n, size=k, replace=False).tolist()))
        if not X.separated(separation(c, X), r):
            continue
        checked += 1
        ranks, smallest = _numerical_ranks(f.values[np.array([c])], tol)
        if ranks[0] < k:
            return RegularityVerdict(False, _witness(f, c, ranks[0], smallest[0]), tol, checked, False)
    return RegularityVerdict(True, None, tol, checked, False)


@dataclass
class RealizationVerdict:
    passed: bool
    failed_at: int | None = None
    witness: dict | None = None
    certificates: list[dict] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def realization_check(
    f: SampledMap, k: int, r: float, tol: float = DEFAULT_RANK_TOL, budget: int = DEFAULT_BUDGET
) -> RealizationVerdict:
    """Affine (l, r)-regularity for 2 <= l <= k, which makes f a geometric
    realization of the (k-1)-skeleton of the independence complex at every
    radius >= r. Certificates list each simplex with its smallest relative
    singular value."""
    for l in range(2, k + 1):
        v = is_affine_kr_regular(f, l, r, tol, budget)
        if not v.passed:
            return RealizationVerdict(False, l, v.witness)
    certs = []
    for l in range(1, k + 1):
        for batch in _batches(f.domain, l, r, budget):
            pts = f.values[np.array(batch)]
            diffs = pts[:, 1:, :] - pts[:, :1, :]
            scale = np.linalg.norm(pts, axis=2).max(axis=1)
            _, smallest = _numerical_ranks(diffs, tol, scale)
            for c, s in zip(batch, smallest):
                certs.append({"simplex": list(f.domain.labels(c)), "smallest_relative_singular_value": float(s) if l > 1 else 1.0})
    return RealizationVerdict(True, None, None, certs)


def restrict_map(f: SampledMap, subset: Iterable, intrinsic: FiniteMetricSpace | None = None) -> SampledMap:
    """Restriction of f to a subset whose intrinsic metric is inherited from the domain."""
    subset = sorted({str(p) for p in subset})
    verdict = metric_inheritance_check(f.domain, subset, intrinsic)
    if not verdict.inherited:
        raise NotInherited(
            f"intrinsic distance {verdict.intrinsic} of {verdict.witness} exceeds ambient {verdict.ambient}"
        )
    sub = f.domain.subspace(subset)
    rows = [f.domain.index(p) for p in sub.points]
    return SampledMap(sub, f.values[rows], f.field)


def moment_curve(ts: Sequence[float], N: int) -> SampledMap:
    """``t -> (1, t, ..., t^(N-1))`` on points of the real line."""
    ts = np.asarray(ts, dtype=float)
    domain = FiniteMetricSpace(_padded_ids(len(ts)), np.abs(ts[:, None] - ts[None, :]))
    return SampledMap(domain, np.vander(ts, N, increasing=True))


def trigonometric_curve(n: int, circumference: float = 1.0, degree: int = 1, constant: bool = True) -> SampledMap:
    """Evenly sampled circle mapped to ``(1, cos θ, sin θ, ..., cos dθ, sin dθ)``.

    With ``constant=False, degree=1`` this is the planar embedding.
    """
    X = sample_circle(n, circumference)
    theta = 2 * np.pi * np.arange(n) / n
    cols = [np.ones(n)] if constant else []
    for d in range(1, degree + 1):
        cols += [np.cos(d * theta), np.sin(d * theta)]
    return SampledMap(X, np.column_stack(cols))
