"""Dimension lower bounds for (k, r)-regular maps from the sign class w1.

For k = 2 the bundle of the covering splits off a trivial line, so its total
Stiefel-Whitney class is ``1 + w1`` and the dual classes are the cup powers
``w1^t``. The complexified line bundle has ``c1 = Bockstein(w1)``, and the
complex dual classes are ``±c1^t``. A nonzero dual class of degree t at any
radius ``r + r'`` forces ``N >= t + k``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .complex import DEFAULT_BUDGET, Snapshot
from .covering import build_config_rips, w1 as sign_cocycle
from .errors import NotK2, OddCoboundary
from .metric import FiniteMetricSpace
from .persistence import Z, Z2, Cochain, coboundary, cup_product, is_coboundary


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CONFPERSIST_THREADS", "1")))
    except ValueError:
        return 1


def sw_power_max_t(snap: Snapshot, w1: Cochain, t_max: int) -> int:
    """Largest t <= t_max with ``w1^t`` not a coboundary (0 if w1 itself is one).

    Powers past the first vanishing one vanish too, so the search stops there.
    """
    w = w1.restrict(snap).to_ring(Z2)
    t = 0
    power = w
    for s in range(1, t_max + 1):
        if s > 1:
            power = cup_product(power, w, snap)
        if s > snap.dimension or is_coboundary(power, snap):
            break
        t = s
    return t


def bockstein_c1(snap: Snapshot, w1: Cochain, k: int = 2) -> tuple[Cochain, bool]:
    """Integral lift ``c1 = delta(w~)/2`` of the sign class and whether it is nonzero in H^2(; Z)."""
    if k != 2:
        raise NotK2(f"the Bockstein first Chern class is only computed for k = 2, got k = {k}")
    lift = Cochain(1, w1.restrict(snap).values, Z, snap.r)
    d = coboundary(lift, snap)
    odd = [s for s, v in d.values.items() if v % 2]
    if odd:
        raise OddCoboundary(f"w1 is not a mod-2 cocycle: odd coboundary on {odd[0]}")
    c1 = Cochain(2, {s: v // 2 for s, v in d.values.items()}, Z, snap.r)
    if c1.is_zero():
        return c1, False
    return c1, not is_coboundary(c1, snap)


def chern_power_max_t(snap: Snapshot, c1: Cochain, t_max: int) -> int:
    """Largest t with ``c1^t`` (degree 2t) not an integral coboundary."""
    t = 0
    power = c1
    for s in range(1, t_max + 1):
        if s > 1:
            power = cup_product(power, c1, snap)
        if 2 * s > snap.dimension or is_coboundary(power, snap):
            break
        t = s
    return t


@dataclass
class ScaleRecord:
    r_prime: float
    radius: float
    simplex_counts: list[int]
    w1_nonzero: bool
    t_real: int | None = None
    t_real_saturated: bool = False
    c1_nonzero: bool | None = None
    t_complex: int | None = None
    t_complex_saturated: bool = False


@dataclass
class ObstructionReport:
    k: int
    r: float
    delta: float
    r_grid: list[float]
    t_max: int
    dim_cap: int
    scales: list[ScaleRecord] = field(default_factory=list)
    N_lb_real: int = 0
    N_lb_complex: int = 0
    dual_class_available: bool = True
    excluded_triangles: int = 0
    discrete_model_t: int = 0
    warnings: list[str] = field(default_factory=list)

    @property
    def t_real(self) -> int:
        return max((s.t_real or 0 for s in self.scales), default=0)

    @property
    def t_complex(self) -> int:
        return max((s.t_complex or 0 for s in self.scales), default=0)

    def as_dict(self) -> dict:
        return asdict(self)


def obstruction_report(
    X: FiniteMetricSpace,
    k: int,
    r: float,
    delta: float,
    r_grid: Sequence[float],
    t_max: int = 2,
    dim_cap: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ObstructionReport:
    """Evaluate the obstruction classes at every radius ``r + r'`` of the grid.

    The bound is ``N >= max_{r'} t(r') + k``; for k >= 3 only w1 is reported
    and both bounds stay at the trivial value k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if any(rp < 0 for rp in r_grid):
        raise ValueError("grid offsets r' must be nonnegative")
    dim_cap = max(2, t_max) if dim_cap is None else dim_cap
    grid = sorted(set(float(x) for x in r_grid))
    report = ObstructionReport(k, r, delta, grid, t_max, dim_cap, N_lb_real=k, N_lb_complex=k)
    report.dual_class_available = k == 2
    if k != 2:
        report.warnings.append("dual Stiefel-Whitney and Chern classes need w2..wk; only w1 is reported")
    if not grid:
        report.warnings.append("empty r_grid: no scale evaluated, bound is the trivial N >= k")
        return report

    model = build_config_rips(X, k, delta, [r + rp for rp in grid], dim_cap, budget)
    report.excluded_triangles = len(model.excluded_triangles)
    if model.excluded_triangles:
        report.warnings.append(
            f"{len(model.excluded_triangles)} triangles dropped by the cocycle check; "
            "classes above degree 1 are computed on the reduced model"
        )
    w = sign_cocycle(model.cocycle)

    def evaluate(rp: float) -> ScaleRecord:
        snap = model.snapshot(r + rp)
        wr = w.restrict(snap)
        rec = ScaleRecord(
            rp, r + rp, [snap.count(q) for q in range(snap.dimension + 1)],
            w1_nonzero=not is_coboundary(wr, snap),
        )
        if k == 2:
            rec.t_real = sw_power_max_t(snap, wr, t_max)
            rec.t_real_saturated = rec.t_real == min(t_max, dim_cap) and rec.t_real > 0
            c1, rec.c1_nonzero = bockstein_c1(snap, wr)
            rec.t_complex = chern_power_max_t(snap, c1, t_max) if rec.c1_nonzero else 0
            rec.t_complex_saturated = rec.t_complex == min(t_max, dim_cap // 2) and rec.t_complex > 0
        return rec

    workers = _threads()
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            report.scales = list(pool.map(evaluate, grid))
    else:
        report.scales = [evaluate(rp) for rp in grid]

    if k == 2:
        report.N_lb_real = report.t_real + k
        report.N_lb_complex = report.t_complex + k
    return report
