"""Persistence over Z/2 for shrinking hard-sphere filtrations, plus fixed-scale
(co)homology over Z/2 and Z, cochains, cup products and coboundary tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sps

from .complex import FilteredComplex, Simplex, Snapshot
from .errors import NonMonotoneFiltration, NotACocycle, ScaleMismatch
from .linalg import GF2Eliminator, bits_from_indices, indices_from_bits, invariant_factors, solve_integer
from .metric import strictly_greater

Z2 = "Z2"
Z = "Z"


@dataclass(frozen=True)
class Interval:
    """A class alive for radii ``death_r <= r < birth_r``.

    Complexes shrink as r grows: the class appears (reading r downwards) just
    below ``birth_r`` and disappears below ``death_r``. Essential classes
    survive to r = 0 and carry ``death_r = 0``.
    """

    dim: int
    birth_r: float
    death_r: float
    essential: bool = False

    def contains(self, r: float, tol: float = 0.0) -> bool:
        if not strictly_greater(self.birth_r, r, tol):
            return False
        return self.essential or not strictly_greater(self.death_r, r, tol)

    def as_dict(self) -> dict:
        d = {"dim": self.dim, "birth_r": self.birth_r, "death_r": self.death_r}
        if self.essential:
            d["essential"] = True
        return d


@dataclass
class Barcode:
    intervals: list[Interval] = field(default_factory=list)
    tol: float = 0.0

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def in_dim(self, q: int) -> list[Interval]:
        return [iv for iv in self.intervals if iv.dim == q]

    def count(self, q: int, r: float) -> int:
        """Number of dimension-q intervals alive at radius r (the Betti number)."""
        return sum(1 for iv in self.intervals if iv.dim == q and iv.contains(r, self.tol))

    def as_records(self) -> list[dict]:
        return [iv.as_dict() for iv in self.intervals]

    def to_array(self) -> np.ndarray:
        """``(m, 3)`` array of ``[dim, birth_r, death_r]`` rows."""
        if not self.intervals:
            return np.zeros((0, 3))
        return np.array([[iv.dim, iv.birth_r, iv.death_r] for iv in self.intervals], dtype=float)


def compute_persistence(K: FilteredComplex, max_dim: int = 1) -> Barcode:
    """Standard column reduction over Z/2, run in increasing ``u = -sep/2``."""
    K.check_monotone()
    order = [s for s in K.filtration_order() if len(s) - 1 <= max_dim + 1]
    pos = {s: i for i, s in enumerate(order)}
    pivot_of: dict[int, int] = {}
    paired: set[int] = set()
    intervals: list[Interval] = []
    for j, s in enumerate(order):
        if len(s) == 1:
            continue
        col = 0
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            fi = pos.get(f)
            if fi is None or fi > j:
                raise NonMonotoneFiltration(f"face {f} enters after {s}")
            col ^= 1 << fi
        while col:
            low = col.bit_length() - 1
            other = pivot_of.get(low)
            if other is None:
                break
            col ^= other
        if col:
            low = col.bit_length() - 1
            pivot_of[low] = col
            paired.add(low)
            paired.add(j)
            birth, death = order[low], s
            b, d = K.value(birth), K.value(death)
            if strictly_greater(b, d, K.tol):
                intervals.append(Interval(len(birth) - 1, b, d))
    for i, s in enumerate(order):
        if i not in paired and len(s) - 1 <= max_dim:
            intervals.append(Interval(len(s) - 1, K.value(s), 0.0, essential=True))
    intervals.sort(key=lambda iv: (iv.dim, -iv.birth_r, -iv.death_r))
    return Barcode(intervals, K.tol)


# --- fixed-scale (co)homology ----------------------------------------------


def boundary_columns_z2(snap: Snapshot, q: int) -> list[int]:
    """Boundary of each q-simplex as a bitset over (q-1)-simplices."""
    if q <= 0 or not snap.count(q):
        return [0] * snap.count(q)
    idx = snap.index[q - 1]
    return [bits_from_indices(idx[s[:i] + s[i + 1:]] for i in range(len(s))) for s in snap.of_dim(q)]


def coboundary_columns_z2(snap: Snapshot, q: int) -> list[int]:
    """Coboundary of each q-simplex as a bitset over (q+1)-simplices."""
    cols = [0] * snap.count(q)
    if q + 1 > snap.dimension:
        return cols
    idx = snap.index[q]
    for t, s in enumerate(snap.of_dim(q + 1)):
        bit = 1 << t
        for i in range(len(s)):
            cols[idx[s[:i] + s[i + 1:]]] ^= bit
    return cols


def coboundary_matrix(snap: Snapshot, q: int, ring: str = Z) -> sps.csr_matrix:
    """Matrix of delta: C^q -> C^{q+1} (rows (q+1)-simplices, columns q-simplices)."""
    rows = snap.of_dim(q + 1)
    n = snap.count(q)
    if q < 0 or not rows or not n:
        return sps.csr_matrix((len(rows), n), dtype=np.int64)
    idx = snap.index[q]
    I, J, V = [], [], []
    for t, s in enumerate(rows):
        for i in range(len(s)):
            I.append(t)
            J.append(idx[s[:i] + s[i + 1:]])
            V.append(1 if ring == Z2 or i % 2 == 0 else -1)
    return sps.csr_matrix((V, (I, J)), shape=(len(rows), n), dtype=np.int64)


@dataclass(frozen=True)
class BettiSummary:
    rank: int
    torsion: tuple[int, ...] = ()
    homology_torsion: tuple[int, ...] = ()


def betti_at(K: FilteredComplex | Snapshot, r: float, q: int, ring: str = Z2) -> BettiSummary:
    """Rank of H_q (= rank of H^q) of the complex at radius r.

    Over Z, ``torsion`` lists the torsion of H^q and ``homology_torsion`` that
    of H_q.
    """
    snap = K.snapshot(r) if isinstance(K, FilteredComplex) else K
    n_q = snap.count(q)
    if ring == Z2:
        rk_q = GF2Eliminator(boundary_columns_z2(snap, q)).rank if q > 0 else 0
        rk_q1 = GF2Eliminator(boundary_columns_z2(snap, q + 1)).rank
        return BettiSummary(n_q - rk_q - rk_q1)
    f_q = invariant_factors(coboundary_matrix(snap, q - 1, Z)) if q > 0 else []
    f_q1 = invariant_factors(coboundary_matrix(snap, q, Z))
    return BettiSummary(
        n_q - len(f_q) - len(f_q1),
        tuple(f for f in f_q if f > 1),
        tuple(f for f in f_q1 if f > 1),
    )


# --- cochains --------------------------------------------------------------


@dataclass
class Cochain:
    """A q-cochain supported on simplices of one snapshot (``scale`` = its radius)."""

    degree: int
    values: dict[Simplex, int]
    ring: str = Z2
    scale: float | None = None

    def __post_init__(self):
        clean = {}
        for s, v in self.values.items():
            v = int(v) % 2 if self.ring == Z2 else int(v)
            if v:
                if len(s) != self.degree + 1:
                    raise ValueError(f"simplex {s} does not have degree {self.degree}")
                clean[tuple(s)] = v
        self.values = clean

    def __getitem__(self, s) -> int:
        return self.values.get(tuple(s), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and self.ring == other.ring and self.values == other.values

    def is_zero(self) -> bool:
        return not self.values

    def __add__(self, other: "Cochain") -> "Cochain":
        _same_kind(self, other)
        vals = dict(self.values)
        for s, v in other.values.items():
            vals[s] = vals.get(s, 0) + v
        return Cochain(self.degree, vals, self.ring, self.scale if self.scale is not None else other.scale)

    def __neg__(self) -> "Cochain":
        return Cochain(self.degree, {s: -v for s, v in self.values.items()}, self.ring, self.scale)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __rmul__(self, c: int) -> "Cochain":
        return Cochain(self.degree, {s: c * v for s, v in self.values.items()}, self.ring, self.scale)

    def restrict(self, snap: Snapshot) -> "Cochain":
        return Cochain(self.degree, {s: v for s, v in self.values.items() if s in snap}, self.ring, snap.r)

    def to_ring(self, ring: str) -> "Cochain":
        return Cochain(self.degree, self.values, ring, self.scale)

    def vector(self, snap: Snapshot) -> list[int]:
        vec = [0] * snap.count(self.degree)
        idx = snap.index[self.degree] if self.degree < len(snap.index) else {}
        for s, v in self.values.items():
            if s not in idx:
                raise ScaleMismatch(f"cochain is supported on {s}, absent at r={snap.r}")
            vec[idx[s]] = v
        return vec

    def bits(self, snap: Snapshot) -> int:
        return bits_from_indices(i for i, v in enumerate(self.vector(snap)) if v % 2)

    @classmethod
    def from_vector(cls, degree: int, vec: Iterable[int], snap: Snapshot, ring: str = Z2) -> "Cochain":
        return cls(degree, dict(zip(snap.of_dim(degree), vec)), ring, snap.r)

    @classmethod
    def from_bits(cls, degree: int, bits: int, snap: Snapshot) -> "Cochain":
        simp = snap.of_dim(degree)
        return cls(degree, {simp[i]: 1 for i in indices_from_bits(bits)}, Z2, snap.r)

    @classmethod
    def zero(cls, degree: int, ring: str = Z2, scale: float | None = None) -> "Cochain":
        return cls(degree, {}, ring, scale)


def _same_kind(a: Cochain, b: Cochain) -> None:
    if a.degree != b.degree or a.ring != b.ring:
        raise ValueError("cochains must share degree and coefficient ring")
    if a.scale is not None and b.scale is not None and a.scale != b.scale:
        raise ScaleMismatch(f"scales {a.scale} and {b.scale} differ")


def _check_scale(z: Cochain, snap: Snapshot) -> None:
    if z.scale is not None and snap.r is not None and z.scale != snap.r:
        raise ScaleMismatch(f"cochain lives at r={z.scale}, complex at r={snap.r}")
    for s in z.values:
        if s not in snap:
            raise ScaleMismatch(f"cochain is supported on {s}, absent at r={snap.r}")


def coboundary(z: Cochain, snap: Snapshot) -> Cochain:
    _check_scale(z, snap)
    out: dict[Simplex, int] = {}
    if not z.values:
        return Cochain(z.degree + 1, out, z.ring, snap.r)
    for s in snap.of_dim(z.degree + 1):
        acc = 0
        for i in range(len(s)):
            v = z.values.get(s[:i] + s[i + 1:])
            if v:
                acc += v if (z.ring == Z2 or i % 2 == 0) else -v
        if acc:
            out[s] = acc
    return Cochain(z.degree + 1, out, z.ring, snap.r)


def is_cocycle(z: Cochain, snap: Snapshot) -> bool:
    return coboundary(z, snap).is_zero()


def cup_product(a: Cochain, b: Cochain, snap: Snapshot) -> Cochain:
    """Front-face/back-face product on simplices with canonically ordered vertices."""
    if a.ring != b.ring:
        raise ValueError("cup product needs a common coefficient ring")
    if a.scale is not None and b.scale is not None and a.scale != b.scale:
        raise ScaleMismatch(f"scales {a.scale} and {b.scale} differ")
    _check_scale(a, snap)
    _check_scale(b, snap)
    p, q = a.degree, b.degree
    out: dict[Simplex, int] = {}
    if a.values and b.values:
        for s in snap.of_dim(p + q):
            x = a.values.get(s[: p + 1])
            if x:
                y = b.values.get(s[p:])
                if y:
                    out[s] = x * y
    return Cochain(p + q, out, a.ring, snap.r)


def cup_power(a: Cochain, t: int, snap: Snapshot) -> Cochain:
    if t < 1:
        raise ValueError("power must be at least 1")
    out = a.restrict(snap) if a.scale != snap.r else a
    base = out
    for _ in range(t - 1):
        out = cup_product(out, base, snap)
    return out


@dataclass
class CoboundaryTest:
    """Outcome of ``is_coboundary``; truthy when a primitive exists."""

    solvable: bool
    primitive: Cochain | None = None

    def __bool__(self) -> bool:
        return self.solvable


def is_coboundary(z: Cochain, snap: Snapshot) -> CoboundaryTest:
    """Solve ``delta x = z`` over the cochain's ring; ``x`` is the certificate."""
    if not is_cocycle(z, snap):
        raise NotACocycle(f"degree-{z.degree} cochain has nonzero coboundary")
    q = z.degree
    if z.is_zero():
        return CoboundaryTest(True, Cochain.zero(max(q - 1, 0), z.ring, snap.r) if q > 0 else None)
    if q == 0:
        return CoboundaryTest(False)
    if z.ring == Z2:
        el = GF2Eliminator(coboundary_columns_z2(snap, q - 1))
        x = el.solve(z.bits(snap))
        if x is None:
            return CoboundaryTest(False)
        return CoboundaryTest(True, Cochain.from_bits(q - 1, x, snap))
    x = solve_integer(coboundary_matrix(snap, q - 1, Z), z.vector(snap))
    if x is None:
        return CoboundaryTest(False)
    return CoboundaryTest(True, Cochain.from_vector(q - 1, x, snap, Z))


def cohomology_basis_z2(snap: Snapshot, q: int) -> list[Cochain]:
    """Cocycles whose classes form a basis of H^q(; Z/2) at this scale."""
    cocycles = GF2Eliminator(coboundary_columns_z2(snap, q)).kernel
    image = GF2Eliminator(coboundary_columns_z2(snap, q - 1) if q > 0 else [])
    basis = []
    for z in cocycles:
        if image.add(z):
            basis.append(Cochain.from_bits(q, z, snap))
    return basis
