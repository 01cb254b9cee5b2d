"""Exact linear algebra over Z/2 (bit-packed) and over the integers (Smith form)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sps


# --- Z/2 -------------------------------------------------------------------
#
# A vector over Z/2 is a Python int used as a bitset (bit i = coordinate i).


def bits_from_indices(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


def indices_from_bits(v: int) -> list[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


class GF2Eliminator:
    """Column echelon form of a Z/2 matrix given by bit-packed columns.

    Keeps, for every reduced column, the set of original columns it is the sum
    of, so solutions of ``A x = b`` come out as bitsets over columns.
    """

    def __init__(self, columns: Sequence[int] = ()):
        self.ncols = 0
        self._pivots: dict[int, tuple[int, int]] = {}
        self.kernel: list[int] = []
        for col in columns:
            self.add(col)

    def add(self, column: int) -> bool:
        """Append a column; returns False if it was dependent on earlier ones."""
        v, combo = self._reduce(column, 1 << self.ncols)
        self.ncols += 1
        if v:
            self._pivots[v.bit_length() - 1] = (v, combo)
            return True
        self.kernel.append(combo)
        return False

    def contains(self, b: int) -> bool:
        return self._reduce(b, 0)[0] == 0

    def _reduce(self, v: int, combo: int) -> tuple[int, int]:
        pivots = self._pivots
        while v:
            hit = pivots.get(v.bit_length() - 1)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def solve(self, b: int) -> int | None:
        """A bitset ``x`` over columns with ``A x = b``, or None."""
        v, combo = self._reduce(b, 0)
        return combo if v == 0 else None


def gf2_rank(columns: Sequence[int]) -> int:
    return GF2Eliminator(columns).rank


# --- integers --------------------------------------------------------------


@dataclass
class SmithDecomposition:
    """``U @ A @ V == S`` with U, V unimodular and S in Smith normal form."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        k = min(self.S.shape) if self.S.size else 0
        return [int(self.S[i, i]) for i in range(k)]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _as_rows(A) -> tuple[int, int, dict[int, dict[int, int]]]:
    if sps.issparse(A):
        C = sps.coo_matrix(A)
        rows: dict[int, dict[int, int]] = {}
        for i, j, v in zip(C.row.tolist(), C.col.tolist(), C.data.tolist()):
            v = int(v)
            if v:
                r = rows.setdefault(i, {})
                r[j] = r.get(j, 0) + v
                if r[j] == 0:
                    del r[j]
        return C.shape[0], C.shape[1], rows
    M = np.asarray(A, dtype=object)
    if M.ndim != 2:
        M = M.reshape(len(M), -1) if M.size else np.zeros((len(M), 0), dtype=object)
    rows = {}
    for i in range(M.shape[0]):
        r = {j: int(M[i, j]) for j in range(M.shape[1]) if M[i, j] != 0}
        if r:
            rows[i] = r
    return M.shape[0], M.shape[1], rows


def _snf_dense(M: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    m = len(M)
    n = len(M[0]) if m else 0
    S = [row[:] for row in M]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        S[a], S[b] = S[b], S[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in S:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def row_axpy(dst, src, q):  # row dst -= q * row src
        S[dst] = [x - q * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def col_axpy(dst, src, q):  # col dst -= q * col src
        for row in S:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = S[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    row_axpy(i, t, S[i][t] // p)
            for j in range(t + 1, n):
                if S[t][j]:
                    col_axpy(j, t, S[t][j] // p)
            rest = [(abs(S[i][t]), i, "r") for i in range(t + 1, m) if S[i][t]]
            rest += [(abs(S[t][j]), j, "c") for j in range(t + 1, n) if S[t][j]]
            if rest:
                _, idx, kind = min(rest)
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            S[t] = [x + y for x, y in zip(S[t], S[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return U, S, V


def smith_normal_form(A) -> SmithDecomposition:
    """Dense Smith decomposition with transforms; intended for small matrices."""
    m, n, rows = _as_rows(A)
    M = [[rows.get(i, {}).get(j, 0) for j in range(n)] for i in range(m)]
    U, S, V = _snf_dense(M)

    def arr(x, shape):
        out = np.zeros(shape, dtype=object)
        for i, row in enumerate(x):
            out[i, : len(row)] = row
        return out

    return SmithDecomposition(arr(U, (m, m)), arr(S, (m, n)), arr(V, (n, n)))


class _UnitElimination:
    """Sparse elimination on ±1 pivots, then a dense Smith form of what is left.

    Boundary and coboundary matrices are mostly eliminated by unit pivots, so
    only a small block ever reaches the dense stage.
    """

    def __init__(self, m: int, n: int, rows: dict[int, dict[int, int]], b: dict[int, int] | None):
        self.m, self.n = m, n
        self.rows = {i: dict(r) for i, r in rows.items() if r}
        self.b = dict(b) if b is not None else None
        self.cols: dict[int, set[int]] = {}
        for i, r in self.rows.items():
            for j in r:
                self.cols.setdefault(j, set()).add(i)
        self.steps: list[tuple[int, int, dict[int, int], int]] = []
        self._run()

    def _pick(self):
        best = None
        for i, r in self.rows.items():
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(self.cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            return best
        return best

    def _run(self):
        rows, cols, b = self.rows, self.cols, self.b
        while True:
            pick = self._pick()
            if pick is None:
                break
            _, p, c = pick
            prow = rows.pop(p)
            v = prow[c]
            bp = b.pop(p, 0) if b is not None else 0
            for j in prow:
                cols[j].discard(p)
            for i in list(cols[c]):
                row = rows[i]
                f = row[c] * v
                for j, a in prow.items():
                    nv = row.get(j, 0) - f * a
                    if nv:
                        if j not in row:
                            cols[j].add(i)
                        row[j] = nv
                    elif j in row:
                        del row[j]
                        cols[j].discard(i)
                if b is not None and bp:
                    nb = b.get(i, 0) - f * bp
                    if nb:
                        b[i] = nb
                    else:
                        b.pop(i, None)
                if not row:
                    del rows[i]
            del cols[c]
            self.steps.append((c, v, prow, bp))

    def remainder(self):
        rr = sorted(self.rows)
        cc = sorted({j for r in self.rows.values() for j in r})
        M = [[self.rows[i].get(j, 0) for j in cc] for i in rr]
        return rr, cc, M


def invariant_factors(A) -> list[int]:
    """Nonzero Smith diagonal entries of an integer matrix, ascending."""
    m, n, rows = _as_rows(A)
    el = _UnitElimination(m, n, rows, None)
    _, _, M = el.remainder()
    factors = [1] * len(el.steps)
    if M:
        _, S, _ = _snf_dense(M)
        factors += [S[i][i] for i in range(min(len(M), len(M[0]))) if S[i][i]]
    return sorted(factors)


def solve_integer(A, b: Sequence[int]) -> list[int] | None:
    """An integer solution of ``A x = b``, or None when there is none."""
    m, n, rows = _as_rows(A)
    bd = {i: int(v) for i, v in enumerate(b) if int(v)}
    el = _UnitElimination(m, n, rows, bd)
    rr, cc, M = el.remainder()
    rset = set(rr)
    if any(i not in rset for i in el.b):
        return None
    x = [0] * n
    if M:
        U, S, V = _snf_dense(M)
        rhs = [el.b.get(i, 0) for i in rr]
        Ub = [sum(u * r for u, r in zip(Urow, rhs)) for Urow in U]
        y = [0] * len(cc)
        for i, val in enumerate(Ub):
            d = S[i][i] if i < len(cc) else 0
            if d == 0:
                if val != 0:
                    return None
            else:
                if val % d:
                    return None
                y[i] = val // d
        for a, j in enumerate(cc):
            x[j] = sum(V[a][t] * y[t] for t in range(len(cc)))
    for c, v, prow, bp in reversed(el.steps):
        acc = bp - sum(a * x[j] for j, a in prow.items() if j != c)
        x[c] = v * acc
    return x
