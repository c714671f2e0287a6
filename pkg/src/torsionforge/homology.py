"""Exact integral homology through Smith normal form.

The workhorse is :func:`smith_normal_form`.  Without witnesses it runs a
sparse elimination on unit pivots, chosen to keep fill low, and hands the
small dense core that survives to FLINT.  Boundary matrices of the complexes
built in this package are almost entirely unit-pivotable, so the core is
tiny: for the 41-vertex sum complex an 820 x 780 matrix leaves an 11-column
core.  With witnesses a dense pure-Python algorithm tracks both transforms.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Sequence

from .complex import IntegerMatrix, SimplicialComplex, boundary_matrix

try:
    import flint
except ImportError:  # pragma: no cover - declared dependency
    flint = None


@dataclass(frozen=True)
class GroupStructure:
    """Z^free_rank + Z/d1 + ... + Z/dt with d1 | d2 | ... | dt, all di >= 2."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(x) for x in self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        fs = self.invariant_factors
        if any(x < 2 for x in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"invariant factors {fs} do not form a divisibility chain")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int], free_rank: int = 0) -> "GroupStructure":
        """Canonicalize a direct sum of cyclic groups; an order of 0 means Z."""
        finite = []
        for q in orders:
            q = int(q)
            if q == 0:
                free_rank += 1
            elif q < 2:
                raise ValueError(f"cyclic order {q} is not allowed")
            else:
                finite.append(q)
        return cls(free_rank, tuple(invariant_factors_from(finite)))

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def torsion(self) -> "GroupStructure":
        return GroupStructure(0, self.invariant_factors)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{q}" for q in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank,
                "invariant_factors": [str(q) for q in self.invariant_factors]}


def invariant_factors_from(values: Iterable[int]) -> list[int]:
    """Turn any list of diagonal entries into a divisibility chain.

    Repeatedly replaces a pair (a, b) by (gcd, lcm), which preserves the
    isomorphism type of the diagonal cokernel.  Zeros and ones are dropped.
    """
    a = sorted(abs(int(v)) for v in values if v not in (0, 1, -1))
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            x, y = a[i], a[j]
            if y % x:
                g = gcd(x, y)
                a[i], a[j] = g, x // g * y
    return sorted(v for v in a if v != 1)


def groups_isomorphic(g1, g2) -> bool:
    """Compare two groups given canonically or as lists of cyclic orders."""
    return _as_group(g1) == _as_group(g2)


def _as_group(g) -> GroupStructure:
    if isinstance(g, GroupStructure):
        return GroupStructure.from_cyclic(g.invariant_factors, g.free_rank)
    return GroupStructure.from_cyclic(g)


@dataclass(frozen=True)
class SNFResult:
    diag: tuple[int, ...]
    rank: int
    U: IntegerMatrix | None = None
    V: IntegerMatrix | None = None

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(x for x in self.diag if x > 1)


def smith_normal_form(M: IntegerMatrix, want_witnesses: bool = False) -> SNFResult:
    """Smith normal form of M.

    ``diag`` has length min(rows, cols): the nonzero invariant factors in
    divisibility order, then zeros.  With ``want_witnesses`` the result also
    carries unimodular U, V with U @ M @ V equal to the diagonal matrix.
    """
    k = min(M.rows, M.cols)
    if want_witnesses:
        A = M.to_dense()
        D, U, V = _dense_snf(A, M.rows, M.cols)
        diag = tuple(D[i][i] for i in range(k))
        rank = sum(1 for x in diag if x)
        return SNFResult(diag, rank, IntegerMatrix.from_dense(U, M.rows),
                         IntegerMatrix.from_dense(V, M.cols))
    units, core = _eliminate_units(M)
    nonzero = [1] * units + _core_diagonal(core)
    factors = invariant_factors_from(nonzero)
    rank = len(nonzero)
    ones = rank - len(factors)
    diag = tuple([1] * ones + factors + [0] * (k - rank))
    return SNFResult(diag, rank)


def _eliminate_units(M: IntegerMatrix) -> tuple[int, list[dict[int, int]]]:
    """Pivot on +-1 entries until none remain.

    Pivots are taken column-count first, then row count (a Markowitz-style
    heuristic).  Each pivot contributes an invariant factor of 1; the rest of
    the matrix is returned as a list of sparse rows.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for (r, c), v in M.entries.items():
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, {})[r] = v

    heap = [(len(col), c) for c, col in cols.items()]
    heapq.heapify(heap)
    stale: set[int] = set()
    units = 0
    while heap:
        n, c = heapq.heappop(heap)
        col = cols.get(c)
        if col is None or len(col) != n:
            if col:
                heapq.heappush(heap, (len(col), c))
            continue
        best_r, best_len = None, None
        for r, v in col.items():
            if v == 1 or v == -1:
                ln = len(rows[r])
                if best_len is None or ln < best_len:
                    best_r, best_len = r, ln
                    if ln == 1:
                        break
        if best_r is None:
            stale.add(c)
            continue
        prow = rows.pop(best_r)
        pv = prow[c]
        del cols[c]
        touched = set()
        for r, a in col.items():
            if r == best_r:
                continue
            row = rows[r]
            f = a * pv
            del row[c]
            for cc, b in prow.items():
                if cc == c:
                    continue
                target = cols[cc]
                nv = row.get(cc, 0) - f * b
                if nv:
                    row[cc] = nv
                    target[r] = nv
                else:
                    row.pop(cc, None)
                    target.pop(r, None)
            if not row:
                del rows[r]
        for cc in prow:
            if cc == c:
                continue
            target = cols[cc]
            target.pop(best_r, None)
            touched.add(cc)
        for cc in touched:
            target = cols[cc]
            if not target:
                del cols[cc]
                stale.discard(cc)
            else:
                stale.discard(cc)
                heapq.heappush(heap, (len(target), cc))
        units += 1
    return units, [row for row in rows.values() if row]


def _core_diagonal(core: list[dict[int, int]]) -> list[int]:
    if not core:
        return []
    colset = sorted({c for row in core for c in row})
    ci = {c: j for j, c in enumerate(colset)}
    dense = [[0] * len(colset) for _ in core]
    for i, row in enumerate(core):
        for c, v in row.items():
            dense[i][ci[c]] = v
    if flint is not None:
        S = flint.fmpz_mat(dense).snf()
        return [int(S[i, i]) for i in range(min(S.nrows(), S.ncols())) if S[i, i] != 0]
    D, _, _ = _dense_snf(dense, len(dense), len(colset), track=False)  # pragma: no cover
    return [D[i][i] for i in range(min(len(dense), len(colset))) if D[i][i]]  # pragma: no cover


def _dense_snf(A: list[list[int]], m: int, n: int, track: bool = True):
    """Classic elimination to Smith form on a dense copy of A.

    Returns (D, U, V) with U A V = D when ``track`` is set, otherwise U and V
    are None.  Pivots are the smallest nonzero entry of the trailing block.
    """
    A = [list(row) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        rs, rd = A[src], A[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        if track:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]

    def add_col(dst, src, q):
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
                        break
            if not done:
                continue
            p = A[t][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
                        break
            if not done:
                continue
            p = A[t][t]
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if track:
                U[t] = [-x for x in U[t]]
    return A, U, V


def _snf_cache(X: SimplicialComplex) -> dict:
    return X.__dict__.setdefault("_snf_cache", {})


def boundary_snf(X: SimplicialComplex, i: int) -> SNFResult:
    """Cached SNF (no witnesses) of the i-th boundary matrix of X."""
    cache = _snf_cache(X)
    if i not in cache:
        cache[i] = smith_normal_form(boundary_matrix(X, i))
    return cache[i]


def _boundary_rank(X: SimplicialComplex, i: int) -> int:
    if i < 1 or i > X.dimension:
        return 0
    return boundary_snf(X, i).rank


def homology(X: SimplicialComplex, i: int, reduced: bool = False) -> GroupStructure:
    """H_i(X; Z).  Degrees above the dimension give the trivial group."""
    if i < 0:
        raise ValueError(f"homology degree {i} is negative")
    if i > X.dimension:
        return GroupStructure()
    free = len(X.faces[i]) - _boundary_rank(X, i) - _boundary_rank(X, i + 1)
    if reduced and i == 0 and X.num_vertices:
        free -= 1
    factors = boundary_snf(X, i + 1).invariant_factors if i + 1 <= X.dimension else ()
    return GroupStructure(free, factors)


def torsion(X: SimplicialComplex, i: int) -> GroupStructure:
    if i < 0:
        raise ValueError(f"homology degree {i} is negative")
    if i + 1 > X.dimension:
        return GroupStructure()
    return GroupStructure(0, boundary_snf(X, i + 1).invariant_factors)


def betti_numbers(X: SimplicialComplex) -> list[int]:
    return [homology(X, i).free_rank for i in range(X.dimension + 1)]


def solve_integer(M: IntegerMatrix, b: Sequence[int]) -> list[int] | None:
    """An integer solution of M z = b, or None when there is none."""
    if len(b) != M.rows:
        raise ValueError("right-hand side has the wrong length")
    res = smith_normal_form(M, want_witnesses=True)
    U, V = res.U.to_dense(), res.V.to_dense()
    ub = [sum(u * x for u, x in zip(row, b)) for row in U]
    y = [0] * M.cols
    for i, x in enumerate(ub):
        d = res.diag[i] if i < len(res.diag) else 0
        if d == 0:
            if x:
                return None
        elif x % d:
            return None
        else:
            y[i] = x // d
    return [sum(v * yy for v, yy in zip(row, y)) for row in V]
