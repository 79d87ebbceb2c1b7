"""Exact integer linear algebra: Hermite normal form, standardised nullspace
bases and Smith normal form.

All arithmetic is exact; Python integers promote to arbitrary precision
natively, so no overflow handling is needed. No floating point is used
anywhere in this module.

Matrices are kept sparse as lists of row dictionaries ``{col: value}`` with
zero entries absent. The Hermite convention is the row-style one: nonzero rows
first, pivots positive and strictly moving right, entries above a pivot
reduced into ``[0, pivot)``. With this convention the normal form of a matrix
is unique, which is what makes the nullspace output canonical.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd

__all__ = [
    "IntMatrix",
    "HNFResult",
    "SNFResult",
    "hermite_normal_form",
    "nullspace",
    "smith_normal_form",
    "rank",
]


class IntMatrix:
    """Sparse integer matrix with explicit shape."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict() for _ in range(nrows)] if rows is None else rows
        for r in self.rows:
            for j, v in list(r.items()):
                if not (0 <= j < ncols):
                    raise ValueError(f"column index {j} out of range")
                if v == 0:
                    del r[j]

    @classmethod
    def from_dense(cls, dense):
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        rows = []
        for row in dense:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            rows.append({j: int(v) for j, v in enumerate(row) if v})
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows, columns):
        """Build from a list of sparse columns ``{row: value}``."""
        rows = [dict() for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = int(v)
        return cls(nrows, len(columns), rows)

    def to_dense(self):
        return [
            [self.rows[i].get(j, 0) for j in range(self.ncols)]
            for i in range(self.nrows)
        ]

    def copy(self):
        return IntMatrix(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self):
        nnz = sum(map(len, self.rows))
        return f"IntMatrix({self.nrows}x{self.ncols}, {nnz} nonzeros)"


@dataclass(frozen=True)
class HNFResult:
    H: IntMatrix
    U: IntMatrix | None = None  # unimodular with A = U @ H, when requested


@dataclass(frozen=True)
class SNFResult:
    """Invariant factors d_1 | d_2 | ... | d_r, each positive."""

    factors: tuple

    @property
    def rank(self):
        return len(self.factors)

    def torsion(self):
        return tuple(f for f in self.factors if f > 1)


def _row_sub(row, other, q):
    """row -= q * other, in place on sparse dicts."""
    if q == 0:
        return
    for j, v in other.items():
        new = row.get(j, 0) - q * v
        if new:
            row[j] = new
        else:
            row.pop(j, None)


def hermite_normal_form(A, with_transform=False):
    """Row-style Hermite normal form of ``A``.

    Returns an :class:`HNFResult`; when ``with_transform`` is set, ``U`` is the
    unimodular matrix with ``A = U @ H``. The result is the unique normal form,
    independent of the elimination order used here.
    """
    m, n = A.nrows, A.ncols
    work = [dict(r) for r in A.rows]
    # Invariant A = U @ work. The row op work[i] -= q*work[k] pairs with the
    # column op col_k += q*col_i on U; ut holds the columns of U as dicts.
    ut = [{i: 1} for i in range(m)] if with_transform else None

    def op_sub(i, k, q):
        _row_sub(work[i], work[k], q)
        if ut is not None:
            _row_sub(ut[k], ut[i], -q)

    def op_swap(i, k):
        work[i], work[k] = work[k], work[i]
        if ut is not None:
            ut[i], ut[k] = ut[k], ut[i]

    def op_negate(i):
        work[i] = {j: -v for j, v in work[i].items()}
        if ut is not None:
            ut[i] = {j: -v for j, v in ut[i].items()}

    r = 0
    for j in range(n):
        if r == m:
            break
        cand = [i for i in range(r, m) if work[i].get(j)]
        if not cand:
            continue
        while len(cand) > 1:
            cand.sort(key=lambda i: (abs(work[i][j]), i))
            i0 = cand[0]
            a = work[i0][j]
            for i in cand[1:]:
                op_sub(i, i0, work[i][j] // a)
            cand = [i for i in cand if work[i].get(j)]
        i0 = cand[0]
        if i0 != r:
            op_swap(i0, r)
        if work[r][j] < 0:
            op_negate(r)
        p = work[r][j]
        for k in range(r):
            a = work[k].get(j, 0)
            q = a // p  # floor division leaves the entry in [0, p)
            if q:
                op_sub(k, r, q)
        r += 1

    H = IntMatrix(m, n, work)
    U = None
    if with_transform:
        urows = [dict() for _ in range(m)]
        for col, entries in enumerate(ut):
            for i, v in entries.items():
                urows[i][col] = v
        U = IntMatrix(m, m, urows)
    return HNFResult(H, U)


def nullspace(A):
    """Standardised integer basis of the nullspace of ``A``.

    The basis is derived from the Hermite normal form of the transpose of the
    column-reversed matrix stacked over an identity block: reverse the columns
    of ``A``, stack the identity underneath, take the HNF of the transpose,
    read off the trailing rows whose leading block is zero, and reverse their
    coordinates back. The row order of the result is fixed by the uniqueness
    of the normal form and is a hard contract for cycle enumeration.

    Returns a list of length-``ncols`` integer vectors ``b`` with ``A b = 0``.
    """
    m, n = A.nrows, A.ncols
    # Row i of the stacked transpose is (column i of A', e_i), where A' is A
    # with reversed columns, so column i of A' is column n-1-i of A.
    rows = [dict() for _ in range(n)]
    for i, row in enumerate(A.rows):
        for j, v in row.items():
            rows[n - 1 - j][i] = v
    for i in range(n):
        rows[i][m + i] = 1
    H = hermite_normal_form(IntMatrix(n, m + n, rows)).H

    basis = []
    for row in reversed(H.rows):
        if any(j < m for j in row):
            break
        vec = [0] * n
        for j, v in row.items():
            vec[n - 1 - (j - m)] = v
        basis.append(vec)
    basis.reverse()
    return basis


def rank(A):
    """Rank of ``A`` over the rationals, computed exactly."""
    return len(_eliminate(A, want_factors=False))


def smith_normal_form(A):
    """Invariant factors of ``A`` (Smith normal form diagonal).

    Only the factors are computed, not the transforms; this is all that
    integral homology needs.
    """
    diag = [abs(f) for f in _eliminate(A, want_factors=True)]
    # Any diagonalisation has the same invariant factors; repair the chain by
    # the 2x2 lemma diag(a,b) ~ diag(gcd,lcm). Unit pivots make this cheap.
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a, b = diag[i], diag[j]
                if b % a:
                    g = gcd(a, b)
                    diag[i], diag[j] = g, a * b // g
                    changed = True
    return SNFResult(tuple(sorted(diag)))


class _Sparse:
    """Row dicts plus a column index, shared by the elimination paths."""

    __slots__ = ("rows", "cols", "heap")

    def __init__(self, A):
        self.rows = {}
        self.cols = {}
        for i, row in enumerate(A.rows):
            if row:
                self.rows[i] = dict(row)
                for j in row:
                    self.cols.setdefault(j, set()).add(i)
        self.heap = [(len(s), j) for j, s in self.cols.items()]
        heapq.heapify(self.heap)

    def set_entry(self, i, j, v):
        row = self.rows[i]
        if v:
            if j not in row:
                s = self.cols.setdefault(j, set())
                s.add(i)
                heapq.heappush(self.heap, (len(s), j))
            row[j] = v
        elif j in row:
            del row[j]
            s = self.cols[j]
            s.discard(i)
            if s:
                heapq.heappush(self.heap, (len(s), j))
            else:
                del self.cols[j]

    def row_update(self, i, src, q):
        """rows[i] -= q * src."""
        if q == 0:
            return
        for j, v in src.items():
            self.set_entry(i, j, self.rows[i].get(j, 0) - q * v)

    def scaled_row_update(self, i, c, src, q):
        """rows[i] = c*rows[i] - q*src, divided through by the content."""
        row = self.rows[i]
        acc = {j: c * v for j, v in row.items()}
        for j, v in src.items():
            acc[j] = acc.get(j, 0) - q * v
        g = 0
        for v in acc.values():
            g = gcd(g, v)
        for j in set(row) | set(acc):
            v = acc.get(j, 0)
            self.set_entry(i, j, v // g if g > 1 else v)

    def remove_row(self, i):
        for j in self.rows[i]:
            s = self.cols[j]
            s.discard(i)
            if s:
                heapq.heappush(self.heap, (len(s), j))
            else:
                del self.cols[j]
        del self.rows[i]

    def pop_column(self):
        """Cheapest live column, or None when the matrix is empty."""
        while self.heap:
            size, j = heapq.heappop(self.heap)
            s = self.cols.get(j)
            if s is not None and len(s) == size:
                return j
        # heap ran dry of fresh keys; rebuild if columns remain
        if self.cols:
            self.heap = [(len(s), j) for j, s in self.cols.items()]
            heapq.heapify(self.heap)
            return self.pop_column()
        return None


def _eliminate(A, want_factors):
    """Diagonalisation core returning the list of diagonal values.

    Prefers unit pivots chosen Markowitz-style from the cheapest column (no
    entry growth, and no explicit column operations are needed because after
    the column is cleared the pivot row only interacts with itself). Non-unit
    pivots fall back to a local gcd descent in factor mode, or to fraction-free
    updates in rank-only mode.
    """
    sp = _Sparse(A)
    diag = []
    while True:
        j = sp.pop_column()
        if j is None:
            break
        support = sp.cols[j]
        i = min(
            support,
            key=lambda r: (abs(sp.rows[r][j]) != 1, len(sp.rows[r]), abs(sp.rows[r][j]), r),
        )
        p = sp.rows[i][j]
        if abs(p) == 1:
            if p < 0:
                sp.rows[i] = {jj: -v for jj, v in sp.rows[i].items()}
                p = 1
            for i2 in list(support):
                if i2 != i:
                    sp.row_update(i2, sp.rows[i], sp.rows[i2][j])
            diag.append(1)
            sp.remove_row(i)
        elif not want_factors:
            for i2 in list(support):
                if i2 == i:
                    continue
                a = sp.rows[i2][j]
                g = gcd(p, a)
                sp.scaled_row_update(i2, p // g, sp.rows[i], a // g)
            diag.append(p)
            sp.remove_row(i)
        else:
            diag.append(_gcd_descent(sp, i, j))
    return diag


def _gcd_descent(sp, i, j):
    """Clear row i and column j of a non-unit pivot by the classical descent.

    Row operations reduce the column; implicit column operations (which only
    touch the pivot row once the column is clear) reduce the row. Every
    restart strictly shrinks the pivot's absolute value, so this terminates.
    The pivot value is returned and its row removed; full divisibility across
    the remaining matrix is not enforced here, the caller repairs the chain.
    """
    while True:
        p = sp.rows[i][j]
        moved = False
        for i2 in list(sp.cols[j]):
            if i2 == i:
                continue
            a = sp.rows[i2][j]
            sp.row_update(i2, sp.rows[i], a // p)
            if sp.rows[i2].get(j):
                i = i2  # residue is strictly smaller than |p|
                moved = True
                break
        if moved:
            continue
        row = sp.rows[i]
        off = [jj for jj in row if jj != j]
        restart = False
        for jj in off:
            r = row[jj] % p
            sp.set_entry(i, jj, r)
            if r:
                j = jj  # |r| < |p|: descend on the new pivot
                restart = True
                break
        if restart:
            continue
        value = abs(sp.rows[i][j])
        sp.remove_row(i)
        return value
