"""Exact dense linear algebra over GF(q): the decoding engine.

Matrices wrap a numpy array of element codes plus the owning field, so
cross-field mixing is caught instead of silently producing garbage.
Elimination uses first-nonzero pivoting (there is no magnitude over GF(q))
with a deterministic column order, so transcripts are reproducible.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatch, FieldMismatch, Inconsistent, RankDeficient


class OpCounter:
    """Accumulates field-multiplication counts across calls."""

    __slots__ = ("mults",)

    def __init__(self):
        self.mults = 0

    def tick(self, n):
        self.mults += int(n)


class Matrix:
    """Dense matrix over a Field; entries are integer element codes."""

    __slots__ = ("field", "codes")

    def __init__(self, field, codes, validate=True):
        arr = np.array(codes, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D array, got shape {arr.shape}")
        if validate:
            field.check_codes(arr)
        self.field = field
        self.codes = arr

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=np.int64), validate=False)

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64), validate=False)

    @classmethod
    def random(cls, field, rows, cols, rng):
        return cls(field, rng.integers(0, field.q, size=(rows, cols)), validate=False)

    @property
    def shape(self):
        return self.codes.shape

    @property
    def rows(self):
        return self.codes.shape[0]

    @property
    def cols(self):
        return self.codes.shape[1]

    def transpose(self):
        return Matrix(self.field, self.codes.T.copy(), validate=False)

    def __matmul__(self, other):
        return matmul(self, other)[0]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and np.array_equal(self.codes, other.codes))

    def __repr__(self):
        return f"Matrix({self.field!r}, shape={self.shape})"

    def to_lists(self):
        return [[int(v) for v in row] for row in self.codes]


def _require_same_field(a, b):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


def matmul(a, b, ops=None):
    """Exact product plus the schoolbook field-multiplication count rows*inner*cols.

    Works digit-wise: the product over GF(p^e) decomposes into e^2 integer
    matrix products over GF(p) followed by a linear fold of powers x^k, k >= e.
    """
    _require_same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    f = a.field
    p, e = f.p, f.e
    r, t = a.rows, b.cols
    da = f._digits[a.codes]  # (r, s, e)
    db = f._digits[b.codes]  # (s, t, e)
    conv = np.zeros((2 * e - 1, r, t), dtype=np.int64)
    for i in range(e):
        for j in range(e):
            conv[i + j] += da[:, :, i] @ db[:, :, j]
        conv %= p
    dig = conv[:e].copy()
    for k in range(e, 2 * e - 1):
        row = f._reduction[k - e]
        for i in range(e):
            if row[i]:
                dig[i] = (dig[i] + conv[k] * row[i]) % p
    out = np.tensordot(f._weights, dig, axes=(0, 0))
    count = r * a.cols * t
    if ops is not None:
        ops.tick(count)
    return Matrix(f, out, validate=False), count


def _row_reduce(field, codes, pivot_limit=None, ops=None):
    """Gauss-Jordan over GF(q); returns (reduced copy, pivot column list).

    Pivots are searched only in the first pivot_limit columns, which lets the
    caller reduce an augmented block [A | B] with pivots confined to A.
    """
    a = codes.copy()
    rows, cols = a.shape
    limit = cols if pivot_limit is None else pivot_limit
    pivots = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        pv = int(a[r, c])
        if pv != 1:
            a[r] = field.mul(a[r], field.inv(pv))
            if ops is not None:
                ops.tick(cols)
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] = field.sub(a[others], field.mul(a[others, c][:, None], a[r][None, :]))
            if ops is not None:
                ops.tick(int(others.size) * cols)
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, ops=None):
    """Row rank via Gaussian elimination."""
    return len(_row_reduce(m.field, m.codes, ops=ops)[1])


def solve_exact(m, b, ops=None):
    """Unique X with m @ X == b for an overdetermined full-column-rank system.

    m is R x k with R >= k and rank k; b is R x w. Rows beyond the pivots are
    checked exactly, so a corrupted right-hand side raises Inconsistent
    instead of silently smearing into the solution.
    """
    _require_same_field(m, b)
    if m.rows != b.rows:
        raise DimensionMismatch(f"lhs has {m.rows} rows, rhs has {b.rows}")
    k = m.cols
    red, pivots = _row_reduce(m.field, np.hstack([m.codes, b.codes]), pivot_limit=k, ops=ops)
    if len(pivots) < k:
        raise RankDeficient(f"rank {len(pivots)} < {k} unknowns")
    tail = red[k:, k:]
    if tail.size and np.any(tail):
        raise Inconsistent("overdetermined system has no exact solution")
    return Matrix(m.field, red[:k, k:].copy(), validate=False)


def right_inverse(m, ops=None):
    """R x k matrix N with m @ N == identity(k), for k x R m of full row rank."""
    k, r = m.shape
    aug = np.hstack([m.codes, np.eye(k, dtype=np.int64)])
    red, pivots = _row_reduce(m.field, aug, pivot_limit=r, ops=ops)
    if len(pivots) < k:
        raise RankDeficient(f"row rank {len(pivots)} < {k}")
    out = np.zeros((r, k), dtype=np.int64)
    for a, c in enumerate(pivots):
        out[c] = red[a, r:]
    return Matrix(m.field, out, validate=False)
