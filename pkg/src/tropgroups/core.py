"""Exact max-plus arithmetic on scalars, vectors and matrices.

Scalars are :class:`fractions.Fraction`.  The bottom element of the extended
semiring (``-inf``) is represented by ``None``; it is the identity for
``oplus`` and annihilates ``otimes``.  Vectors are tuples of scalars and
matrices are :class:`TropMatrix` instances.  Everything is immutable and
comparisons are exact.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionError

NEG_INF = None

Scalar = Fraction
ExtScalar = Optional[Fraction]
Vector = tuple


def to_scalar(value, allow_inf=False):
    """Convert ``value`` to an exact scalar.

    Accepts integers, fractions, decimals and strings such as ``"3"``,
    ``"-1/2"`` or ``"0.25"``.  Floats are refused since they would smuggle
    binary rounding into exact computations.  ``None`` and ``"-inf"`` give
    the bottom element when ``allow_inf`` is set.
    """
    if value is None or (isinstance(value, str) and value.strip().lower() == "-inf"):
        if allow_inf:
            return NEG_INF
        raise ValueError("-inf is not allowed in a finite matrix")
    if isinstance(value, bool):
        raise TypeError("booleans are not tropical scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"non-finite decimal {value}")
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                return Fraction(text)
            return Fraction(Decimal(text))
        except (ValueError, ArithmeticError):
            raise ValueError(f"cannot parse {value!r} as an exact rational") from None
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string, int or Fraction")
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


def oplus(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a >= b else b


def otimes(a, b):
    if a is None or b is None:
        return None
    return a + b


def vector(values: Iterable, allow_inf=False) -> tuple:
    return tuple(to_scalar(v, allow_inf=allow_inf) for v in values)


def fmt(x) -> str:
    return "-inf" if x is None else str(x)


class TropMatrix:
    """Dense row-major matrix over the (extended) tropical semiring.

    A matrix whose entries are all finite is an element of M(R, max, +);
    otherwise it is an extended matrix (used for monomial units and the
    selector matrices of the full-rank reduction).
    """

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], allow_inf=None):
        data = tuple(tuple(r) for r in rows)
        if not data or not data[0]:
            raise DimensionError("matrix must have at least one row and one column")
        width = len(data[0])
        for i, r in enumerate(data):
            if len(r) != width:
                raise DimensionError(
                    f"row {i + 1} has {len(r)} entries, expected {width}"
                )
        ext = True if allow_inf is None else allow_inf
        self._rows = tuple(tuple(to_scalar(v, allow_inf=ext) for v in r) for r in data)
        self._hash = None

    @classmethod
    def _raw(cls, rows):
        m = cls.__new__(cls)
        m._rows = rows
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "TropMatrix":
        return cls._raw(
            tuple(
                tuple(Fraction(0) if i == j else None for j in range(n)) for i in range(n)
            )
        )

    @classmethod
    def full(cls, rows: int, cols: int, value=0) -> "TropMatrix":
        v = to_scalar(value, allow_inf=True)
        return cls._raw(tuple(tuple(v for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "TropMatrix":
        return cls(zip(*columns))

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple:
        return len(self._rows), len(self._rows[0])

    @property
    def n_rows(self) -> int:
        return len(self._rows)

    @property
    def n_cols(self) -> int:
        return len(self._rows[0])

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    @property
    def is_finite(self) -> bool:
        return all(v is not None for r in self._rows for v in r)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.n_cols)]

    def diagonal(self) -> tuple:
        return tuple(self._rows[i][i] for i in range(min(self.shape)))

    def transpose(self) -> "TropMatrix":
        return TropMatrix._raw(tuple(zip(*self._rows)))

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "TropMatrix":
        return TropMatrix._raw(tuple(tuple(self._rows[i][j] for j in cols) for i in rows))

    def scale(self, c) -> "TropMatrix":
        c = to_scalar(c)
        return TropMatrix._raw(
            tuple(tuple(None if v is None else v + c for v in r) for r in self._rows)
        )

    def apply(self, x: Sequence) -> tuple:
        return mat_vec(self, x)

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    def __matmul__(self, other):
        if isinstance(other, TropMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __or__(self, other):
        if isinstance(other, TropMatrix):
            return mat_add(self, other)
        return NotImplemented

    def __le__(self, other):
        if not isinstance(other, TropMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionError(f"cannot compare {self.shape} with {other.shape}")
        return all(
            a is None or (b is not None and a <= b)
            for ra, rb in zip(self._rows, other._rows)
            for a, b in zip(ra, rb)
        )

    def __eq__(self, other):
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(fmt(v) for v in r) for r in self._rows)
        return f"TropMatrix([{body}])"

    def __str__(self):
        cells = [[fmt(v) for v in r] for r in self._rows]
        width = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


def as_matrix(A) -> TropMatrix:
    return A if isinstance(A, TropMatrix) else TropMatrix(A)


def require_square(A: TropMatrix, what="matrix") -> int:
    if not A.is_square:
        raise DimensionError(f"{what} must be square, got {A.n_rows}x{A.n_cols}")
    return A.n_rows


def require_finite(A: TropMatrix, what="matrix") -> None:
    for i, r in enumerate(A.rows):
        for j, v in enumerate(r):
            if v is None:
                raise DimensionError(f"{what} has -inf at ({i + 1},{j + 1})")


def mat_add(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """Entrywise maximum."""
    if A.shape != B.shape:
        raise DimensionError(f"cannot add {A.shape} and {B.shape} matrices")
    return TropMatrix._raw(
        tuple(tuple(oplus(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A.rows, B.rows))
    )


def mat_mul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """Max-plus product: ``(A B)[i][j] = max_k A[i][k] + B[k][j]``."""
    if A.n_cols != B.n_rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    bcols = list(zip(*B.rows))
    out = []
    for ra in A.rows:
        row = []
        for cb in bcols:
            best = None
            for a, b in zip(ra, cb):
                if a is None or b is None:
                    continue
                s = a + b
                if best is None or s > best:
                    best = s
            row.append(best)
        out.append(tuple(row))
    return TropMatrix._raw(tuple(out))


def mat_vec(A: TropMatrix, x: Sequence) -> tuple:
    if A.n_cols != len(x):
        raise DimensionError(f"cannot apply {A.shape} matrix to vector of length {len(x)}")
    out = []
    for ra in A.rows:
        best = None
        for a, b in zip(ra, x):
            if a is None or b is None:
                continue
            s = a + b
            if best is None or s > best:
                best = s
        out.append(best)
    return tuple(out)


def mat_pow(A: TropMatrix, k: int) -> TropMatrix:
    n = require_square(A)
    if k < 0:
        raise ValueError("negative powers are not defined")
    result = TropMatrix.identity(n)
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def vec_scale(c, x: Sequence) -> tuple:
    return tuple(None if v is None else v + c for v in x)


def vec_add(x: Sequence, y: Sequence) -> tuple:
    if len(x) != len(y):
        raise DimensionError("vector lengths differ")
    return tuple(oplus(a, b) for a, b in zip(x, y))


def vec_leq(x: Sequence, y: Sequence) -> bool:
    return all(a <= b for a, b in zip(x, y))


def scalar_product(x: Sequence, y: Sequence) -> Fraction:
    """``<x|y>``: the largest scalar ``c`` with ``c + x <= y`` entrywise."""
    if len(x) != len(y):
        raise DimensionError(f"vector lengths differ: {len(x)} vs {len(y)}")
    if not x:
        raise DimensionError("empty vectors")
    return min(b - a for a, b in zip(x, y))


def residual_solve(A: TropMatrix, y: Sequence) -> tuple:
    """Principal solution of ``A x = y``.

    Returns the greatest ``x`` with ``A x <= y``; componentwise
    ``x[j] = min_i y[i] - A[i][j]``.
    """
    if A.n_rows != len(y):
        raise DimensionError(f"matrix has {A.n_rows} rows but vector has length {len(y)}")
    require_finite(A)
    return tuple(min(yi - r[j] for r, yi in zip(A.rows, y)) for j in range(A.n_cols))


def in_span(A: TropMatrix, y: Sequence):
    """Decide ``y in C(A)``.

    Returns ``(True, x)`` with ``A x = y`` when ``y`` is in the column
    space, else ``(False, None)``.
    """
    x = residual_solve(A, y)
    if mat_vec(A, x) == tuple(y):
        return True, x
    return False, None


def _integer_copies(*mats):
    """Scale finite matrices by one common denominator, giving nested int lists.

    Multiplying by a positive constant commutes with max and + and keeps
    order, so max-plus membership questions have the same answers.
    """
    d = 1
    for M in mats:
        require_finite(M)
        for r in M.rows:
            for v in r:
                d = lcm(d, v.denominator)
    return [[[v.numerator * (d // v.denominator) for v in r] for r in M.rows] for M in mats]


def span_subset(A: TropMatrix, B: TropMatrix) -> bool:
    """True iff every column of ``A`` lies in the column space of ``B``."""
    if A.n_rows != B.n_rows:
        raise DimensionError(f"row counts differ: {A.n_rows} vs {B.n_rows}")
    a, b = _integer_copies(A, B)
    rows = range(B.n_rows)
    cols = range(B.n_cols)
    for k in range(A.n_cols):
        y = [a[i][k] for i in rows]
        x = [min(y[i] - b[i][j] for i in rows) for j in cols]
        if any(max(b[i][j] + x[j] for j in cols) != y[i] for i in rows):
            return False
    return True


def span_equal(A: TropMatrix, B: TropMatrix) -> bool:
    return span_subset(A, B) and span_subset(B, A)


GREEN_RELATIONS = ("leqR", "leqL", "R", "L", "H")


def green_relation(A: TropMatrix, B: TropMatrix, rel: str) -> bool:
    """Decide a Green's relation or preorder between square matrices.

    ``leqR``/``R`` compare column spaces, ``leqL``/``L`` row spaces, and
    ``H`` requires both to coincide.
    """
    if A.shape != B.shape or not A.is_square:
        raise DimensionError(f"need two square matrices of equal size, got {A.shape}, {B.shape}")
    if rel == "leqR":
        return span_subset(A, B)
    if rel == "leqL":
        return span_subset(A.T, B.T)
    if rel == "R":
        return span_equal(A, B)
    if rel == "L":
        return span_equal(A.T, B.T)
    if rel == "H":
        return span_equal(A, B) and span_equal(A.T, B.T)
    raise ValueError(f"unknown relation {rel!r}; expected one of {GREEN_RELATIONS}")


def is_multiple(x: Sequence, y: Sequence) -> Optional[Fraction]:
    """Return ``c`` with ``y = c + x`` if it exists, else ``None``."""
    if len(x) != len(y):
        raise DimensionError(f"vector lengths differ: {len(x)} vs {len(y)}")
    diffs = {b - a for a, b in zip(x, y)}
    if len(diffs) == 1:
        return diffs.pop()
    return None


def extremal_columns(A: TropMatrix) -> list:
    """Indices (0-based, ascending) of a minimal generating set of columns.

    Proportional columns are collapsed onto the smallest index first; a
    remaining column is kept iff it is not in the span of the others.
    """
    cols = A.columns()
    distinct = []
    for j, c in enumerate(cols):
        if not any(is_multiple(cols[k], c) is not None for k in distinct):
            distinct.append(j)
    if len(distinct) == 1:
        return distinct
    kept = []
    for j in distinct:
        others = TropMatrix._raw(tuple(zip(*(cols[k] for k in distinct if k != j))))
        if not in_span(others, cols[j])[0]:
            kept.append(j)
    return kept


def projectivize(x: Sequence) -> tuple:
    """Map ``x`` to ``(x1 - xn, ..., x_{n-1} - xn)``."""
    if len(x) < 2:
        raise DimensionError("projectivization needs a vector of length >= 2")
    last = x[-1]
    return tuple(v - last for v in x[:-1])


def lift(p: Sequence) -> tuple:
    """Inverse of :func:`projectivize` with last coordinate 0."""
    return tuple(to_scalar(v) for v in p) + (Fraction(0),)
