"""Idempotent matrices: rank, zero-diagonal normalization, full-rank reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    TropMatrix,
    green_relation,
    mat_mul,
    require_finite,
    require_square,
    span_equal,
)
from .errors import (
    DiagonalNotZero,
    DimensionError,
    NotFullRank,
    NotIdempotent,
    NotInHClass,
)
from .spectral import CriticalStructure, critical_structure

ZERO = Fraction(0)


@dataclass(frozen=True)
class IdempotentProfile:
    matrix: TropMatrix
    critical: CriticalStructure
    rank: int
    zero_diagonal: bool


@dataclass(frozen=True)
class FullRankReduction:
    """Data of the reduction of an idempotent ``E`` to a full-rank ``F``.

    ``M`` is the k x n row selector, ``N`` (n x k) and ``P`` (k x n) lift
    k x k matrices back to n x n via ``N G P``.
    """

    E: TropMatrix
    representatives: tuple
    F: TropMatrix
    M: TropMatrix
    N: TropMatrix
    P: TropMatrix

    @property
    def rank(self) -> int:
        return len(self.representatives)


def first_non_idempotent_entry(E: TropMatrix):
    """First index where ``E E`` differs from ``E``, or None.

    The diagonal is scanned before the off-diagonal entries (each in
    row-major order).
    """
    E2 = mat_mul(E, E)
    n = E.n_rows
    order = [(i, i) for i in range(n)]
    order += [(i, j) for i in range(n) for j in range(n) if i != j]
    for i, j in order:
        if E2[i, j] != E[i, j]:
            return i, j
    return None


def is_idempotent(E: TropMatrix) -> bool:
    require_square(E)
    return mat_mul(E, E) == E


def require_idempotent(E: TropMatrix) -> None:
    require_square(E)
    require_finite(E)
    bad = first_non_idempotent_entry(E)
    if bad is not None:
        i, j = bad
        raise NotIdempotent(f"not idempotent at ({i + 1},{j + 1})", index=bad)


def has_zero_diagonal(E: TropMatrix) -> bool:
    return all(d == 0 for d in E.diagonal())


def idempotent_profile(E: TropMatrix) -> IdempotentProfile:
    require_idempotent(E)
    crit = critical_structure(E)
    return IdempotentProfile(
        matrix=E, critical=crit, rank=crit.rank, zero_diagonal=has_zero_diagonal(E)
    )


def rank(E: TropMatrix) -> int:
    return idempotent_profile(E).rank


def zero_diag_normalize(E: TropMatrix):
    """Candidate zero-diagonal idempotent with the same column space.

    Column ``i`` of the result is the componentwise infimum of
    ``{u in C(E) : u_i >= 0}``, i.e. ``F[j][i] = min_t E[j][t] - E[i][t]``.
    Returns ``(F, valid)``; ``valid`` holds iff ``F`` is idempotent and spans
    ``C(E)``, which happens exactly when ``C(E)`` is min-plus convex.
    """
    require_idempotent(E)
    n = E.n_rows
    rows = E.rows
    F = TropMatrix._raw(
        tuple(
            tuple(min(rows[j][t] - rows[i][t] for t in range(n)) for i in range(n))
            for j in range(n)
        )
    )
    valid = is_idempotent(F) and span_equal(F, E)
    return F, valid


def is_minplus_convex_colspace(E: TropMatrix) -> bool:
    return zero_diag_normalize(E)[1]


def full_rank_reduce(E: TropMatrix) -> FullRankReduction:
    """Restrict ``E`` to one representative per critical class."""
    profile = idempotent_profile(E)
    reps = profile.critical.representatives
    n, k = E.n_rows, len(reps)
    rep_set = set(reps)
    M = TropMatrix._raw(
        tuple(tuple(ZERO if j == c else None for j in range(n)) for c in reps)
    )

    def lift_entry(s, c, value):
        if s == c:
            return ZERO
        if s not in rep_set:
            return value
        return None

    N = TropMatrix._raw(
        tuple(tuple(lift_entry(s, c, E[s, c]) for c in reps) for s in range(n))
    )
    P = TropMatrix._raw(
        tuple(tuple(lift_entry(s, c, E[c, s]) for s in range(n)) for c in reps)
    )
    F = E.submatrix(reps, reps)
    assert k == profile.rank
    return FullRankReduction(E=E, representatives=tuple(reps), F=F, M=M, N=N, P=P)


def _require_zero_diagonal(E: TropMatrix) -> None:
    for i, d in enumerate(E.diagonal()):
        if d != 0:
            raise DiagonalNotZero(f"diagonal entry ({i + 1},{i + 1}) is {d}, not 0")


def reduce_hclass_element(red: FullRankReduction, A: TropMatrix) -> TropMatrix:
    """``phi(A) = M A M^T``: the representative submatrix of ``A in H_E``."""
    _require_zero_diagonal(red.E)
    if A.shape != red.E.shape:
        raise DimensionError(f"expected {red.E.shape} matrix, got {A.shape}")
    if not green_relation(A, red.E, "H"):
        raise NotInHClass("matrix is not H-related to the reduced idempotent")
    return A.submatrix(red.representatives, red.representatives)


def lift_hclass_element(red: FullRankReduction, G: TropMatrix) -> TropMatrix:
    """``N G P``: inverse of :func:`reduce_hclass_element` on ``H_F``."""
    _require_zero_diagonal(red.E)
    if G.shape != red.F.shape:
        raise DimensionError(f"expected {red.F.shape} matrix, got {G.shape}")
    if not green_relation(G, red.F, "H"):
        raise NotInHClass("matrix is not H-related to the reduced idempotent F")
    return mat_mul(mat_mul(red.N, G), red.P)


def embed_full_rank(F: TropMatrix, n: int) -> TropMatrix:
    """Pad a full-rank k x k idempotent to n x n by repeating its last index."""
    profile = idempotent_profile(F)
    k = F.n_rows
    if profile.rank != k:
        raise NotFullRank(f"rank {profile.rank} < size {k}")
    if n < k:
        raise DimensionError(f"target size {n} smaller than {k}")
    last = k - 1
    return TropMatrix._raw(
        tuple(
            tuple(F[min(i, last), min(j, last)] for j in range(n)) for i in range(n)
        )
    )


def zero_diag_representative(E: TropMatrix) -> TropMatrix:
    """A zero-diagonal n x n idempotent whose column space is isomorphic to C(E)."""
    red = full_rank_reduce(E)
    return embed_full_rank(red.F, E.n_rows)
