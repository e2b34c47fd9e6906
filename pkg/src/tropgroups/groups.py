"""Maximal subgroups of the max-plus matrix semigroup.

For a full-rank idempotent ``E`` the H-class ``H_E`` is isomorphic to the
group ``G_E`` of monomial units commuting with ``E`` (via ``G -> G E``), and
``G_E`` splits as the scalings times a finite group ``Sigma`` of units with
eigenvalue 0.  Lower-rank idempotents are first reduced to full rank.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    TropMatrix,
    in_span,
    is_multiple,
    lift,
    mat_mul,
    mat_vec,
    projectivize,
    require_finite,
    require_square,
    residual_solve,
    to_scalar,
)
from .errors import (
    DimensionError,
    DoesNotCommute,
    EnumerationLimit,
    MatchFailed,
    NonUniformCycleMeans,
    NotFullRank,
    NotInHClass,
)
from .idem import (
    FullRankReduction,
    full_rank_reduce,
    idempotent_profile,
    zero_diag_representative,
)

DEFAULT_MAX_N = 10
ZERO = Fraction(0)


def resolve_max_n(max_n: Optional[int] = None) -> int:
    if max_n is not None:
        return int(max_n)
    env = os.environ.get("TROPGROUPS_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


@dataclass(frozen=True)
class MonomialUnit:
    """The unit ``D(weights) P_sigma``: entry ``weights[i]`` at ``(i, sigma[i])``.

    Acting on a vector, ``(G x)_i = weights[i] + x[sigma[i]]``.
    """

    sigma: tuple
    weights: tuple

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError(f"{self.sigma} is not a permutation")
        if len(self.weights) != len(self.sigma):
            raise DimensionError("sigma and weights lengths differ")

    @classmethod
    def make(cls, sigma: Sequence[int], weights: Sequence) -> "MonomialUnit":
        return cls(tuple(sigma), tuple(to_scalar(w) for w in weights))

    @classmethod
    def identity(cls, n: int, scale=0) -> "MonomialUnit":
        c = to_scalar(scale)
        return cls(tuple(range(n)), (c,) * n)

    @property
    def n(self) -> int:
        return len(self.sigma)

    def matrix(self) -> TropMatrix:
        n = self.n
        return TropMatrix._raw(
            tuple(
                tuple(self.weights[i] if j == self.sigma[i] else None for j in range(n))
                for i in range(n)
            )
        )

    def apply(self, x: Sequence) -> tuple:
        return tuple(w + x[s] for w, s in zip(self.weights, self.sigma))

    def scaled(self, c) -> "MonomialUnit":
        c = to_scalar(c)
        return MonomialUnit(self.sigma, tuple(w + c for w in self.weights))

    def cycles(self) -> list:
        seen = set()
        out = []
        for start in range(self.n):
            if start in seen:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.sigma[i]
            out.append(tuple(cyc))
        return out

    def cycle_means(self) -> list:
        return [sum((self.weights[i] for i in c), ZERO) / len(c) for c in self.cycles()]

    @property
    def eigenvalue(self) -> Fraction:
        return max(self.cycle_means())

    def __mul__(self, other: "MonomialUnit") -> "MonomialUnit":
        return monomial_mul(self, other)


def monomial_mul(G: MonomialUnit, H: MonomialUnit) -> MonomialUnit:
    """Product ``G H``: row ``i`` of ``G`` picks row ``sigma_G(i)`` of ``H``."""
    if G.n != H.n:
        raise DimensionError(f"unit sizes differ: {G.n} vs {H.n}")
    sigma = tuple(H.sigma[s] for s in G.sigma)
    weights = tuple(w + H.weights[s] for w, s in zip(G.weights, G.sigma))
    return MonomialUnit(sigma, weights)


def monomial_inv(G: MonomialUnit) -> MonomialUnit:
    n = G.n
    inv = [0] * n
    for i, s in enumerate(G.sigma):
        inv[s] = i
    return MonomialUnit(tuple(inv), tuple(-G.weights[inv[j]] for j in range(n)))


def commutes(A: TropMatrix, G: MonomialUnit) -> bool:
    """Check ``A[sigma(i)][sigma(j)] == A[i][j] + w[j] - w[i]`` for all i, j.

    This is ``G A == A G`` expanded entrywise for a monomial ``G``.
    """
    s, w, rows = G.sigma, G.weights, A.rows
    n = G.n
    return all(
        rows[s[i]][s[j]] == rows[i][j] + w[j] - w[i] for i in range(n) for j in range(n)
    )


def commuting_units(A: TropMatrix, max_n: Optional[int] = None) -> list:
    """All monomial units commuting with ``A``, one per permutation.

    Each is normalized so that ``weights[0] == 0``; the full family is the
    scalings of these.  Permutations are searched depth first in
    lexicographic order; with ``sigma(0)`` fixed the weights are forced
    (``w[j] = A[sigma(0)][sigma(j)] - A[0][j]``), so every partial
    assignment is checked against all constraints among assigned indices.
    """
    n = require_square(A)
    require_finite(A)
    cap = resolve_max_n(max_n)
    if n > cap:
        raise EnumerationLimit(f"n = {n} exceeds the enumeration cap {cap}")
    rows = A.rows
    found = []
    sigma = [0] * n
    w = [ZERO] * n
    used = [False] * n

    def consistent(i):
        si, wi = sigma[i], w[i]
        ri, rsi = rows[i], rows[si]
        for j in range(i + 1):
            sj, wj = sigma[j], w[j]
            if rsi[sj] != ri[j] + wj - wi:
                return False
            if rows[sj][si] != rows[j][i] + wi - wj:
                return False
        return True

    def extend(i):
        if i == n:
            found.append(MonomialUnit(tuple(sigma), tuple(w)))
            return
        for b in range(n):
            if used[b]:
                continue
            sigma[i] = b
            w[i] = rows[sigma[0]][b] - rows[0][i] if i else ZERO
            if consistent(i):
                used[b] = True
                extend(i + 1)
                used[b] = False

    extend(0)
    return found


def decompose_unit(G: MonomialUnit):
    """Split ``G = mu (x) G0`` with ``mu`` the common cycle mean of ``G``."""
    means = G.cycle_means()
    if len(set(means)) != 1:
        raise NonUniformCycleMeans(f"cycle means differ: {[str(m) for m in means]}")
    mu = means[0]
    return mu, G.scaled(-mu)


def _closure(generators: list, n: int) -> set:
    ident = MonomialUnit.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                p = monomial_mul(g, h)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return seen


def generating_set(units: Sequence[MonomialUnit]) -> list:
    """Greedy generating set, scanning ``units`` in order."""
    if not units:
        return []
    n = units[0].n
    gens = []
    generated = {MonomialUnit.identity(n)}
    for g in units:
        if g not in generated:
            gens.append(g)
            generated = _closure(gens, n)
    return gens


def iso_label(order: int) -> str:
    if order == 1:
        return "R"
    if order == 2:
        return "R x S2"
    return f"R x Sigma(order {order})"


@dataclass(frozen=True)
class GroupDecomposition:
    E: TropMatrix
    sigma_group: tuple
    order: int
    permutation_images: tuple
    generators: tuple
    iso_summary: str


def _require_full_rank_idempotent(E: TropMatrix):
    profile = idempotent_profile(E)
    if profile.rank != E.n_rows:
        raise NotFullRank(f"idempotent has rank {profile.rank} < {E.n_rows}")
    return profile


def sigma_group(E: TropMatrix, max_n: Optional[int] = None) -> GroupDecomposition:
    """The finite group of eigenvalue-0 units commuting with a full-rank ``E``."""
    _require_full_rank_idempotent(E)
    n = E.n_rows
    members = []
    for G in commuting_units(E, max_n=max_n):
        means = G.cycle_means()
        if len(set(means)) != 1:
            raise AssertionError(
                f"commuting unit {G.sigma} has unequal cycle means {means}"
            )
        members.append(G.scaled(-means[0]))
    gens = generating_set(members)
    if _closure(gens, n) != set(members):
        raise AssertionError("eigenvalue-0 commuting units are not closed under products")
    for g in gens:
        for G in members:
            if monomial_mul(G, g).eigenvalue != 0:
                raise AssertionError("product of eigenvalue-0 units left eigenvalue 0")
    order = len(members)
    return GroupDecomposition(
        E=E,
        sigma_group=tuple(members),
        order=order,
        permutation_images=tuple(G.sigma for G in members),
        generators=tuple(gens),
        iso_summary=iso_label(order),
    )


def gamma(E: TropMatrix, G: MonomialUnit) -> TropMatrix:
    """``G E`` (equal to ``E G``) for a unit ``G`` commuting with ``E``."""
    if G.n != E.n_rows:
        raise DimensionError(f"unit of size {G.n} for {E.n_rows}x{E.n_cols} matrix")
    Gm = G.matrix()
    left, right = mat_mul(Gm, E), mat_mul(E, Gm)
    if left != right:
        raise DoesNotCommute("unit does not commute with E")
    return left


def factor_hclass_element(E: TropMatrix, A: TropMatrix) -> MonomialUnit:
    """Recover the unit ``G`` with ``A = E G = G E`` from column matching.

    Column ``j`` of ``A`` is ``mu_j`` times column ``pi(j)`` of ``E``; then
    ``sigma(pi(j)) = j`` and ``weights[pi(j)] = mu_j``.
    """
    _require_full_rank_idempotent(E)
    if A.shape != E.shape:
        raise DimensionError(f"expected {E.shape} matrix, got {A.shape}")
    require_finite(A)
    n = E.n_rows
    ecols = E.columns()
    sigma = [None] * n
    weights = [None] * n
    for j in range(n):
        aj = A.column(j)
        hits = [(i, mu) for i, c in enumerate(ecols) if (mu := is_multiple(c, aj)) is not None]
        if not hits:
            raise MatchFailed(f"column {j + 1} is not a multiple of any column of E")
        i, mu = hits[0]
        if sigma[i] is not None:
            raise NotInHClass(f"columns {sigma[i] + 1} and {j + 1} match the same column of E")
        sigma[i] = j
        weights[i] = mu
    G = MonomialUnit(tuple(sigma), tuple(weights))
    Gm = G.matrix()
    if not (mat_mul(E, Gm) == A and mat_mul(Gm, E) == A):
        raise NotInHClass("matched unit does not commute with E")
    return G


def affine_form(E: TropMatrix, A: TropMatrix):
    """``(sigma, weights)`` with ``(A x)_i = x[sigma[i]] + weights[i]`` on C(E)."""
    G = factor_hclass_element(E, A)
    return G.sigma, G.weights


def affine_apply(sigma: Sequence[int], weights: Sequence, x: Sequence) -> tuple:
    return tuple(x[s] + w for s, w in zip(sigma, weights))


def common_eigenvector(E: TropMatrix, max_n: Optional[int] = None) -> tuple:
    """A point of C(E) that is an eigenvector of every element of ``H_E``.

    The finite group acts on the projectivized column space by classical
    affine maps, so the barycenter of any orbit is fixed.  The orbit of the
    first column of ``E`` is used.
    """
    dec = sigma_group(E, max_n=max_n)
    x0 = E.column(0)
    n = E.n_rows
    if n == 1:
        return x0
    images = [projectivize(mat_vec(gamma(E, G), x0)) for G in dec.sigma_group]
    m = len(images)
    centre = tuple(sum((p[k] for p in images), ZERO) / m for k in range(n - 1))
    x = lift(centre)
    if not in_span(E, x)[0]:
        raise AssertionError("orbit barycenter left the column space")
    for G in dec.sigma_group:
        if is_multiple(x, mat_vec(gamma(E, G), x)) is None:
            raise AssertionError(f"barycenter is not fixed by unit {G.sigma}")
    return x


class PointClass(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


def forced_columns(E: TropMatrix, x: Sequence) -> list:
    """For each column ``j``, whether some row attains its max uniquely at ``j``."""
    n = E.n_cols
    forced = [False] * n
    for r in E.rows:
        vals = [a + b for a, b in zip(r, x)]
        top = max(vals)
        winners = [j for j, v in enumerate(vals) if v == top]
        if len(winners) == 1:
            forced[winners[0]] = True
    return forced


def classify_point(E: TropMatrix, y: Sequence) -> PointClass:
    """Exterior if ``y`` is outside C(E); otherwise Interior iff ``E x = y``
    has a unique solution.

    The principal solution ``x`` is the unique one iff every column is the
    strict maximizer ``E[i][j] + x[j]`` of some row ``i``; if column ``j`` is
    never forced, ``x[j]`` can be lowered without changing ``E x``.
    """
    if len(y) != E.n_rows:
        raise DimensionError(f"point has length {len(y)}, expected {E.n_rows}")
    y = tuple(to_scalar(v) for v in y)
    x = residual_solve(E, y)
    if mat_vec(E, x) != y:
        return PointClass.EXTERIOR
    if all(forced_columns(E, x)):
        return PointClass.INTERIOR
    return PointClass.BOUNDARY


@dataclass(frozen=True)
class GroupStructure:
    decomposition: GroupDecomposition
    rank: int
    representative: Optional[TropMatrix]
    reduction: FullRankReduction
    trace: tuple = field(default_factory=tuple)


def group_structure(E: TropMatrix, max_n: Optional[int] = None) -> GroupStructure:
    """``H_E = R x Sigma`` for an idempotent of any rank.

    A rank-deficient ``E`` is first replaced by a zero-diagonal idempotent
    in the same D-class (maximal subgroups in a D-class are isomorphic),
    then reduced to its k x k full-rank core.
    """
    profile = idempotent_profile(E)
    n, k = E.n_rows, profile.rank
    trace = [f"idempotent of size {n}, rank {k}"]
    rep = None
    work = E
    if k < n:
        rep = zero_diag_representative(E)
        work = rep
        trace.append("replaced by zero-diagonal D-class representative")
    red = full_rank_reduce(work)
    trace.append(f"reduced to full-rank {k}x{k} idempotent on nodes {[c + 1 for c in red.representatives]}")
    dec = sigma_group(red.F, max_n=max_n)
    trace.append(f"|Sigma| = {dec.order}: H_E ~ {dec.iso_summary}")
    return GroupStructure(
        decomposition=dec, rank=k, representative=rep, reduction=red, trace=tuple(trace)
    )


def conjugation_diagnostic(E: TropMatrix, U: MonomialUnit, max_n: Optional[int] = None) -> dict:
    """Compare Sigma of ``E`` with Sigma of ``U E U^-1``.

    Diagnostic only, with no guarantee either way: reports whether the two
    sets of permutation images coincide and whether conjugating by ``U``
    carries one onto the other.
    """
    Ui = monomial_inv(U)
    conj = mat_mul(mat_mul(U.matrix(), E), Ui.matrix())
    before = sigma_group(E, max_n=max_n)
    after = sigma_group(conj, max_n=max_n)
    moved = {monomial_mul(monomial_mul(U, G), Ui).sigma for G in before.sigma_group}
    return {
        "order": before.order,
        "same_images": set(before.permutation_images) == set(after.permutation_images),
        "images_conjugate": moved == set(after.permutation_images),
    }
