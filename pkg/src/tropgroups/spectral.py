"""Spectral theory of finite max-plus matrices.

Graph convention used throughout: entry ``A[i][j]`` is the weight of the
edge from node ``j`` to node ``i``.  With this reading ``(A x)_i`` collects
the weights of edges arriving at ``i``, and ``A^k[i][j]`` is the best walk
of length ``k`` from ``j`` to ``i``.  Cycle means do not depend on the
orientation, but critical edges and the Kleene closure do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import TropMatrix, mat_vec, require_finite, require_square, vec_scale
from .errors import DivergenceError


@dataclass(frozen=True)
class CriticalStructure:
    mcm: Fraction
    critical_nodes: tuple
    classes: tuple
    representatives: tuple

    @property
    def rank(self) -> int:
        return len(self.classes)

    def class_of(self, node: int):
        for t, cls in enumerate(self.classes):
            if node in cls:
                return t
        return None


@dataclass(frozen=True)
class SpectralReport:
    critical: CriticalStructure
    aplus: TropMatrix
    eigenbasis: tuple


def max_cycle_mean(A: TropMatrix) -> Fraction:
    """Maximum cycle mean by Karp's dynamic program, run from every source.

    ``D[k][v]`` is the best weight of a walk with exactly ``k`` edges from the
    source to ``v``; the answer is ``max_v min_k (D[n][v] - D[k][v]) / (n - k)``.
    """
    n = require_square(A)
    require_finite(A)
    rows = A.rows
    best = None
    for source in range(n):
        D = [[None] * n for _ in range(n + 1)]
        D[0][source] = Fraction(0)
        for k in range(1, n + 1):
            prev, cur = D[k - 1], D[k]
            for v in range(n):
                row = rows[v]
                m = None
                for u in range(n):
                    if prev[u] is None:
                        continue
                    w = prev[u] + row[u]
                    if m is None or w > m:
                        m = w
                cur[v] = m
        for v in range(n):
            if D[n][v] is None:
                continue
            worst = None
            for k in range(n):
                if D[k][v] is None:
                    continue
                q = (D[n][v] - D[k][v]) / (n - k)
                if worst is None or q < worst:
                    worst = q
            if worst is not None and (best is None or worst > best):
                best = worst
    return best


def kleene_plus(A: TropMatrix, mcm=None) -> TropMatrix:
    """``A + A^2 + ... `` (max-plus), by Floyd-Warshall longest-path relaxation.

    Requires maximum cycle mean <= 0; raises :class:`DivergenceError` otherwise.
    """
    n = require_square(A)
    require_finite(A)
    if mcm is None:
        mcm = max_cycle_mean(A)
    if mcm > 0:
        raise DivergenceError(f"maximum cycle mean {mcm} > 0: Kleene series diverges")
    P = [list(r) for r in A.rows]
    for k in range(n):
        pk = P[k]
        for i in range(n):
            pik = P[i][k]
            pi = P[i]
            for j in range(n):
                s = pik + pk[j]
                if s > pi[j]:
                    pi[j] = s
    return TropMatrix._raw(tuple(tuple(r) for r in P))


def kleene_star(A: TropMatrix) -> TropMatrix:
    """``I + A^+`` with the identity's off-diagonal -inf absorbed; finite."""
    P = kleene_plus(A)
    n = P.n_rows
    zero = Fraction(0)
    return TropMatrix._raw(
        tuple(
            tuple(max(P[i, j], zero) if i == j else P[i, j] for j in range(n))
            for i in range(n)
        )
    )


def normalize(A: TropMatrix, mcm=None) -> TropMatrix:
    """``A_lambda = -lambda (x) A`` so that the maximum cycle mean becomes 0."""
    if mcm is None:
        mcm = max_cycle_mean(A)
    return A.scale(-mcm)


def strongly_connected_components(nodes, successors) -> list:
    """Tarjan's algorithm (iterative). Returns components as lists."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _critical(A: TropMatrix):
    mcm = max_cycle_mean(A)
    Al = normalize(A, mcm)
    plus = kleene_plus(Al, Fraction(0))
    n = A.n_rows
    # edge j -> i (weight Al[i][j]) is critical iff closing it with the best
    # path i -> j (plus[j][i]) gives a zero cycle
    succ = {j: [] for j in range(n)}
    critical = set()
    for i in range(n):
        for j in range(n):
            if Al[i, j] + plus[j, i] == 0:
                succ[j].append(i)
                critical.add(i)
                critical.add(j)
    nodes = sorted(critical)
    comps = strongly_connected_components(nodes, lambda v: succ[v])
    classes = sorted((tuple(sorted(c)) for c in comps), key=lambda c: c[0])
    structure = CriticalStructure(
        mcm=mcm,
        critical_nodes=tuple(nodes),
        classes=tuple(classes),
        representatives=tuple(c[0] for c in classes),
    )
    return structure, plus


def critical_structure(A: TropMatrix) -> CriticalStructure:
    """Maximum cycle mean, critical nodes and critical classes of ``A``.

    Classes are the strongly connected components of the critical graph,
    each sorted, ordered by their smallest node, which is the representative.
    """
    return _critical(A)[0]


def eigenspace_basis(A: TropMatrix) -> SpectralReport:
    """Generators of the eigenspace: one column of ``(A_lambda)^+`` per class."""
    structure, plus = _critical(A)
    basis = tuple(plus.column(r) for r in structure.representatives)
    return SpectralReport(critical=structure, aplus=plus, eigenbasis=basis)


def is_eigenvector(A: TropMatrix, v, value) -> bool:
    return mat_vec(A, v) == vec_scale(value, v)
