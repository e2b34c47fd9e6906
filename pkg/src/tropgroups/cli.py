"""Command-line interface.

Every subcommand prints either a short human-readable summary or, with
``--json``, a report object with the keys ``command``, ``input_hash``,
``result`` and ``assertions_checked``.  Exit status is 0 on success, 1 when
a mathematical precondition fails and 2 for unreadable or misshapen input.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import core, groups, idem, spectral
from .core import TropMatrix, mat_add, mat_mul, mat_vec
from .errors import DimensionError, TropError
from .io import (
    dumps_report,
    indices_json,
    input_hash,
    matrix_json,
    matrix_text,
    perm_json,
    read_matrix,
    read_vector,
    scalar_json,
    vector_json,
)


class CheckFailed(TropError):
    pass


def _check(checks, name, ok):
    if not ok:
        raise CheckFailed(f"postcondition {name} failed")
    checks.append(name)


def _random_span_point(rng, E):
    coeffs = [Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4))) for _ in range(E.n_cols)]
    return mat_vec(E, coeffs)


def _critical_json(crit):
    return {
        "mcm": scalar_json(crit.mcm),
        "critical_nodes": indices_json(crit.critical_nodes),
        "classes": [indices_json(c) for c in crit.classes],
        "representatives": indices_json(crit.representatives),
    }


def _words(values):
    return " ".join(str(v) for v in values)


def _unit_json(G):
    return {"sigma": perm_json(G.sigma), "weights": vector_json(G.weights)}


def cmd_mcm(args):
    A = read_matrix(args.matrix)
    report = spectral.eigenspace_basis(A)
    lam = report.critical.mcm
    checks = []
    _check(checks, "eigenbasis_eigen_equation",
           all(spectral.is_eigenvector(A, v, lam) for v in report.eigenbasis))
    return [A], scalar_json(lam), checks, f"maximum cycle mean: {lam}"


def cmd_plus(args):
    A = read_matrix(args.matrix)
    P = spectral.kleene_plus(A)
    checks = []
    _check(checks, "closure_fixed_point", mat_add(A, mat_mul(P, A)) == P)
    return [A], matrix_json(P), checks, matrix_text(P)


def cmd_star(args):
    A = read_matrix(args.matrix)
    S = spectral.kleene_star(A)
    checks = []
    _check(checks, "idempotent", idem.is_idempotent(S))
    _check(checks, "zero_diagonal", idem.has_zero_diagonal(S))
    return [A], matrix_json(S), checks, matrix_text(S)


def cmd_idem(args):
    E = read_matrix(args.matrix)
    prof = idem.idempotent_profile(E)
    checks = ["idempotent"]
    _check(checks, "rank_equals_generator_count", prof.rank == len(core.extremal_columns(E)))
    _check(checks, "mcm_zero", prof.critical.mcm == 0)
    result = {"rank": prof.rank, "zero_diagonal": prof.zero_diagonal}
    result.update(_critical_json(prof.critical))
    text = f"idempotent, rank {prof.rank}, zero diagonal: {prof.zero_diagonal}"
    return [E], result, checks, text


def cmd_analyze(args):
    A = read_matrix(args.matrix)
    rep = spectral.eigenspace_basis(A)
    checks = []
    _check(checks, "eigenbasis_eigen_equation",
           all(spectral.is_eigenvector(A, v, rep.critical.mcm) for v in rep.eigenbasis))
    result = _critical_json(rep.critical)
    result["aplus"] = matrix_json(rep.aplus)
    result["eigenbasis"] = [vector_json(v) for v in rep.eigenbasis]
    lines = [f"maximum cycle mean: {rep.critical.mcm}",
             "critical classes: " + ", ".join("{" + _words(indices_json(c)) + "}" for c in rep.critical.classes)]
    lines += ["eigenvector: " + " ".join(vector_json(v)) for v in rep.eigenbasis]
    return [A], result, checks, "\n".join(lines)


def cmd_normalize(args):
    E = read_matrix(args.matrix)
    F, valid = idem.zero_diag_normalize(E)
    checks = []
    if valid:
        _check(checks, "zero_diagonal", idem.has_zero_diagonal(F))
        _check(checks, "idempotent", idem.is_idempotent(F))
        _check(checks, "same_column_space", core.span_equal(F, E))
    result = {"F": matrix_json(F), "valid": valid, "minplus_convex": valid}
    text = matrix_text(F) + f"\nvalid: {valid}"
    return [E], result, checks, text


def cmd_reduce(args):
    E = read_matrix(args.matrix)
    red = idem.full_rank_reduce(E)
    k = red.rank
    Ik = TropMatrix.identity(k)
    checks = []
    _check(checks, "F_is_submatrix", mat_mul(mat_mul(red.M, E), red.M.T) == red.F)
    _check(checks, "F_idempotent_full_rank", idem.idempotent_profile(red.F).rank == k)
    _check(checks, "MN_identity", mat_mul(red.M, red.N) == Ik)
    _check(checks, "PMt_identity", mat_mul(red.P, red.M.T) == Ik)
    result = {
        "rank": k,
        "representatives": indices_json(red.representatives),
        "F": matrix_json(red.F),
        "M": matrix_json(red.M),
        "N": matrix_json(red.N),
        "P": matrix_json(red.P),
    }
    text = f"representatives: {_words(indices_json(red.representatives))}\n" + matrix_text(red.F)
    return [E], result, checks, text


def cmd_embed(args):
    F = read_matrix(args.matrix)
    out = idem.embed_full_rank(F, args.n)
    checks = []
    prof = idem.idempotent_profile(out)
    checks.append("idempotent")
    _check(checks, "zero_diagonal", prof.zero_diagonal)
    _check(checks, "rank_preserved", prof.rank == F.n_rows)
    return [F], matrix_json(out), checks, matrix_text(out)


def cmd_representative(args):
    E = read_matrix(args.matrix)
    k = idem.rank(E)
    out = idem.zero_diag_representative(E)
    checks = []
    prof = idem.idempotent_profile(out)
    checks.append("idempotent")
    _check(checks, "zero_diagonal", prof.zero_diagonal)
    _check(checks, "rank_preserved", prof.rank == k)
    return [E], matrix_json(out), checks, matrix_text(out)


def cmd_group(args):
    E = read_matrix(args.matrix)
    gs = groups.group_structure(E, max_n=args.max_n)
    dec = gs.decomposition
    F = dec.E
    checks = []
    _check(checks, "units_commute_with_E",
           all(groups.gamma(F, G) == mat_mul(F, G.matrix()) for G in dec.sigma_group))
    _check(checks, "eigenvalue_zero", all(G.eigenvalue == 0 for G in dec.sigma_group))
    _check(checks, "uniform_cycle_means",
           all(len(set(G.cycle_means())) == 1 for G in dec.sigma_group))
    _check(checks, "images_distinct",
           len(set(dec.permutation_images)) == len(dec.permutation_images))
    rng = random.Random(args.seed)
    ok = True
    for _ in range(5):
        G = rng.choice(dec.sigma_group).scaled(rng.randint(-3, 3))
        H = rng.choice(dec.sigma_group).scaled(rng.randint(-3, 3))
        ok &= groups.gamma(F, G * H) == mat_mul(groups.gamma(F, G), groups.gamma(F, H))
        ok &= groups.factor_hclass_element(F, groups.gamma(F, G)) == G
    _check(checks, "gamma_multiplicative_sampled", ok)
    result = {
        "order": dec.order,
        "iso": dec.iso_summary,
        "rank": gs.rank,
        "reduced_idempotent": matrix_json(F),
        "sigma_group": [_unit_json(G) for G in dec.sigma_group],
        "permutation_images": [perm_json(s) for s in dec.permutation_images],
        "generators": [_unit_json(G) for G in dec.generators],
        "trace": list(gs.trace),
    }
    lines = list(gs.trace)
    lines += [f"  sigma={_words(perm_json(G.sigma))}  weights={_words(vector_json(G.weights))}"
              for G in dec.sigma_group]
    return [E], result, checks, "\n".join(lines)


def cmd_eigenvector(args):
    E = read_matrix(args.matrix)
    x = groups.common_eigenvector(E, max_n=args.max_n)
    dec = groups.sigma_group(E, max_n=args.max_n)
    checks = []
    _check(checks, "in_column_space", core.in_span(E, x)[0])
    _check(checks, "common_eigenvector",
           all(core.is_multiple(x, mat_vec(groups.gamma(E, G), x)) is not None
               for G in dec.sigma_group))
    result = {"vector": vector_json(x)}
    if len(x) >= 2:
        result["projective"] = vector_json(core.projectivize(x))
    return [E], result, checks, " ".join(vector_json(x))


def cmd_factor(args):
    E = read_matrix(args.matrix)
    A = read_matrix(args.other)
    G = groups.factor_hclass_element(E, A)
    mu, G0 = groups.decompose_unit(G)
    checks = []
    _check(checks, "EG_equals_A", mat_mul(E, G.matrix()) == A)
    _check(checks, "GE_equals_A", mat_mul(G.matrix(), E) == A)
    _check(checks, "gamma_inverts", groups.gamma(E, G) == A)
    result = {
        "sigma": perm_json(G.sigma),
        "weights": vector_json(G.weights),
        "unit": matrix_json(G.matrix()),
        "scalar": scalar_json(mu),
        "sigma_part": _unit_json(G0),
    }
    text = (f"sigma={_words(perm_json(G.sigma))}  weights={_words(vector_json(G.weights))}\n"
            f"scalar {mu} times weights {_words(vector_json(G0.weights))}")
    return [E, A], result, checks, text


def cmd_affine(args):
    E = read_matrix(args.matrix)
    A = read_matrix(args.other)
    sigma, weights = groups.affine_form(E, A)
    rng = random.Random(args.seed)
    checks = []
    pts = [_random_span_point(rng, E) for _ in range(20)]
    _check(checks, "affine_matches_action_sampled",
           all(mat_vec(A, x) == groups.affine_apply(sigma, weights, x) for x in pts))
    result = {"sigma": perm_json(sigma), "shift": vector_json(weights)}
    text = "\n".join(
        f"(A x)_{i + 1} = x_{s + 1} {'-' if w < 0 else '+'} {abs(w)}"
        for i, (s, w) in enumerate(zip(sigma, weights))
    )
    return [E, A], result, checks, text


def cmd_classify(args):
    E = read_matrix(args.matrix)
    y = read_vector(args.point)
    if len(y) != E.n_rows:
        raise DimensionError(f"point has length {len(y)}, expected {E.n_rows}")
    idem.require_idempotent(E)
    cls = groups.classify_point(E, y)
    x = core.residual_solve(E, y)
    checks = []
    _check(checks, "principal_solution_subsolution", core.vec_leq(mat_vec(E, x), y))
    result = {"class": cls.value, "principal_solution": vector_json(x)}
    if cls is not groups.PointClass.EXTERIOR:
        result["forced_columns"] = groups.forced_columns(E, x)
    return [E, y], result, checks, cls.value


def cmd_green(args):
    A = read_matrix(args.matrix)
    B = read_matrix(args.other)
    rels = [args.rel] if args.rel else list(core.GREEN_RELATIONS)
    result = {r: core.green_relation(A, B, r) for r in rels}
    text = "\n".join(f"{r}: {v}" for r, v in result.items())
    return [A, B], result, [], text


COMMANDS = {
    "mcm": (cmd_mcm, "maximum cycle mean", 1),
    "plus": (cmd_plus, "Kleene plus A+", 1),
    "star": (cmd_star, "Kleene star I + A+", 1),
    "idem": (cmd_idem, "idempotency test and rank", 1),
    "analyze": (cmd_analyze, "critical structure and eigenspace generators", 1),
    "normalize": (cmd_normalize, "zero-diagonal normalization / min-plus convexity", 1),
    "reduce": (cmd_reduce, "reduction to a full-rank idempotent", 1),
    "embed": (cmd_embed, "embed a full-rank idempotent into n x n", 1),
    "representative": (cmd_representative, "zero-diagonal D-class representative", 1),
    "group": (cmd_group, "H_E = R x Sigma decomposition", 1),
    "eigenvector": (cmd_eigenvector, "common eigenvector of H_E", 1),
    "factor": (cmd_factor, "factor A in H_E as a monomial unit", 2),
    "affine": (cmd_affine, "affine form of the action of A in H_E", 2),
    "classify": (cmd_classify, "interior / boundary / exterior", "point"),
    "green": (cmd_green, "Green's relations between two matrices", 2),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--max-n", type=int, default=None,
                        help="permutation enumeration cap (default 10, or $TROPGROUPS_MAX_N)")
    parser = argparse.ArgumentParser(prog="tropgroups", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, arity) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("matrix", help="matrix file")
        if arity == 2:
            p.add_argument("other", help="second matrix file")
        elif arity == "point":
            p.add_argument("point", help="vector file")
        if name == "embed":
            p.add_argument("--n", type=int, required=True, help="target size")
        if name == "green":
            p.add_argument("--rel", choices=core.GREEN_RELATIONS, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        inputs, result, checks, text = handler(args)
    except TropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DimensionError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        report = {
            "command": args.command,
            "input_hash": input_hash(*inputs),
            "result": result,
            "assertions_checked": checks,
        }
        sys.stdout.write(dumps_report(report))
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
