import itertools
from fractions import Fraction as Q

import pytest

from tropgroups.core import TropMatrix, green_relation, in_span, is_multiple, mat_mul, mat_vec
from tropgroups.errors import (
    DoesNotCommute,
    EnumerationLimit,
    MatchFailed,
    NonUniformCycleMeans,
    NotFullRank,
    NotIdempotent,
    NotInHClass,
)
from tropgroups.groups import (
    MonomialUnit,
    PointClass,
    affine_apply,
    affine_form,
    classify_point,
    common_eigenvector,
    commutes,
    commuting_units,
    conjugation_diagnostic,
    decompose_unit,
    factor_hclass_element,
    gamma,
    group_structure,
    monomial_inv,
    monomial_mul,
    sigma_group,
)

import gen

E2 = TropMatrix([[0, -1], [-2, 0]])
SWAP = MonomialUnit.make((1, 0), ("1/2", "-1/2"))
SWAP_IMAGE = TropMatrix([["-3/2", "1/2"], ["-1/2", "-3/2"]])


class TestMonomial:
    def test_inverse_and_identity(self):
        rng = gen.new_rng(40)
        for _ in range(30):
            G = gen.rand_unit(rng, rng.randint(1, 5))
            I = MonomialUnit.identity(G.n)
            assert monomial_mul(G, monomial_inv(G)) == I
            assert monomial_mul(monomial_inv(G), G) == I
            assert monomial_mul(I, G) == G

    def test_swap_squared(self):
        assert monomial_mul(SWAP, SWAP) == MonomialUnit.identity(2)
        assert mat_mul(SWAP.matrix(), SWAP.matrix()) == TropMatrix.identity(2)

    def test_product_matches_dense(self):
        rng = gen.new_rng(41)
        for _ in range(50):
            n = rng.randint(1, 5)
            G, H = gen.rand_unit(rng, n), gen.rand_unit(rng, n)
            assert monomial_mul(G, H).matrix() == mat_mul(G.matrix(), H.matrix())
            x = gen.rand_vector(rng, n)
            assert G.apply(x) == mat_vec(G.matrix(), x)

    def test_one_finite_entry_per_row_and_column(self):
        M = gen.rand_unit(gen.new_rng(42), 5).matrix()
        assert all(sum(v is not None for v in r) == 1 for r in M.rows)
        assert all(sum(v is not None for v in r) == 1 for r in M.T.rows)

    def test_eigenvalue_is_max_cycle_mean(self):
        G = MonomialUnit.make((1, 0, 2), (3, 1, -5))
        assert G.cycle_means() == [2, -5]
        assert G.eigenvalue == 2


class TestCommutationIdentity:
    def test_identity_matches_dense_products(self):
        rng = gen.new_rng(43)
        for _ in range(200):
            n = rng.randint(1, 4)
            A = gen.rand_matrix(rng, n, lo=-2, hi=2, denoms=(1,))
            G = gen.rand_unit(rng, n)
            dense = mat_mul(G.matrix(), A) == mat_mul(A, G.matrix())
            assert commutes(A, G) == dense

    def test_enumeration_matches_brute_force(self):
        rng = gen.new_rng(44)
        for _ in range(60):
            n = rng.randint(1, 4)
            A = rng.choice([
                gen.rand_matrix(rng, n, lo=-1, hi=1, denoms=(1,)),
                gen.rand_full_rank_idempotent(rng, n, symmetric=True),
            ])
            assert commuting_units(A) == gen.brute_commuting_units(A)

    def test_examples(self):
        units = commuting_units(E2)
        assert [u.sigma for u in units] == [(0, 1), (1, 0)]
        w = units[1].weights
        assert w[1] - w[0] == -1
        assert [u.weights for u in units][0] == (0, 0)
        zero = TropMatrix.full(3, 3, 0)
        assert len(commuting_units(zero)) == 6
        assert all(set(u.weights) == {0} for u in commuting_units(zero))

    def test_generic_matrix_only_identity(self):
        A = TropMatrix([[0, "-7/3", -1], ["-1/2", "1/5", -4], [2, "-11/7", "3/4"]])
        assert [u.sigma for u in commuting_units(A)] == [(0, 1, 2)]

    def test_cap(self):
        with pytest.raises(EnumerationLimit):
            commuting_units(TropMatrix.full(4, 4, 0), max_n=3)

    def test_cap_from_environment(self, monkeypatch):
        monkeypatch.setenv("TROPGROUPS_MAX_N", "2")
        with pytest.raises(EnumerationLimit):
            commuting_units(TropMatrix.full(3, 3, 0))


class TestSigmaGroup:
    def test_worked_example(self):
        dec = sigma_group(E2)
        assert dec.order == 2
        assert dec.sigma_group == (MonomialUnit.identity(2), SWAP)
        assert dec.iso_summary == "R x S2"

    def test_trivial(self):
        assert sigma_group(TropMatrix([[0]])).order == 1
        A = TropMatrix([[0, "-7/3", -1], ["-1/2", "1/5", -4], [2, "-11/7", "3/4"]])
        from tropgroups.spectral import kleene_star, max_cycle_mean

        E = kleene_star(A.scale(-max_cycle_mean(A) - 1))
        dec = sigma_group(E)
        assert dec.order == 1 and dec.iso_summary == "R"

    def test_full_symmetric(self):
        n = 4
        E = TropMatrix([[0 if i == j else -1 for j in range(n)] for i in range(n)])
        dec = sigma_group(E)
        assert dec.order == 24
        assert sorted(dec.permutation_images) == list(itertools.permutations(range(n)))

    def test_errors(self):
        with pytest.raises(NotFullRank):
            sigma_group(TropMatrix([[0, -1], [1, 0]]))
        with pytest.raises(NotIdempotent):
            sigma_group(TropMatrix([[1]]))

    def test_group_axioms_random(self):
        rng = gen.new_rng(45)
        for _ in range(30):
            E = gen.rand_full_rank_idempotent(rng, rng.randint(1, 5), symmetric=True, lo=-2, hi=2, denoms=(1,))
            dec = sigma_group(E)
            members = set(dec.sigma_group)
            assert dec.sigma_group[0] == MonomialUnit.identity(E.n_rows)
            for G in dec.sigma_group:
                assert monomial_inv(G) in members
                assert mat_mul(G.matrix(), E) == mat_mul(E, G.matrix())
                for H in dec.sigma_group:
                    assert monomial_mul(G, H) in members


class TestGammaAndFactor:
    def test_examples(self):
        assert gamma(E2, MonomialUnit.identity(2)) == E2
        assert gamma(E2, SWAP) == SWAP_IMAGE
        assert gamma(E2, MonomialUnit.identity(2, Q(5, 2))) == E2.scale(Q(5, 2))
        assert factor_hclass_element(E2, E2) == MonomialUnit.identity(2)
        assert factor_hclass_element(E2, SWAP_IMAGE) == SWAP
        assert factor_hclass_element(E2, E2.scale(-3)) == MonomialUnit.identity(2, -3)

    def test_does_not_commute(self):
        with pytest.raises(DoesNotCommute):
            gamma(E2, MonomialUnit.make((1, 0), (0, 0)))

    def test_factor_rejects_outsiders(self):
        with pytest.raises(MatchFailed):
            factor_hclass_element(E2, TropMatrix([[0, 0], [5, 0]]))
        # columns are scaled columns of E but the rows do not match
        with pytest.raises(NotInHClass):
            factor_hclass_element(E2, TropMatrix([[-1, 0], [0, -2]]))
        with pytest.raises(NotInHClass):
            factor_hclass_element(E2, TropMatrix([[0, 0], [-2, -2]]))

    def test_random_roundtrip(self):
        rng = gen.new_rng(46)
        for _ in range(30):
            E = gen.rand_full_rank_idempotent(rng, rng.randint(1, 5), symmetric=True)
            for G in sigma_group(E).sigma_group:
                Gs = G.scaled(gen.rand_scalar(rng))
                A = gamma(E, Gs)
                assert green_relation(A, E, "H")
                assert factor_hclass_element(E, A) == Gs

    def test_aut_isomorphism(self):
        # the matrix of images of the columns of E under x -> A x is A itself
        rng = gen.new_rng(47)
        for _ in range(20):
            E = gen.rand_full_rank_idempotent(rng, rng.randint(2, 4), symmetric=True)
            for G in sigma_group(E).sigma_group:
                A = gamma(E, G)
                images = [mat_vec(A, c) for c in E.columns()]
                assert TropMatrix.from_columns(images) == A
                for _ in range(5):
                    x = gen.rand_span_point(rng, E)
                    assert in_span(E, mat_vec(A, x))[0]


class TestDecompose:
    def test_examples(self):
        assert decompose_unit(MonomialUnit.identity(3)) == (0, MonomialUnit.identity(3))
        mu, G0 = decompose_unit(MonomialUnit.make((1, 0), ("3/2", "1/2")))
        assert mu == 1 and G0 == SWAP
        assert decompose_unit(MonomialUnit.identity(2, 4)) == (4, MonomialUnit.identity(2))

    def test_non_uniform(self):
        with pytest.raises(NonUniformCycleMeans):
            decompose_unit(MonomialUnit.make((0, 1), (0, 1)))


class TestAffine:
    def test_example(self):
        sigma, lam = affine_form(E2, SWAP_IMAGE)
        assert sigma == (1, 0) and lam == (Q(1, 2), Q(-1, 2))
        x = (Q(0), Q(-2))
        assert mat_vec(SWAP_IMAGE, x) == (Q(-3, 2), Q(-1, 2)) == affine_apply(sigma, lam, x)

    def test_identity_and_scaling(self):
        assert affine_form(E2, E2) == ((0, 1), (0, 0))
        assert affine_form(E2, E2.scale(3)) == ((0, 1), (3, 3))

    def test_random_points(self):
        rng = gen.new_rng(48)
        for _ in range(20):
            E = gen.rand_full_rank_idempotent(rng, rng.randint(1, 5), symmetric=True)
            for G in sigma_group(E).sigma_group:
                A = gamma(E, G.scaled(rng.randint(-2, 2)))
                sigma, lam = affine_form(E, A)
                for _ in range(10):
                    x = gen.rand_span_point(rng, E)
                    assert mat_vec(A, x) == affine_apply(sigma, lam, x)


class TestCommonEigenvector:
    def test_worked_example(self):
        # orbit of (0,-2) is {(0,-2), (-3/2,-1/2)}: projective 2 and -1, mean 1/2
        x = common_eigenvector(E2)
        assert x == (Q(1, 2), Q(0))
        assert mat_vec(E2, x) == x
        # row maxima: max(-3/2 + 1/2, 1/2 + 0) and max(-1/2 + 1/2, -3/2 + 0)
        assert mat_vec(SWAP_IMAGE, x) == x

    def test_trivial_group(self):
        A = TropMatrix([[0, "-7/3", -1], ["-1/2", "1/5", -4], [2, "-11/7", "3/4"]])
        from tropgroups.spectral import kleene_star, max_cycle_mean

        E = kleene_star(A.scale(-max_cycle_mean(A) - 1))
        assert sigma_group(E).order == 1
        assert is_multiple(E.column(0), common_eigenvector(E)) is not None
        assert common_eigenvector(E)[-1] == 0
        assert common_eigenvector(TropMatrix([[0]])) == (0,)


def test_two_by_two_full_rank_always_has_swap():
    # a diagonal similarity symmetrizes any 2x2 full-rank idempotent
    rng = gen.new_rng(53)
    for _ in range(40):
        E = gen.rand_full_rank_idempotent(rng, 2)
        dec = sigma_group(E)
        assert dec.order == 2 and dec.iso_summary == "R x S2"
        x = common_eigenvector(E)
        assert is_multiple(x, mat_vec(gamma(E, dec.sigma_group[1]), x)) is not None

    def test_random(self):
        rng = gen.new_rng(49)
        for _ in range(30):
            E = gen.rand_full_rank_idempotent(rng, rng.randint(1, 5), symmetric=True)
            x = common_eigenvector(E)
            assert in_span(E, x)[0]
            for G in sigma_group(E).sigma_group:
                assert is_multiple(x, mat_vec(gamma(E, G.scaled(2)), x)) is not None


def perturbation_class(E, y, eps=Q(1, 1024)):
    """Boundary iff lowering one coordinate of the principal solution keeps E x = y."""
    from tropgroups.core import residual_solve

    x = residual_solve(E, y)
    if mat_vec(E, x) != tuple(y):
        return PointClass.EXTERIOR
    for j in range(len(x)):
        lowered = tuple(v - eps if k == j else v for k, v in enumerate(x))
        if mat_vec(E, lowered) == tuple(y):
            return PointClass.BOUNDARY
    return PointClass.INTERIOR


class TestClassify:
    def test_examples(self):
        assert classify_point(E2, (0, -2)) is PointClass.BOUNDARY
        assert classify_point(E2, (Q(1, 2), 0)) is PointClass.INTERIOR
        assert classify_point(E2, (0, 5)) is PointClass.EXTERIOR

    def test_matches_perturbation_search(self):
        rng = gen.new_rng(50)
        counts = {c: 0 for c in PointClass}
        for _ in range(40):
            E = gen.rand_full_rank_idempotent(rng, rng.randint(2, 4), lo=-3, hi=3, denoms=(1, 2))
            pts = [gen.rand_vector(rng, E.n_rows, lo=-6, hi=6, denoms=(1, 2)) for _ in range(10)]
            pts += [gen.rand_span_point(rng, E, lo=-4, hi=4, denoms=(1, 2)) for _ in range(10)]
            pts += E.columns()
            for y in pts:
                c = classify_point(E, y)
                assert c is perturbation_class(E, y)
                counts[c] += 1
        assert all(counts.values())

    def test_columns_never_exterior(self):
        rng = gen.new_rng(51)
        for _ in range(30):
            E = gen.rand_full_rank_idempotent(rng, rng.randint(1, 5))
            for c in E.columns():
                assert classify_point(E, c) is not PointClass.EXTERIOR


class TestGroupStructure:
    def test_full_rank(self):
        gs = group_structure(E2)
        assert gs.decomposition.order == 2 and gs.representative is None

    def test_rank_one(self):
        gs = group_structure(TropMatrix([[0, -1], [1, 0]]))
        assert gs.decomposition.iso_summary == "R"
        assert gs.reduction.F == TropMatrix([[0]])

    def test_rank_one_nonzero_diagonal(self):
        gs = group_structure(TropMatrix([[0, -1], [-1, -2]]))
        assert gs.decomposition.iso_summary == "R"
        assert gs.representative == TropMatrix.full(2, 2, 0)

    def test_not_idempotent(self):
        with pytest.raises(NotIdempotent):
            group_structure(TropMatrix([[0, -1], [-2, 1]]))

    def test_lower_rank_symmetric(self):
        # rank-2 zero-diagonal idempotent whose core is E2
        rng = gen.new_rng(52)
        E = gen.conjugate(gen.embed_full_rank(E2, 4), gen.rand_unit(rng, 4))
        gs = group_structure(E)
        assert gs.rank == 2 and gs.decomposition.order == 2


def test_conjugation_diagnostic():
    rng = gen.new_rng(54)
    seen_different = False
    for _ in range(30):
        E = gen.rand_full_rank_idempotent(rng, rng.randint(2, 4), symmetric=True)
        report = conjugation_diagnostic(E, gen.rand_unit(rng, E.n_rows))
        assert report["images_conjugate"]
        seen_different |= not report["same_images"]
    assert seen_different
