from fractions import Fraction

import pytest

from susyfactor.core import Poly, Problem, QuasiFunction
from susyfactor.diffop import hamiltonian
from susyfactor import principal

from conftest import FAMILIES, hermite, laguerre, legendre


def test_factor_table_matches_direct_match(family):
    table = principal.factor_table(family, "minus", 8) \
        + principal.factor_table(family, "plus", 8)
    assert table == principal.direct_match_table(family, 8)


def test_legendre_minus_lambdas():
    table = principal.factor_table(legendre(), "minus", 5)
    assert [e.lam for e in table] == [0, 2, 6, 12, 20, 30]


def test_plus_branch_symmetries(family):
    minus = principal.factor_table(family, "minus", 7)
    plus = principal.factor_table(family, "plus", 7)
    shift = family.ppp - family.qp
    for l in range(6):
        pl = plus[l + 1]        # plus table starts at level -1
        assert pl.alpha == -minus[l + 1].alpha
        assert pl.beta == -minus[l + 1].beta
        assert pl.E == minus[l + 1].E
        assert pl.lam - minus[l].lam == shift
    # stored deltas are E-gaps; with plus levels starting at -1, the gap
    # at plus index i equals the minus gap at the same index
    for i in range(1, 8):
        assert plus[i].delta == minus[i].delta


def test_breakdown_level_and_partial_table():
    prob = Problem(Poly([1, 0, -1]), Poly([0, 6]))   # c_3 = 0
    with pytest.raises(principal.Breakdown) as exc:
        principal.factor_table(prob, "minus", 6)
    assert exc.value.level == 4
    partial = principal.factor_table(prob, "minus", 3)
    assert [e.level for e in partial] == [0, 1, 2, 3]


def test_eigenfunction_satisfies_operator(family):
    h = hamiltonian(family)
    for l in range(7):
        phi, normsq = principal.principal_eigenfunction(family, l)
        lam = principal.factor_table(family, "minus", l)[l].lam
        res = h.apply(QuasiFunction(phi), family).sub(
            QuasiFunction(phi * lam), family)
        assert res.is_zero()
        assert phi.degree == l
        assert normsq != 0


def test_eigenfunction_matches_oracle(family):
    for l in range(9):
        phi, _ = principal.principal_eigenfunction(family, l)
        psi, lam = principal.brute_force_eigen_oracle(family, l)
        assert lam == principal.factor_table(family, "minus", l)[l].lam
        ratio = QuasiFunction(phi).proportional(QuasiFunction(psi), family)
        assert ratio is not None


def test_oracle_degenerate_detection():
    prob = Problem(Poly([1, 0, -1]), Poly([0, 6]))
    with pytest.raises(principal.OracleDegenerate):
        principal.brute_force_eigen_oracle(prob, 4)


def test_shape_invariance_zero(family):
    for l in range(1, 6):
        assert principal.shape_invariance_check(family, "minus", l).is_zero()
    for l in range(6):
        assert principal.shape_invariance_check(family, "plus", l).is_zero()


def test_three_term_zero(family):
    for l in range(6):
        r1, r2 = principal.three_term_check(family, l)
        assert r1.is_zero() and r2.is_zero()


def test_ladder_pair_product_is_shifted_hamiltonian():
    # (1/p) A_0 B_0 applied after composing equals H_0 + lambda-shift terms;
    # the l = 0 pair must annihilate-and-recreate the ground state
    prob = laguerre(1)
    pair = principal.ladder_pair(prob, "minus", 0)
    ground = QuasiFunction.one()
    assert pair.lower.apply(ground, prob).is_zero()


def test_equivalent_forms_all_true(family):
    for l in range(5):
        assert all(principal.equivalent_forms_check(family, l).values())


def test_superpotential_w0():
    prob = legendre()
    assert principal.superpotential_w0(prob) == \
        (prob.p.derivative() - prob.q) * Fraction(1, 2)
