from fractions import Fraction

import pytest

from susyfactor.core import Poly, Problem, QuasiFunction
from susyfactor import associated
from susyfactor.principal import factor_table

from conftest import laguerre, legendre


def test_assoc_lambda_closed_form(family):
    for l in range(6):
        for m in range(l + 1):
            lam = associated.assoc_lambda(family, l, m)
            expect = -(l - m) * family.qp \
                - (l * (l - 1) - m * (m - 1)) * family.ppp / 2
            assert lam == expect
            assert associated.assoc_lambda(family, l, -m) == lam


def test_assoc_entry_range_error():
    with pytest.raises(associated.RangeError):
        associated.assoc_entry(legendre(), 2, 3)


def test_verify_associated_all_true(family):
    for l in range(5):
        for m in range(-l, l + 1):
            assert all(associated.verify_associated(family, l, m).values())


def test_bottom_up_top_down_proportional(family):
    for l in range(6):
        for m in range(l + 1):
            a = associated.assoc_bottom_up(family, l, m)
            b = associated.assoc_top_down(family, l, m)
            ratio = a.value.proportional(b.value, family)
            assert ratio is not None


def test_raising_is_exact(family):
    # h_m^dag Phi_lm = Phi_(l,m+1) with ratio exactly 1
    for l in range(1, 5):
        for m in range(l):
            lo, hi = associated.assoc_ladders(family, m)
            up = hi.apply(associated.assoc_bottom_up(family, l, m).value,
                          family)
            nxt = associated.assoc_bottom_up(family, l, m + 1).value
            assert up.proportional(nxt, family) == 1


def test_lowering_scales_by_lambda(family):
    # h_(m-1) Phi_lm = lambda_(l,m-1) Phi_(l,m-1)
    for l in range(1, 5):
        for m in range(1, l + 1):
            lo, _ = associated.assoc_ladders(family, m - 1)
            down = lo.apply(associated.assoc_bottom_up(family, l, m).value,
                            family)
            prev = associated.assoc_bottom_up(family, l, m - 1).value
            lam = associated.assoc_lambda(family, l, m - 1)
            if lam == 0:
                assert down.is_zero()
            else:
                assert down.proportional(prev, family) == lam


def test_negative_m_sign_relation(family):
    for l in range(5):
        for m in range(l + 1):
            pos = associated.assoc_bottom_up(family, l, m).value
            neg = associated.assoc_bottom_up(family, l, -m).value
            assert neg.proportional(pos, family) == (-1) ** m


def test_assoc_shape_invariance_zero(family):
    for n in range(1, 7):
        assert associated.assoc_shape_invariance(family, n).is_zero()


def test_assoc_delta_plus_closed_form(family):
    for n in range(1, 7):
        assert associated.assoc_delta_plus(family, n) == \
            -family.qp - (n - 1) * family.ppp


def test_three_term_zero(family):
    for l in range(2, 6):
        for m in range(1, l):
            r1, r2 = associated.assoc_three_term(family, l, m)
            assert r1.is_zero() and r2.is_zero()


def test_three_term_m0_reduces_to_sign_relation(family):
    # at m = 0 both residuals collapse to Phi_(l,1) + Phi_(l,-1), which
    # vanishes by the sign relation
    for l in range(1, 5):
        r1, r2 = associated.assoc_three_term(family, l, 0)
        assert r1.is_zero() and r2.is_zero()


def test_principal_form_equivalence(family):
    for l in range(4):
        for m in range(l + 1):
            assert all(associated.principal_form_equivalence(
                family, l, m).values())


def test_standard_hermitian_relation(family):
    for l in range(4):
        assert associated.standard_hermitian_relation(family, l)


def test_pHm_factorization(family):
    for l in range(5):
        for m in range(l + 1):
            C, E_lm, ok = associated.pHm_factorization(family, l, m)
            assert ok
            if m == 0:
                assert C == 0
                assert E_lm == factor_table(family, "minus", l)[l].E


def test_classify_round_trip(family):
    from susyfactor.diffop import DiffOp
    for l, m in [(3, 0), (4, 2), (5, 1)]:
        ham = associated.assoc_hamiltonian(family, m)
        lam = associated.assoc_lambda(family, l, m)
        op = ham.sub(DiffOp.mul_by(lam), family)
        if family.p.degree == 0:
            with pytest.raises(associated.ClassifyError):
                associated.classify_expanded(op)
            continue
        got_prob, got_m, got_l, got_lam = associated.classify_expanded(op)
        assert (got_prob.p, got_prob.q) == (family.p, family.q)
        assert (got_m, got_l, got_lam) == (m, l, lam)
