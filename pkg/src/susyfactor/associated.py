"""Associated operators and eigenfunctions built by iterated factorization.

The associated hierarchy replaces the kinetic piece -(p d/dx)^2 by
-(sqrt(p) d/dx)^2, producing ladder operators with half-integer powers of
p, the operators H^a_m = h_m h_m^dagger, eigenvalues lambda_lm, and the
eigenfunctions Phi_lm reachable bottom-up (differentiate Phi_l) or
top-down (generalized Rodrigues formula).  Negative association levels
ride on the sign relations that identify their ladders with the positive
ones.

Conventions mirror the principal module: ladders are unnormalized, all
proportionality statements are cross-multiplied, and the squared-norm
prefactor (a product of lambda_lj) is tracked separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Poly, Problem, QuasiFunction
from .diffop import DiffOp, hamiltonian
from .principal import (Breakdown, FactorEntry, _entry, factor_table,
                        ladder_pair, principal_eigenfunction)


class RangeError(ValueError):
    """Association level outside |m| <= l."""


class ClassifyError(ValueError):
    """No integer association level fits the presented operator."""


@dataclass(frozen=True)
class AssocEntry:
    l: int
    m: int
    lambda_lm: Fraction
    deltas: tuple[Fraction, ...]   # Delta^+_1 .. Delta^+_|m|


@dataclass(frozen=True)
class AssocFunction:
    value: QuasiFunction
    l: int
    m: int
    normsq: Fraction


def _sqrt_p_prime(prob: Problem) -> QuasiFunction:
    """(sqrt p)' = p'/(2 sqrt p)."""
    return QuasiFunction(prob.p.derivative() * Fraction(1, 2), Fraction(-1, 2), 0)


def assoc_ladders(prob: Problem, m: int) -> tuple[DiffOp, DiffOp]:
    """(h_m, h_m^dagger); negative m gives the descending pair.

    h_0 = -sqrt(p) d/dx + (p'/2 - q)/sqrt(p), h_0^dagger = sqrt(p) d/dx;
    level shift by -m (sqrt p)'.  For m < 0 the ladders are
    (-h_|m|^dagger, -h_|m|).
    """
    if m < 0:
        lo, hi = assoc_ladders(prob, -m)
        return hi.scale(-1), lo.scale(-1)
    shift = _sqrt_p_prime(prob).scale(-m)
    half = Fraction(1, 2)
    w0a2 = QuasiFunction(prob.p.derivative() * half - prob.q, -half, 0)
    lower = DiffOp([w0a2.add(shift, prob), QuasiFunction(Poly.const(-1), half, 0)])
    raise_ = DiffOp([shift, QuasiFunction(Poly.const(1), half, 0)])
    return lower, raise_


def assoc_hamiltonian(prob: Problem, m: int) -> DiffOp:
    """H^a_m expanded: -p d^2 - q d + [(m/2)p''p + (m/2)(q-p')p' + (m^2/4)p'^2]/p."""
    m = abs(m)
    pprime = prob.p.derivative()
    num = Fraction(m, 2) * (prob.p * prob.ppp + (prob.q - pprime) * pprime) \
        + Fraction(m * m, 4) * pprime * pprime
    return DiffOp([QuasiFunction(num, -1, 0).canonicalize(prob),
                   QuasiFunction(-prob.q),
                   QuasiFunction(-prob.p)])


def assoc_lambda(prob: Problem, l: int, m: int) -> Fraction:
    m = abs(m)
    return -(l - m) * prob.qp - Fraction(l * (l - 1) - m * (m - 1), 2) * prob.ppp


def assoc_delta_plus(prob: Problem, n: int) -> Fraction:
    """Delta^+_n = -q' - (n-1) p''."""
    return -prob.qp - (n - 1) * prob.ppp


def assoc_entry(prob: Problem, l: int, m: int) -> AssocEntry:
    if abs(m) > l:
        raise RangeError(f"|m| = {abs(m)} exceeds l = {l}")
    deltas = tuple(assoc_delta_plus(prob, n) for n in range(1, abs(m) + 1))
    return AssocEntry(l, m, assoc_lambda(prob, l, m), deltas)


def _norm_prefactor(prob: Problem, l: int, m: int) -> Fraction:
    out = Fraction(1)
    for j in range(abs(m)):
        out *= assoc_lambda(prob, l, j)
    return out


def assoc_bottom_up(prob: Problem, l: int, m: int) -> AssocFunction:
    """Phi_lm = p^(|m|/2) (d/dx)^|m| Phi_l, times (-1)^m for m < 0."""
    if abs(m) > l:
        raise RangeError(f"|m| = {abs(m)} exceeds l = {l}")
    phi, normsq = principal_eigenfunction(prob, l)
    c = phi
    for _ in range(abs(m)):
        c = c.derivative()
    value = QuasiFunction(c, Fraction(abs(m), 2), 0)
    if m < 0 and m % 2 != 0:
        value = value.scale(-1)
    return AssocFunction(value, l, m, normsq * _norm_prefactor(prob, l, m))


def assoc_top_down(prob: Problem, l: int, m: int) -> AssocFunction:
    """(-1)^(l-|m|) w^-1 p^(-|m|/2) (d/dx)^(l-|m|) (w p^l), sign-flipped
    for negative m.

    Runs entirely inside the quasi-function class: the weight enters as
    e = 1, every derivative stays closed, and e returns to 0 only at the
    final division step.
    """
    if abs(m) > l:
        raise RangeError(f"|m| = {abs(m)} exceeds l = {l}")
    am = abs(m)
    f = QuasiFunction(Poly.const(1), l, 1)
    for _ in range(l - am):
        f = f.derive(prob)
    value = QuasiFunction(f.c, f.s - Fraction(am, 2), 0)
    if (l - am) % 2 != 0:
        value = value.scale(-1)
    if m < 0 and m % 2 != 0:
        value = value.scale(-1)
    _, normsq = principal_eigenfunction(prob, l)
    return AssocFunction(value, l, m, normsq * _norm_prefactor(prob, l, m))


def verify_associated(prob: Problem, l: int, m: int) -> dict[str, bool]:
    """Eigen-verification at level (l, m).

    a: h_m h_m^dagger equals the expanded H^a_m.
    b: H^a_m Phi_lm = lambda_lm Phi_lm exactly.
    c: the descending ladders factor the same operator and reproduce the
       eigenvalue on Phi_{l,-m}.
    d: Phi_{l,-m} = (-1)^m Phi_{lm}.
    """
    am = abs(m)
    lam = assoc_lambda(prob, l, m)
    lower, raise_ = assoc_ladders(prob, am)
    ham = assoc_hamiltonian(prob, am)
    a_ok = lower.compose(raise_, prob).equals(ham, prob)

    phi = assoc_bottom_up(prob, l, am).value
    b_ok = ham.apply(phi, prob).eq(phi.scale(lam), prob)

    if am == 0:
        c_ok = b_ok
        phi_neg = phi
    else:
        nlo, nhi = assoc_ladders(prob, -am)
        neg_ham = nhi.compose(nlo, prob)
        phi_neg = assoc_bottom_up(prob, l, -am).value
        c_ok = neg_ham.apply(phi_neg, prob).eq(phi_neg.scale(lam), prob)

    sign = -1 if am % 2 else 1
    d_ok = phi_neg.eq(phi.scale(sign), prob)
    return {"operator_expansion": a_ok, "eigen_equation": b_ok,
            "negative_level": c_ok, "sign_relation": d_ok}


def assoc_shape_invariance(prob: Problem, n: int) -> DiffOp:
    """Residual of h_{n-1}^dagger h_{n-1} - h_n h_n^dagger - Delta^+_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lo_prev, hi_prev = assoc_ladders(prob, n - 1)
    lo, hi = assoc_ladders(prob, n)
    lhs = hi_prev.compose(lo_prev, prob)
    rhs = lo.compose(hi, prob)
    return lhs.sub(rhs, prob).sub(DiffOp.mul_by(assoc_delta_plus(prob, n)),
                                  prob)


def assoc_three_term(prob: Problem, l: int, m: int) -> tuple[QuasiFunction, QuasiFunction]:
    """Residuals of the two three-term recurrences across (m-1, m, m+1).

    In the unnormalized convention both read (for 1 <= m < l)

        Phi_{l,m+1} + [(m-1)p' + q]/sqrt(p) Phi_lm
                    + lambda_{l,m-1} Phi_{l,m-1} = 0
        Phi_{l,m+1} - [2 sqrt(p) d/dx + (q - p')/sqrt(p)] Phi_lm
                    - lambda_{l,m-1} Phi_{l,m-1} = 0

    They rest on the lowering identity h_{m-1} Phi_lm =
    lambda_{l,m-1} Phi_{l,m-1}, which needs m >= 1; at the m = 0 boundary
    the hierarchy crosses zero through the sign relation only, so both
    residuals reduce to Phi_{l,1} + Phi_{l,-1} with Phi_{l,-1} = -Phi_{l1}.
    """
    if not 0 <= m < l:
        raise RangeError(f"need 0 <= m < l, got m={m}, l={l}")
    phi_up = assoc_bottom_up(prob, l, m + 1).value
    phi = assoc_bottom_up(prob, l, m).value
    if m == 0:
        phi_dn = assoc_bottom_up(prob, l, -1).value
        res = phi_up.add(phi_dn, prob)
        return res, res
    phi_dn = assoc_bottom_up(prob, l, m - 1).value
    wgt = assoc_lambda(prob, l, m - 1)
    pprime = prob.p.derivative()
    half = Fraction(1, 2)
    mid1 = QuasiFunction((m - 1) * pprime + prob.q, -half, 0)
    res1 = phi_up.add(mid1.mul(phi, prob), prob).add(phi_dn.scale(wgt), prob)
    op2 = DiffOp([QuasiFunction(prob.q - pprime, -half, 0),
                  QuasiFunction(Poly.const(2), half, 0)])
    res2 = phi_up.sub(op2.apply(phi, prob), prob).sub(phi_dn.scale(wgt), prob)
    return res1, res2


def principal_form_equivalence(prob: Problem, l: int, m: int) -> dict[str, bool]:
    """h_{2m} h_0^dagger is again a base-type operator; check its faces.

    a: h_{2m} h_0^dagger = -p d^2 - (q + m p') d.
    b: phi_lm = p^(-m/2) Phi_lm solves it with eigenvalue lambda_lm, which
       equals the principal eigenvalue at level l - m of the substituted
       problem (p, q + m p').
    c: conjugating by p^((2m+1)/4) w^(1/2) supersymmetrizes it into
       (-sqrt(p) d/dx + W^a_m)(sqrt(p) d/dx + W^a_m) with
       W^a_m = -[(m - 1/2) p' + q]/(2 sqrt p).
    """
    if abs(m) > l:
        raise RangeError(f"|m| = {abs(m)} exceeds l = {l}")
    m = abs(m)
    pprime = prob.p.derivative()
    lower, _ = assoc_ladders(prob, 2 * m)
    _, raise0 = assoc_ladders(prob, 0)
    op = lower.compose(raise0, prob)
    target = DiffOp([QuasiFunction.zero(),
                     QuasiFunction(-(prob.q + m * pprime)),
                     QuasiFunction(-prob.p)])
    a_ok = op.equals(target, prob)

    lam = assoc_lambda(prob, l, m)
    phi = assoc_bottom_up(prob, l, m).value
    varphi = QuasiFunction(phi.c, phi.s - Fraction(m, 2), phi.e)
    b_ok = op.apply(varphi, prob).eq(varphi.scale(lam), prob)
    sub = Problem(prob.p, prob.q + m * pprime)
    b_ok = b_ok and _entry(sub, "minus", l - m).lam == lam

    s = Fraction(2 * m + 1, 4)
    conj = op.conjugate(s, Fraction(1, 2), prob)
    wam = QuasiFunction(-((m - Fraction(1, 2)) * pprime + prob.q)
                        * Fraction(1, 2), Fraction(-1, 2), 0)
    half = Fraction(1, 2)
    left = DiffOp([wam, QuasiFunction(Poly.const(-1), half, 0)])
    right = DiffOp([wam, QuasiFunction(Poly.const(1), half, 0)])
    c_ok = conj.equals(left.compose(right, prob), prob)
    return {"base_type_product": a_ok, "substituted_eigenvalue": b_ok,
            "supersymmetrized": c_ok}


def standard_hermitian_relation(prob: Problem, l: int) -> bool:
    """Quarter-power bridge between the two factorized Hermitian forms:

    conjugating B_l A_l by w^(1/2) equals conjugating p * (p^(1/4) w^(1/2)
    conjugate of H0) by p^(-1/4), shifted by -p lambda_l + E_l.
    """
    ent = _entry(prob, "minus", l)
    pair = ladder_pair(prob, "minus", l)
    lhs = pair.raise_.compose(pair.lower, prob).conjugate(
        0, Fraction(1, 2), prob)
    inner = hamiltonian(prob).conjugate(Fraction(1, 4), Fraction(1, 2), prob)
    rhs = inner.lmul(QuasiFunction(prob.p), prob).conjugate(
        Fraction(-1, 4), 0, prob)
    rhs = rhs.sub(DiffOp.mul_by(QuasiFunction(prob.p * ent.lam)), prob)
    rhs = rhs.add(DiffOp.mul_by(ent.E), prob)
    return lhs.equals(rhs, prob)


def classify_expanded(op: DiffOp) -> tuple[Problem, int, int, Fraction]:
    """Recover (p, q, m, l, lambda_lm) from an operator H^a_m - lambda_lm.

    The second- and first-order coefficients give p and q directly; the
    association level is the integer m whose characteristic p-denominator
    pattern matches the zeroth-order part, and l follows from the
    eigenvalue formula.
    """
    c2 = op.coeff(2)
    c1 = op.coeff(1)
    if op.order != 2 or c2.s != 0 or c2.e != 0 or c1.e != 0 or c1.s != 0:
        raise ClassifyError("not a hypergeometric-like second-order operator")
    p = -c2.c
    q = -c1.c
    if p.is_zero() or p.degree > 2 or q.degree > 1:
        raise ClassifyError("differential parts do not fit the p/q pattern")
    prob = Problem(p, q)
    c0 = op.coeff(0)
    if c0.e != 0 or c0.s.denominator != 1 or c0.s > 0:
        raise ClassifyError("constant part is not rational in p")
    if p.degree == 0:
        raise ClassifyError("degenerate: m unidentifiable")
    # numerator of the zeroth-order part over p
    num = c0.c * p ** int(c0.s + 1)
    pprime = p.derivative()
    ppp = prob.ppp
    for m in range(0, 129):
        am = Fraction(m, 2) * (p * ppp + (q - pprime) * pprime) \
            + Fraction(m * m, 4) * pprime * pprime
        res = num - am
        try:
            quot = res.exact_div(p)
        except ArithmeticError:
            continue
        if quot.degree > 0:
            continue
        lam = -quot[0]
        for l in range(m, 4097):
            if assoc_lambda(prob, l, m) == lam:
                return prob, m, l, lam
    raise ClassifyError("no integer association level fits")


def pHm_factorization(prob: Problem, l: int, m: int) -> tuple[Fraction, Fraction, bool]:
    """Factor p H^a_m through the shifted principal ladders.

    C_lm = (m/4)(p'(0) q' - p'' q(0)) / c_{l-1} and E_lm close the balance

        p H^a_m - lambda_lm p + E_lm = (B_l + C)(A_l + C),

    returned together with the symbolic verdict of that identity.
    """
    if abs(m) > l:
        raise RangeError(f"|m| = {abs(m)} exceeds l = {l}")
    m = abs(m)
    if m == 0:
        C = Fraction(0)
    else:
        cm = prob.c(l - 1)
        if cm == 0:
            raise Breakdown(l)
        C = Fraction(m, 4) * (prob.pp0 * prob.qp - prob.ppp * prob.q0) / cm
    ent = _entry(prob, "minus", l)
    E_lm = ent.E + C * (C + 2 * ent.beta) \
        + m * (prob.qp + Fraction(m - 2, 2) * prob.ppp) * prob.p0 \
        - Fraction(m, 2) * (prob.q0 + Fraction(m - 2, 2) * prob.pp0) * prob.pp0
    lam = assoc_lambda(prob, l, m)
    lhs = assoc_hamiltonian(prob, m).lmul(QuasiFunction(prob.p), prob)
    lhs = lhs.sub(DiffOp.mul_by(QuasiFunction(prob.p * lam)), prob)
    lhs = lhs.add(DiffOp.mul_by(E_lm), prob)
    pair = ladder_pair(prob, "minus", l)
    shift = DiffOp.mul_by(C)
    rhs = pair.raise_.add(shift, prob).compose(pair.lower.add(shift, prob),
                                               prob)
    return C, E_lm, lhs.equals(rhs, prob)
