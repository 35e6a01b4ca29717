"""Iterative factorization of -p d^2/dx^2 - q d/dx into first-order ladders.

Both the downward (minus) and upward (plus) branches are built level by
level from recurrences on the linear-superpotential data (alpha_l, beta_l),
together with eigenfunction generation by repeated raising, closed-form
cross-check tables, shape-invariance residuals, three-term recurrences and
the equivalent operator forms.

Ladders are kept unnormalized: the usual 1/sqrt(E_l) factors would leave
the rational field, so the squared norm prod E_j is tracked separately and
all proportionality statements are cross-multiplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Poly, Problem, QuasiFunction, Rational
from .diffop import DiffOp, hamiltonian


class Breakdown(ArithmeticError):
    """A recurrence divisor vanished: the factorization degenerates here."""

    def __init__(self, level: int, message: str = ""):
        self.level = level
        super().__init__(message or f"factorization breaks down at level {level}")


class DegreeError(ArithmeticError):
    """A generated eigenfunction lost its expected leading coefficient."""


class OracleDegenerate(ArithmeticError):
    """Two diagonal eigenvalues coincide; back-substitution is ill-posed."""


@dataclass(frozen=True)
class FactorEntry:
    branch: str            # "minus" or "plus"
    level: int
    alpha: Fraction
    beta: Fraction
    delta: Fraction        # E at this level minus E at the previous level
    E: Fraction
    lam: Fraction


@dataclass(frozen=True)
class LadderPair:
    lower: DiffOp          # A_l = p d/dx - W0 + W_l
    raise_: DiffOp         # B_l = -p d/dx + W0 + W_l


def superpotential_w0(prob: Problem) -> Poly:
    """W0 = (p' - q)/2, the piece common to every ladder."""
    return (prob.p.derivative() - prob.q) * Fraction(1, 2)


def _lambda_minus(prob: Problem, l: int) -> Fraction:
    return -l * prob.qp - Fraction(l * (l - 1), 2) * prob.ppp


def factor_table(prob: Problem, branch: str, max_level: int) -> list[FactorEntry]:
    """Levels 0..max_level (minus) or -1..max_level (plus) by recurrence."""
    if max_level < 0:
        raise ValueError("max_level must be >= 0")
    if branch not in ("minus", "plus"):
        raise ValueError(f"unknown branch {branch!r}")
    half_ppp = Fraction(prob.ppp, 2)
    half_pp0 = Fraction(prob.pp0, 2)
    entries: list[FactorEntry] = []
    if branch == "minus":
        alpha = Fraction(prob.ppp - prob.qp, 2)
        beta = Fraction(prob.pp0 - prob.q0, 2)
        E = lam = Fraction(0)
        entries.append(FactorEntry("minus", 0, alpha, beta, Fraction(0), E, lam))
        for l in range(1, max_level + 1):
            alpha_new = alpha - half_ppp
            if alpha_new == 0:
                raise Breakdown(l)
            beta_new = (alpha * beta - half_pp0 * (alpha_new + alpha)) / alpha_new
            delta = prob.p0 * (alpha_new + alpha) + beta_new ** 2 - beta ** 2
            lam = lam + 2 * alpha_new
            E = E + delta
            alpha, beta = alpha_new, beta_new
            entries.append(FactorEntry("minus", l, alpha, beta, delta, E, lam))
        return entries
    # plus branch, starting at the auxiliary level -1
    shift = prob.ppp - prob.qp
    alpha = Fraction(prob.qp - prob.ppp, 2)
    beta = Fraction(prob.q0 - prob.pp0, 2)
    E = lam = Fraction(0)
    entries.append(FactorEntry("plus", -1, alpha, beta, Fraction(0), E, lam))
    for l in range(0, max_level + 1):
        alpha_new = alpha + half_ppp
        if alpha_new == 0:
            raise Breakdown(l)
        beta_new = (alpha * beta + half_pp0 * (alpha_new + alpha)) / alpha_new
        delta = -prob.p0 * (alpha_new + alpha) + beta_new ** 2 - beta ** 2
        E = E + delta
        lam = _lambda_minus(prob, l) + shift
        alpha, beta = alpha_new, beta_new
        entries.append(FactorEntry("plus", l, alpha, beta, delta, E, lam))
    return entries


def direct_match_table(prob: Problem, max_level: int) -> list[FactorEntry]:
    """Both branches via closed forms; must equal factor_table entry-wise.

    Returned as minus levels 0..max_level followed by plus levels
    -1..max_level.
    """
    if max_level < 0:
        raise ValueError("max_level must be >= 0")
    c = prob.c
    d = prob.d
    p0 = prob.p0
    out: list[FactorEntry] = []
    # minus branch; level 0 comes from the shared initial data because the
    # closed form divides by c_{-1}, which may legitimately vanish there.
    prev_E = Fraction(0)
    for l in range(0, max_level + 1):
        if l == 0:
            alpha = Fraction(prob.ppp - prob.qp, 2)
            beta = Fraction(prob.pp0 - prob.q0, 2)
            E = lam = Fraction(0)
        else:
            cl, cm = c(l), c(l - 1)
            if cm == 0:
                raise Breakdown(l)
            alpha = -cm
            beta = ((l * cl - cm) * d(l - 1) - l * cm * d(l)) / (2 * cm)
            E = l * (d(l - 1) / (4 * cm ** 2)
                     * (2 * cm * d(l) - (cm + cl) * d(l - 1)) - p0) \
                * ((l + 2) * cm - l * cl)
            lam = l * ((l - 1) * cl - (l + 1) * cm)
        out.append(FactorEntry("minus", l, alpha, beta, E - prev_E, E, lam))
        prev_E = E
    shift = prob.ppp - prob.qp
    prev_E = Fraction(0)
    for l in range(-1, max_level + 1):
        if l == -1:
            alpha = Fraction(prob.qp - prob.ppp, 2)
            beta = Fraction(prob.q0 - prob.pp0, 2)
            E = lam = Fraction(0)
        else:
            cl, cm = c(l), c(l - 1)
            if cl == 0:
                raise Breakdown(l)
            alpha = cl
            beta = (-(l + 1) * cl * d(l - 1) + ((l + 1) * cm + cl) * d(l)) \
                / (2 * cl)
            E = (l + 1) * (d(l) / (4 * cl ** 2)
                           * ((cm + cl) * d(l) - 2 * cl * d(l - 1)) - p0) \
                * ((l + 1) * cm - (l - 1) * cl)
            lam = l * ((l - 1) * cl - (l + 1) * cm) + shift
        out.append(FactorEntry("plus", l, alpha, beta, E - prev_E, E, lam))
        prev_E = E
    return out


def _entry(prob: Problem, branch: str, l: int) -> FactorEntry:
    table = factor_table(prob, branch, max(l, 0))
    offset = 1 if branch == "plus" else 0
    return table[l + offset]


def superpotential_wl(prob: Problem, branch: str, l: int) -> Poly:
    """W_l = alpha_l x + beta_l from the branch table."""
    ent = _entry(prob, branch, l)
    return Poly([ent.beta, ent.alpha])


def ladder_pair(prob: Problem, branch: str, l: int) -> LadderPair:
    wl = QuasiFunction(superpotential_wl(prob, branch, l))
    w0 = QuasiFunction(superpotential_w0(prob))
    pd = DiffOp([QuasiFunction.zero(), QuasiFunction(prob.p)])
    lower = pd.add(DiffOp.mul_by(wl).sub(DiffOp.mul_by(w0), prob), prob)
    raise_ = pd.scale(-1).add(DiffOp.mul_by(wl).add(DiffOp.mul_by(w0), prob),
                              prob)
    return LadderPair(lower, raise_)


def principal_eigenfunction(prob: Problem, l: int) -> tuple[Poly, Fraction]:
    """Unnormalized Phi_l = B_l ... B_1 applied to 1, with norm^2 = prod E_j."""
    if l < 0:
        raise ValueError("level must be >= 0")
    table = factor_table(prob, "minus", l)
    phi = QuasiFunction.one()
    normsq = Fraction(1)
    for j in range(1, l + 1):
        bj = ladder_pair(prob, "minus", j).raise_
        phi = bj.apply(phi, prob)
        normsq *= table[j].E
    if phi.s != 0 or phi.e != 0:
        raise DegreeError("raising left the polynomial class")
    if phi.c.degree != l:
        raise DegreeError(f"expected degree {l}, got {phi.c.degree}")
    return phi.c, normsq


def brute_force_eigen_oracle(prob: Problem, l: int) -> tuple[Poly, Fraction]:
    """Independent eigenpair from the upper-triangular monomial action.

    -p d^2 - q d maps degree-k monomials into degree <= k, so eigenvalues
    sit on the diagonal and the eigenvector follows by back-substitution.
    """
    if l < 0:
        raise ValueError("level must be >= 0")
    p2, p1, p0 = prob.p[2], prob.p[1], prob.p[0]
    q1, q0 = prob.q[1], prob.q[0]

    def diag(k: int) -> Fraction:
        return -k * (k - 1) * p2 - k * q1

    lam = diag(l)
    for k in range(l):
        if diag(k) == lam:
            raise OracleDegenerate(
                f"diagonal eigenvalues coincide at degrees {k} and {l}")
    v = [Fraction(0)] * (l + 1)
    v[l] = Fraction(1)
    for k in range(l - 1, -1, -1):
        acc = Fraction(0)
        j = k + 1
        acc += (-j * (j - 1) * p1 - j * q0) * v[j]
        if k + 2 <= l:
            j = k + 2
            acc += -j * (j - 1) * p0 * v[j]
        v[k] = acc / (lam - diag(k))
    return Poly(v), lam


def shape_invariance_check(prob: Problem, branch: str, l: int) -> DiffOp:
    """Residual of the shape-invariance condition; zero operator when it holds.

    minus: A_l B_l - B_{l-1} A_{l-1} - delta_l
    plus:  B_l A_l - A_{l-1} B_{l-1} - delta (with delta = E_l - E_{l-1})
    """
    here = ladder_pair(prob, branch, l)
    prev = ladder_pair(prob, branch, l - 1)
    delta = _entry(prob, branch, l).delta
    if branch == "minus":
        lhs = here.lower.compose(here.raise_, prob)
        rhs = prev.raise_.compose(prev.lower, prob)
    else:
        lhs = here.raise_.compose(here.lower, prob)
        rhs = prev.lower.compose(prev.raise_, prob)
    return lhs.sub(rhs, prob).sub(DiffOp.mul_by(delta), prob)


def three_term_check(prob: Problem, l: int) -> tuple[QuasiFunction, QuasiFunction]:
    """Residuals of the two three-term recurrences in the unnormalized
    convention: with norm^2 tracked outside, both read

        Phi_{l+1} = (W_{l+1} + W_l) Phi_l - E_l Phi_{l-1}
        Phi_{l+1} = (-2 p d/dx + W_{l+1} - W_l + 2 W0) Phi_l + E_l Phi_{l-1}

    with Phi_{-1} = 0.  Both residuals must vanish exactly.
    """
    if l < 0:
        raise ValueError("level must be >= 0")
    phi_next = QuasiFunction(principal_eigenfunction(prob, l + 1)[0])
    phi = QuasiFunction(principal_eigenfunction(prob, l)[0])
    if l == 0:
        phi_prev = QuasiFunction.zero()
        E = Fraction(0)
    else:
        phi_prev = QuasiFunction(principal_eigenfunction(prob, l - 1)[0])
        E = _entry(prob, "minus", l).E
    wl = superpotential_wl(prob, "minus", l)
    wl_next = superpotential_wl(prob, "minus", l + 1)
    w0 = superpotential_w0(prob)
    mid1 = QuasiFunction(wl_next + wl).mul(phi, prob)
    res1 = phi_next.sub(mid1, prob).add(phi_prev.scale(E), prob)
    op2 = DiffOp([QuasiFunction(wl_next - wl + 2 * w0),
                  QuasiFunction(prob.p * (-2))])
    res2 = phi_next.sub(op2.apply(phi, prob), prob).sub(
        phi_prev.scale(E), prob)
    return res1, res2


def hypergeom_like_hl(prob: Problem, l: int) -> DiffOp:
    """H_l = -p d^2/dx^2 + (2 W_l - p') d/dx (minus branch)."""
    wl = superpotential_wl(prob, "minus", l)
    return DiffOp([QuasiFunction.zero(),
                   QuasiFunction(2 * wl - prob.p.derivative()),
                   QuasiFunction(-prob.p)])


def _solve_weight_exponents(prob: Problem, target: Poly):
    """Exponents (s, e) with s p' + e (q - p') = target, or None.

    This is a 2x2 rational linear system in the coefficients of x^1, x^0.
    """
    a = prob.p.derivative()
    b = prob.q - prob.p.derivative()
    det = a[1] * b[0] - a[0] * b[1]
    if det != 0:
        s = (target[1] * b[0] - target[0] * b[1]) / det
        e = (a[1] * target[0] - a[0] * target[1]) / det
        return s, e
    # rank-deficient: try each generator alone
    for s, e, g in ((Fraction(1), Fraction(0), a), (Fraction(0), Fraction(1), b)):
        if not g.is_zero():
            k = target[1] / g[1] if g[1] != 0 else target[0] / g[0]
            if g * k == target:
                return k * s, k * e
    if target.is_zero():
        return Fraction(0), Fraction(0)
    return None


def equivalent_forms_check(prob: Problem, l: int) -> dict[str, bool]:
    """The equivalent operator forms of the factorized eigen-problem.

    a: H0 equals H_l - 2 (W_l - W0) d/dx.
    b: p^-1 A_0 B_0 has eigenvalue lambda^+_l on Phi_l.
    c: lambda^+_l - lambda^-_l = p'' - q' on the tables.
    d: conjugating H0 by u_l^-1 (u_l'/u_l = -(W_l - W0)/p) gives
       H_l + lambda^-_l - E^-_l / p.
    """
    H0 = hamiltonian(prob)
    ent_minus = _entry(prob, "minus", l)
    ent_plus = _entry(prob, "plus", l) if l >= -1 else None
    wl = superpotential_wl(prob, "minus", l)
    w0 = superpotential_w0(prob)
    delta_w = wl - w0
    Hl = hypergeom_like_hl(prob, l)

    first_order = DiffOp([QuasiFunction.zero(),
                          QuasiFunction(delta_w * (-2))])
    a_ok = H0.equals(Hl.add(first_order, prob), prob)

    lam_plus = ent_minus.lam + prob.ppp - prob.qp
    phi = QuasiFunction(principal_eigenfunction(prob, l)[0])
    pair0 = ladder_pair(prob, "minus", 0)
    a0b0 = pair0.lower.compose(pair0.raise_, prob)
    over_p = a0b0.lmul(QuasiFunction(Poly.const(1), -1, 0), prob)
    b_ok = all(c.s >= 0 and c.s.denominator == 1 for c in over_p.coeffs) \
        and over_p.apply(phi, prob).eq(phi.scale(lam_plus), prob)

    c_ok = ent_plus is not None \
        and ent_plus.lam - ent_minus.lam == prob.ppp - prob.qp

    exps = _solve_weight_exponents(prob, -delta_w)
    if exps is None:
        d_ok = False
    else:
        s, e = exps
        lhs = H0.conjugate(-s, -e, prob)
        rhs = Hl.add(DiffOp.mul_by(ent_minus.lam), prob).sub(
            DiffOp.mul_by(QuasiFunction(Poly.const(ent_minus.E), -1, 0)), prob)
        d_ok = lhs.equals(rhs, prob)

    return {"h0_vs_hl": a_ok, "partner_eigenvalue": b_ok,
            "lambda_shift": c_ok, "partial_conjugation": d_ok}
