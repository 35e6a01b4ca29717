"""Constant-p degeneracy: collapsed ladders and (quasi-)Hermite generation.

When p is a positive constant the associated hierarchy collapses onto the
principal one: every H^a_m equals H_0, all shape-invariance constants
coincide with -q', and the ladder pairs lose their level dependence.  The
eigen-structure is then the Hermite family (q' < 0), its non-normalizable
quasi-Hermite mirror (q' > 0), or the linear/free leftovers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Poly, Problem
from .diffop import DiffOp
from .associated import assoc_bottom_up, assoc_delta_plus, assoc_lambda
from .principal import _entry, ladder_pair, principal_eigenfunction


@dataclass(frozen=True)
class DegeneracyReport:
    is_degenerate: bool
    subcase: Optional[str]                       # hermite | quasi_hermite | linear | free
    # affine map x = sqrt(radicand) * t + shift onto the xi/zeta coordinate
    scaling: Optional[tuple[Fraction, Fraction]]


def detect(prob: Problem) -> DegeneracyReport:
    """Degenerate iff p is a positive constant; classify by the sign of q'."""
    if prob.p.degree != 0 or prob.p0 <= 0:
        return DegeneracyReport(False, None, None)
    qp, q0 = prob.qp, prob.q0
    if qp == 0:
        return DegeneracyReport(True, "free" if q0 == 0 else "linear", None)
    subcase = "hermite" if qp < 0 else "quasi_hermite"
    radicand = (-2 if qp < 0 else 2) * prob.p0 / qp
    return DegeneracyReport(True, subcase, (radicand, -q0 / qp))


def hermite_operator() -> tuple[Poly, Poly]:
    """(p, q) of the scaled Hermite operator -d^2/dxi^2 + 2 xi d/dxi."""
    return Poly.const(1), Poly([0, -2])


def hermite_generate(l: int) -> tuple[Poly, Fraction]:
    """Unnormalized Hermite polynomial B^l 1 with B = -d/dxi + 2 xi.

    Returns (polynomial, Lambda_l = l); the operator -d^2 + 2 xi d/dxi has
    the eigenvalue 2 Lambda_l on it.
    """
    if l < 0:
        raise ValueError("level must be >= 0")
    h = Poly.const(1)
    two_xi = Poly([0, 2])
    for _ in range(l):
        h = -h.derivative() + two_xi * h
    return h, Fraction(l)


def quasi_hermite_generate(l: int) -> tuple[Poly, Fraction]:
    """Unnormalized quasi-Hermite polynomial D^l 1 with D = -d/dzeta - 2 zeta.

    Returns (polynomial, eigenvalue -2l of -d^2 - 2 zeta d/dzeta).  These
    solutions are not normalizable against e^(zeta^2); that divergence is a
    documented property, not an error.
    """
    if l < 0:
        raise ValueError("level must be >= 0")
    h = Poly.const(1)
    two_zeta = Poly([0, 2])
    for _ in range(l):
        h = -h.derivative() - two_zeta * h
    return h, Fraction(-2 * l)


def collapse_check(prob: Problem, l: int, m: int, depth: int = 10) -> dict[str, bool]:
    """How the associated hierarchy collapses when p is constant.

    eigenvalue:   lambda_lm = lambda^-_(l-m)
    eigenfunction: the polynomial part of Phi_lm is proportional to Phi_(l-m)
    deltas:       every Delta^+_n equals -q'
    ladders:      the principal ladder pair is the same at every level
    """
    if not detect(prob).is_degenerate:
        raise ValueError("problem is not degenerate")
    if not 0 <= m <= l:
        raise ValueError("need 0 <= m <= l")
    lam_ok = assoc_lambda(prob, l, m) == _entry(prob, "minus", l - m).lam

    phi_lm = assoc_bottom_up(prob, l, m).value
    phi_base, _ = principal_eigenfunction(prob, l - m)
    from .core import QuasiFunction
    ratio = QuasiFunction(phi_lm.c).proportional(QuasiFunction(phi_base), prob)
    fun_ok = ratio is not None

    delta_ok = all(assoc_delta_plus(prob, n) == -prob.qp
                   for n in range(1, depth + 1))

    base = ladder_pair(prob, "minus", 0)
    ladder_ok = all(
        ladder_pair(prob, "minus", j).lower.equals(base.lower, prob)
        and ladder_pair(prob, "minus", j).raise_.equals(base.raise_, prob)
        for j in range(1, depth + 1))
    return {"eigenvalue": lam_ok, "eigenfunction": fun_ok,
            "deltas": delta_ok, "ladders": ladder_ok}
