"""Exact arithmetic substrate: rationals, univariate polynomials, quasi-functions.

Every symbolic computation in this package runs over ``fractions.Fraction``
(aliased ``Rational``).  A :class:`QuasiFunction` is a product
``c(x) * p(x)**s * w(x)**e`` where ``c`` is a polynomial, ``p`` is the
quadratic coefficient of the operator at hand and ``w`` is its weight,
defined only through the logarithmic derivative ``w'/w = (q - p')/p``.
The class is closed under differentiation, which is all the rest of the
package needs; ``w`` itself is never expanded symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

Scalar = Union[int, Fraction]


class DivisionError(ArithmeticError):
    """Exact polynomial division was requested on a non-divisible pair."""


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"not an exact scalar: {v!r}")


class Poly:
    """Univariate polynomial with Rational coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, v) -> "Poly":
        return cls([_as_fraction(v)])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        raise TypeError(f"cannot combine Poly with {other!r}")

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = x * 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        for k in range(len(rem) - 1, d - 1, -1):
            if rem[k] == 0:
                continue
            f = rem[k] / lead
            q[k - d] = f
            for j, b in enumerate(other.coeffs):
                rem[k - d + j] -= f * b
        return Poly(q), Poly(rem)

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise DivisionError(f"{self} is not divisible by {other}")
        return q

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a * (1 / a.coeffs[-1])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.coeffs[-1])

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{k}")
        return "Poly(" + " + ".join(terms) + ")"


@dataclass(frozen=True)
class Problem:
    """The coefficient pair (p, q) of the operator -p d^2/dx^2 - q d/dx."""

    p: Poly
    q: Poly

    def __post_init__(self):
        if self.p.is_zero():
            raise ValueError("p must be nonzero")
        if self.p.degree > 2:
            raise ValueError("p must have degree <= 2")
        if self.q.degree > 1:
            raise ValueError("q must have degree <= 1")

    # Taylor data of p and q; names follow p'' , p'(0), p(0), q', q(0).
    @property
    def ppp(self) -> Fraction:
        return 2 * self.p[2]

    @property
    def pp0(self) -> Fraction:
        return self.p[1]

    @property
    def p0(self) -> Fraction:
        return self.p[0]

    @property
    def qp(self) -> Fraction:
        return self.q[1]

    @property
    def q0(self) -> Fraction:
        return self.q[0]

    def c(self, l: int) -> Fraction:
        """c_l = (l p'' + q')/2, the arithmetic series driving both branches."""
        return (l * self.ppp + self.qp) / 2

    def d(self, l: int) -> Fraction:
        """d_l = l p'(0) + q(0)."""
        return l * self.pp0 + self.q0


class QuasiFunction:
    """c(x) * p(x)**s * w(x)**e with exact data.

    ``s`` and ``e`` are Rationals; half and quarter powers of p appear in
    the wrapper transformations, half powers of w in the rescalings.  The
    zero function is canonically (0, 0, 0).  Canonical form never keeps a
    full factor of p inside c.
    """

    __slots__ = ("c", "s", "e")

    def __init__(self, c, s=0, e=0):
        if isinstance(c, (int, Fraction)):
            c = Poly.const(c)
        self.c: Poly = c
        self.s: Fraction = _as_fraction(s)
        self.e: Fraction = _as_fraction(e)
        if self.c.is_zero():
            self.s = Fraction(0)
            self.e = Fraction(0)

    @classmethod
    def zero(cls) -> "QuasiFunction":
        return cls(Poly())

    @classmethod
    def one(cls) -> "QuasiFunction":
        return cls(Poly.const(1))

    def is_zero(self) -> bool:
        return self.c.is_zero()

    def canonicalize(self, prob: Problem) -> "QuasiFunction":
        """Absorb every full factor of p from c into the exponent s."""
        if self.c.is_zero():
            return QuasiFunction.zero()
        if prob.p.degree == 0:
            # constant p: fold the integer part of the exponent into c,
            # keeping any fractional remainder in [0, 1)
            k = self.s.numerator // self.s.denominator
            if k == 0:
                return self
            return QuasiFunction(self.c * prob.p[0] ** k, self.s - k, self.e)
        c, s = self.c, self.s
        while True:
            q, r = c.divmod(prob.p)
            if r.is_zero() and not q.is_zero():
                c, s = q, s + 1
            else:
                break
        return QuasiFunction(c, s, self.e)

    def derive(self, prob: Problem) -> "QuasiFunction":
        """d/dx of c p^s w^e, using w'/w = (q - p')/p.

        The result is [c' p + s c p' + e c (q - p')] p^(s-1) w^e,
        canonicalized.
        """
        pprime = prob.p.derivative()
        num = self.c.derivative() * prob.p \
            + self.s * self.c * pprime \
            + self.e * self.c * (prob.q - pprime)
        return QuasiFunction(num, self.s - 1, self.e).canonicalize(prob)

    def mul(self, other: "QuasiFunction", prob: Problem) -> "QuasiFunction":
        if self.is_zero() or other.is_zero():
            return QuasiFunction.zero()
        return QuasiFunction(self.c * other.c, self.s + other.s,
                             self.e + other.e).canonicalize(prob)

    def scale(self, k) -> "QuasiFunction":
        return QuasiFunction(self.c * _as_fraction(k), self.s, self.e)

    def add(self, other: "QuasiFunction", prob: Problem) -> "QuasiFunction":
        """Exact sum; both terms must share e and differ in s by an integer."""
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.e != other.e:
            raise ValueError("cannot add quasi-functions with different w powers")
        ds = self.s - other.s
        if ds.denominator != 1:
            raise ValueError("cannot add quasi-functions with incommensurate p powers")
        s0 = min(self.s, other.s)
        c = self.c * prob.p ** int(self.s - s0) \
            + other.c * prob.p ** int(other.s - s0)
        return QuasiFunction(c, s0, self.e).canonicalize(prob)

    def sub(self, other: "QuasiFunction", prob: Problem) -> "QuasiFunction":
        return self.add(other.scale(-1), prob)

    def eq(self, other: "QuasiFunction", prob: Problem) -> bool:
        try:
            return self.sub(other, prob).is_zero()
        except ValueError:
            return False

    def proportional(self, other: "QuasiFunction", prob: Problem):
        """Nonzero rational ratio self/other, or None if not proportional.

        Cross-multiplied comparison: no roots or floats involved.
        """
        if self.is_zero() or other.is_zero():
            return None
        a = self.canonicalize(prob)
        b = other.canonicalize(prob)
        if a.e != b.e or a.s != b.s:
            return None
        ka = a.c.coeffs[-1]
        kb = b.c.coeffs[-1]
        if a.c * kb == b.c * ka:
            return ka / kb
        return None

    def __repr__(self):
        return f"QuasiFunction({self.c!r}, s={self.s}, e={self.e})"


def quasi_derive(f: QuasiFunction, prob: Problem) -> QuasiFunction:
    return f.derive(prob)


def quasi_canonicalize(f: QuasiFunction, prob: Problem) -> QuasiFunction:
    return f.canonicalize(prob)
