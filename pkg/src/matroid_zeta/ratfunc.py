"""Exact univariate rational functions with factored linear denominators.

A :class:`RatFunc` is ``scalar * numerator(s) / prod (n*s + k)**mult`` where
the numerator has integer coefficients, content 1 and a positive leading
coefficient, every factor ``(n, k)`` is primitive with ``n, k >= 1``, and no
factor's root ``-k/n`` is a root of the numerator.  That normal form is
unique, so equality is structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

Poly = tuple  # integer or Fraction coefficients, constant term first
Number = Union[int, Fraction]


def _trim(p: Sequence) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_add(p: Sequence, q: Sequence) -> tuple:
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_mul(p: Sequence, q: Sequence) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_scale(p: Sequence, c: Number) -> tuple:
    return _trim([c * a for a in p])


def poly_eval(p: Sequence, x: Number):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def poly_deriv(p: Sequence) -> tuple:
    return _trim([i * p[i] for i in range(1, len(p))])


def poly_pow(p: Sequence, e: int) -> tuple:
    out: tuple = (1,)
    for _ in range(e):
        out = poly_mul(out, p)
    return out


def _divide_linear(p: Sequence[int], n: int, k: int) -> tuple:
    """Exact quotient of ``p`` by ``n*s + k``; caller knows the root divides."""
    # synthetic division from the top coefficient
    deg = len(p) - 1
    q = [0] * deg
    rem = Fraction(p[deg])
    for i in range(deg - 1, -1, -1):
        q[i] = rem / n
        rem = p[i] - k * q[i]
    if rem != 0:
        raise ArithmeticError("non-exact linear division")
    if any(Fraction(c).denominator != 1 for c in q):
        raise ArithmeticError("quotient left the integers")
    return tuple(int(c) for c in q)


class LinearFactor(NamedTuple):
    """``n*s + k`` with positive integers; its root ``-k/n`` is a candidate pole."""

    n: int
    k: int

    @property
    def root(self) -> Fraction:
        return Fraction(-self.k, self.n)

    def primitive(self) -> tuple["LinearFactor", int]:
        g = math.gcd(self.n, self.k)
        return LinearFactor(self.n // g, self.k // g), g

    def poly(self) -> tuple:
        return (self.k, self.n)


def _primitive_part(coeffs: Sequence[Fraction]) -> tuple[Fraction, tuple[int, ...]]:
    """Split rational coefficients into (content, integer primitive poly with lead > 0)."""
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), tuple(c // g for c in ints)


class RatFunc:
    __slots__ = ("scalar", "numerator", "denominator")

    def __init__(self, scalar: Number = 0, numerator: Sequence = (1,),
                 denominator: Mapping[tuple[int, int], int] | Iterable = ()):
        if isinstance(denominator, Mapping):
            items = denominator.items()
        else:
            items = denominator
        den: dict[tuple[int, int], int] = {}
        scalar = Fraction(scalar)
        for key, mult in items:
            n, k = key
            if n < 1 or k < 1 or mult < 0:
                raise ValueError(f"denominator factor ({n}s+{k})^{mult} not admissible")
            f, g = LinearFactor(n, k).primitive()
            scalar /= Fraction(g) ** mult
            den[tuple(f)] = den.get(tuple(f), 0) + mult
        num = _trim(numerator)
        if scalar == 0 or not num:
            self._set(Fraction(0), (1,), ())
            return
        content, prim = _primitive_part(num)
        scalar *= content
        for (n, k), mult in list(den.items()):
            while mult and poly_eval(prim, Fraction(-k, n)) == 0:
                prim = _divide_linear(prim, n, k)
                mult -= 1
            den[(n, k)] = mult
        self._set(scalar, prim, tuple(sorted((LinearFactor(*f), m) for f, m in den.items() if m)))

    def _set(self, scalar, numerator, denominator):
        object.__setattr__(self, "scalar", scalar)
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", denominator)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    # -- constructors -------------------------------------------------------------

    @classmethod
    def constant(cls, q: Number) -> "RatFunc":
        return cls(q)

    @classmethod
    def polynomial(cls, coeffs: Sequence[Number]) -> "RatFunc":
        return cls(1, coeffs)

    @classmethod
    def linear_inverse(cls, n: int, k: int) -> "RatFunc":
        """``1 / (n*s + k)``."""
        return cls(1, (1,), {(n, k): 1})

    @classmethod
    def s(cls) -> "RatFunc":
        return cls.polynomial((0, 1))

    # -- structure ------------------------------------------------------------------

    def _key(self):
        return (self.scalar, self.numerator, self.denominator)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def is_zero(self) -> bool:
        return self.scalar == 0

    def numerator_poly(self) -> tuple:
        """``scalar * numerator`` with rational coefficients."""
        return poly_scale(self.numerator, self.scalar)

    def denominator_poly(self) -> tuple:
        out: tuple = (1,)
        for f, m in self.denominator:
            out = poly_mul(out, poly_pow(f.poly(), m))
        return out

    def poles(self) -> dict[Fraction, int]:
        return {f.root: m for f, m in self.denominator}

    # -- arithmetic -------------------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        d1, d2 = dict(self.denominator), dict(other.denominator)
        common = {f: max(d1.get(f, 0), d2.get(f, 0)) for f in set(d1) | set(d2)}

        def lift(x: RatFunc, d: dict) -> tuple:
            p = x.numerator_poly()
            for f, m in common.items():
                p = poly_mul(p, poly_pow(f.poly(), m - d.get(f, 0)))
            return p

        num = poly_add(lift(self, d1), lift(other, d2))
        return RatFunc(1, num, {tuple(f): m for f, m in common.items()})

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out._set(-self.scalar, self.numerator, self.denominator)
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        den: dict = {}
        for f, m in self.denominator + other.denominator:
            den[tuple(f)] = den.get(tuple(f), 0) + m
        return RatFunc(self.scalar * other.scalar,
                       poly_mul(self.numerator, other.numerator), den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        """Multiplicative inverse.

        Representable only when the numerator splits into admissible linear
        factors ``n*s + k`` with ``n, k >= 1``; otherwise ValueError.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        factors: dict = {}
        rest = self.numerator
        while len(rest) > 1:
            root = _negative_rational_root(rest)
            if root is None:
                raise ValueError(f"numerator {self.numerator} does not split into "
                                 "admissible linear factors")
            n, k = root.denominator, -root.numerator
            rest = _divide_linear(rest, n, k)
            factors[(n, k)] = factors.get((n, k), 0) + 1
        scalar = Fraction(1) / (self.scalar * rest[0])
        return RatFunc(scalar, self.denominator_poly(), factors)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = RatFunc(1)
        for _ in range(e):
            out = out * self
        return out

    # -- evaluation ---------------------------------------------------------------------

    def __call__(self, s: Number) -> Fraction:
        s = Fraction(s)
        d = Fraction(1)
        for f, m in self.denominator:
            d *= (f.n * s + f.k) ** m
        if d == 0:
            raise ZeroDivisionError(f"{s} is a pole")
        return self.scalar * poly_eval(self.numerator, s) / d

    def derivative_at(self, s: Number) -> Fraction:
        """Exact value of d/ds via (N'D - ND') / D^2 on the expanded forms."""
        s = Fraction(s)
        num, den = self.numerator_poly(), self.denominator_poly()
        dv = poly_eval(den, s)
        if dv == 0:
            raise ZeroDivisionError(f"{s} is a pole")
        top = poly_eval(poly_deriv(num), s) * dv - poly_eval(num, s) * poly_eval(poly_deriv(den), s)
        return Fraction(top) / dv ** 2

    # -- rendering ------------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "scalar": str(self.scalar) if self.scalar.denominator != 1 else f"{self.scalar}/1",
            "numerator": list(self.numerator),
            "denominator": [{"n": f.n, "k": f.k, "mult": m} for f, m in self.denominator],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RatFunc":
        return cls(Fraction(data["scalar"]), data["numerator"],
                   {(d["n"], d["k"]): d["mult"] for d in data["denominator"]})

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        num = _poly_str(self.numerator_poly())
        if not self.denominator:
            return num
        den = "*".join(f"({_poly_str(f.poly())})" + (f"^{m}" if m > 1 else "")
                       for f, m in self.denominator)
        if len(self.denominator) > 1:
            den = f"({den})"
        if any(ch in num.lstrip("-") for ch in "+- "):
            num = f"({num})"
        return f"{num}/{den}"

    def to_latex(self) -> str:
        num = _poly_str(self.numerator_poly(), latex=True)
        if not self.denominator:
            return num
        den = "".join(f"({_poly_str(f.poly(), latex=True)})" + (f"^{{{m}}}" if m > 1 else "")
                      for f, m in self.denominator)
        return rf"\frac{{{num}}}{{{den}}}"


def _poly_str(p: Sequence, latex: bool = False) -> str:
    if not p:
        return "0"
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = Fraction(p[i])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if latex and a.denominator != 1:
            coef = rf"\frac{{{a.numerator}}}{{{a.denominator}}}"
        else:
            coef = str(a)
        if i == 0:
            body = coef
        else:
            var = "s" if i == 1 else (f"s^{{{i}}}" if latex else f"s^{i}")
            body = var if a == 1 else (f"{coef}{var}" if latex else f"{coef}*{var}")
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _negative_rational_root(p: Sequence[int]) -> Fraction | None:
    """A root ``-k/n`` with ``n, k >= 1`` of the integer polynomial ``p``, if any."""
    lead, const = abs(p[-1]), abs(p[0])
    if const == 0:
        return None
    for n in _divisors(lead):
        for k in _divisors(const):
            r = Fraction(-k, n)
            if poly_eval(p, r) == 0:
                return r
    return None


def _divisors(m: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))
