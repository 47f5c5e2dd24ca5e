"""Exact scalars in cyclotomic fields.

A value is stored as rational coefficients of 1, z, ..., z^(n-1) where
z = exp(2*pi*i/n), i.e. as a polynomial taken modulo z^n - 1.  Addition and
multiplication work directly on that representation; equality, zero tests and
inversion reduce modulo the n-th cyclotomic polynomial first, which gives the
canonical coordinates in the field Q(z).  Values of different orders are
compared and combined by lifting both to the least common multiple order.

Coefficients may be Python ints or Fractions; integer coefficients are kept
as ints so that the common all-integer case stays cheap.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .errors import DivisionByZero

__all__ = ["Cyc", "cyclotomic_poly", "zeta", "cyc"]

Rational = (int, Fraction)


def _coerce(value):
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def _divide_monic(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Exact division by a monic integer polynomial; remainder must vanish.
    num = list(num)
    d = len(den) - 1
    out = [0] * (len(num) - d)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + d]
        out[i] = c
        if c:
            for j in range(d + 1):
                num[i + j] -= c * den[j]
    if any(num):
        raise ArithmeticError("division was not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant first."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _divide_monic(poly, cyclotomic_poly(d))
    return tuple(poly)


def _reduce(order: int, coeffs) -> tuple:
    """Canonical coordinates of the value in the power basis of Q(zeta_order)."""
    phi = cyclotomic_poly(order)
    deg = len(phi) - 1
    work = list(coeffs)
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            work[i] = 0
            base = i - deg
            for j in range(deg):
                work[base + j] -= c * phi[j]
    return tuple(work[:deg])


def _poly_divmod(a: list, b: list):
    # Division in Q[x]; b need not be monic.  Inputs are not modified.
    r = list(a)
    q = [Fraction(0)] * max(1, len(r) - len(b) + 1)
    lead = Fraction(b[-1])
    for i in range(len(r) - len(b), -1, -1):
        c = Fraction(r[i + len(b) - 1]) / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                r[i + j] -= c * bj
    while len(r) > 1 and not r[-1]:
        r.pop()
    return q, r


class Cyc:
    """An exact element of a cyclotomic field."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        coeffs = tuple(_coerce(c) for c in coeffs)
        if order < 1:
            raise ValueError("order must be positive")
        if len(coeffs) != order:
            raise ValueError(f"expected {order} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Cyc values are immutable")

    @classmethod
    def from_rational(cls, value) -> "Cyc":
        return cls(1, (_coerce(value),))

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "Cyc":
        co = [0] * order
        co[power % order] = 1
        return cls(order, co)

    def lift(self, order: int) -> "Cyc":
        """Rewrite the value in the field of the given multiple order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("can only lift to a multiple of the order")
        step = order // self.order
        co = [0] * order
        for a, c in enumerate(self.coeffs):
            if c:
                co[a * step] = c
        return Cyc(order, co)

    # -- arithmetic ---------------------------------------------------------

    def _pair(self, other):
        if not isinstance(other, Cyc):
            other = Cyc.from_rational(other)
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyc(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyc(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Cyc(self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return Cyc(self.order, (0,) * self.order)
            return Cyc(self.order, tuple(c * other for c in self.coeffs))
        if not isinstance(other, Cyc):
            return NotImplemented
        a, b = self._pair(other)
        n = a.order
        out = [0] * n
        for i, ci in enumerate(a.coeffs):
            if ci:
                for j, cj in enumerate(b.coeffs):
                    if cj:
                        k = i + j
                        if k >= n:
                            k -= n
                        out[k] += ci * cj
        return Cyc(n, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = Cyc.from_rational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if not other:
                raise DivisionByZero("cannot divide by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Cyc):
            return self * other.inv()
        return NotImplemented

    def conj(self) -> "Cyc":
        """Complex conjugate, i.e. z -> z^(n-1) on the stored basis."""
        n = self.order
        co = [0] * n
        for a, c in enumerate(self.coeffs):
            if c:
                co[(-a) % n] = c
        return Cyc(n, co)

    def inv(self) -> "Cyc":
        n = self.order
        a = [c for c in _reduce(n, self.coeffs)]
        while len(a) > 1 and not a[-1]:
            a.pop()
        if not any(a):
            raise DivisionByZero("cannot invert zero")
        phi = list(cyclotomic_poly(n))
        # Extended Euclid in Q[x]: maintain r = u * a (mod phi).
        r0, u0 = phi, [Fraction(0)]
        r1, u1 = [Fraction(c) for c in a], [Fraction(1)]
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            u_next = list(u0) + [Fraction(0)] * max(0, len(q) + len(u1) - 1 - len(u0))
            for i, qi in enumerate(q):
                if qi:
                    for j, uj in enumerate(u1):
                        u_next[i + j] -= qi * uj
            while len(u_next) > 1 and not u_next[-1]:
                u_next.pop()
            r0, u0, r1, u1 = r1, u1, rem, u_next
        g = Fraction(r1[0])
        if not g:
            raise DivisionByZero("cannot invert zero")
        co = [0] * n
        for i, c in enumerate(u1):
            if c:
                co[i] = c / g
        return Cyc(n, co)

    # -- predicates and conversions -----------------------------------------

    def is_zero(self) -> bool:
        if not any(self.coeffs):
            return True
        return not any(_reduce(self.order, self.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = Cyc.from_rational(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def reduced(self) -> "Cyc":
        """The same value with canonically reduced coefficients."""
        red = _reduce(self.order, self.coeffs)
        co = list(red) + [0] * (self.order - len(red))
        return Cyc(self.order, co)

    def as_fraction(self):
        """The value as a Fraction if it is rational, else None."""
        red = _reduce(self.order, self.coeffs)
        if any(red[1:]):
            return None
        return Fraction(red[0])

    def as_int(self):
        f = self.as_fraction()
        if f is None or f.denominator != 1:
            return None
        return int(f)

    def to_complex(self) -> complex:
        total = 0j
        n = self.order
        for a, c in enumerate(self.coeffs):
            if c:
                total += complex(c) * cmath.exp(2j * cmath.pi * a / n)
        return total

    def __repr__(self):
        f = self.as_fraction()
        if f is not None:
            return str(f)
        red = _reduce(self.order, self.coeffs)
        parts = []
        for a, c in enumerate(red):
            if not c:
                continue
            if a == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"z{self.order}^{a}" if a > 1 else f"z{self.order}")
            else:
                parts.append(f"{c}*z{self.order}^{a}" if a > 1 else f"{c}*z{self.order}")
        return " + ".join(parts).replace("+ -", "- ")


def zeta(order: int, power: int = 1) -> Cyc:
    """Root of unity exp(2*pi*i*power/order)."""
    return Cyc.zeta(order, power)


def cyc(value) -> Cyc:
    """Coerce a rational number (or Cyc) to a Cyc value."""
    if isinstance(value, Cyc):
        return value
    return Cyc.from_rational(value)
