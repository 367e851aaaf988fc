"""Truncated Taylor arithmetic.

A :class:`Taylor` holds normalized coefficients ``c[k] = f^(k)(t) / k!`` of a
function around a point.  Coefficients may be Python scalars, ``Fraction``
objects or numpy arrays; with arrays one object carries the expansion at every
sample of a grid at once.  :class:`Jet3` is the order-3 view in derivative
form ``(f, f', f'', f''')``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Real

import numpy as np


class DomainError(ArithmeticError):
    """A function was evaluated outside its domain (or its jets are undefined there)."""


def _any(cond) -> bool:
    return bool(np.any(cond))


def _div(a, b):
    """``a / b`` that keeps integer operands exact."""
    if isinstance(a, Integral) and isinstance(b, Integral):
        q = Fraction(int(a), int(b))
        return q.numerator if q.denominator == 1 else q
    return a / b


class Taylor:
    """Truncated power series in ``(t - t0)``, all orders up to ``order``."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(coeffs)
        if not self.c:
            raise ValueError("a Taylor series needs at least one coefficient")

    # -- construction -----------------------------------------------------
    @classmethod
    def variable(cls, t, order: int) -> "Taylor":
        return cls((t, 1) + (0,) * (order - 1)) if order >= 1 else cls((t,))

    @classmethod
    def constant(cls, value, order: int) -> "Taylor":
        return cls((value,) + (0,) * order)

    @classmethod
    def from_derivatives(cls, derivs) -> "Taylor":
        return cls(_div(d, math.factorial(k)) if k > 1 else d for k, d in enumerate(derivs))

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value(self):
        return self.c[0]

    def derivatives(self) -> tuple:
        """Derivative values ``f^(k)`` for ``k = 0..order``."""
        return tuple(c * math.factorial(k) if k > 1 else c for k, c in enumerate(self.c))

    def truncate(self, order: int) -> "Taylor":
        return Taylor(self.c[: order + 1])

    def deriv(self) -> "Taylor":
        """Series of the derivative (one order lower)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 series")
        return Taylor((k + 1) * self.c[k + 1] for k in range(self.order))

    def integrate(self, c0) -> "Taylor":
        """Antiderivative with constant term ``c0`` (one order higher)."""
        return Taylor((c0,) + tuple(_div(c, k + 1) for k, c in enumerate(self.c)))

    def __repr__(self) -> str:
        return f"Taylor({list(self.c)!r})"

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Taylor":
        if isinstance(other, Taylor):
            return other
        if isinstance(other, Jet3):
            return other.to_taylor()
        return Taylor.constant(other, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return Taylor(a + b for a, b in zip(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return Taylor(-a for a in self.c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        return Taylor(a - b for a, b in zip(self.c, o.c))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Taylor, Jet3)):
            return Taylor(a * other for a in self.c)
        a, b = self.c, self._coerce(other).c
        n = min(len(a), len(b))
        out = []
        for k in range(n):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * b[k - j]
            out.append(acc)
        return Taylor(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (Taylor, Jet3)):
            if _any(np.asarray(other) == 0):
                raise DomainError("division by zero")
            return Taylor(_div(a, other) for a in self.c)
        a, b = self.c, self._coerce(other).c
        if _any(np.asarray(b[0]) == 0):
            raise DomainError("division by zero")
        n = min(len(a), len(b))
        q = []
        for k in range(n):
            acc = a[k]
            for j in range(1, k + 1):
                acc = acc - b[j] * q[k - j]
            q.append(_div(acc, b[0]))
        return Taylor(q)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, p):
        if isinstance(p, Taylor):
            return exp(p * log(self))
        if isinstance(p, Integral) or (isinstance(p, Real) and float(p).is_integer()
                                       and abs(p) < 2**31):
            return self._ipow(int(p))
        return self._rpow(float(p))

    def _ipow(self, n: int) -> "Taylor":
        if n < 0:
            return 1 / self._ipow(-n)
        result = Taylor.constant(1, self.order)
        base = self
        # square-and-multiply keeps exact types (ints, Fractions) exact
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _rpow(self, p: float) -> "Taylor":
        a = self.c
        if _any(np.asarray(a[0]) <= 0):
            raise DomainError("non-integer power of a non-positive base")
        y = [np.power(a[0], p)]
        for k in range(1, len(a)):
            acc = 0
            for j in range(1, k + 1):
                acc = acc + (p * j - (k - j)) * a[j] * y[k - j]
            y.append(acc / (k * a[0]))
        return Taylor(y)


# -- elementary functions ---------------------------------------------------

def _sincos(a: Taylor, hyperbolic: bool = False) -> tuple[Taylor, Taylor]:
    c = a.c
    if hyperbolic:
        s, co = [np.sinh(c[0])], [np.cosh(c[0])]
    else:
        s, co = [np.sin(c[0])], [np.cos(c[0])]
    sign = 1 if hyperbolic else -1
    for k in range(1, len(c)):
        ds = 0
        dc = 0
        for j in range(1, k + 1):
            ds = ds + j * c[j] * co[k - j]
            dc = dc + j * c[j] * s[k - j]
        s.append(ds / k)
        co.append(sign * dc / k)
    return Taylor(s), Taylor(co)


def sin(a: Taylor) -> Taylor:
    return _sincos(a)[0]


def cos(a: Taylor) -> Taylor:
    return _sincos(a)[1]


def tan(a: Taylor) -> Taylor:
    s, c = _sincos(a)
    if _any(np.asarray(c.c[0]) == 0):
        raise DomainError("tan at a pole")
    return s / c


def sinh(a: Taylor) -> Taylor:
    return _sincos(a, hyperbolic=True)[0]


def cosh(a: Taylor) -> Taylor:
    return _sincos(a, hyperbolic=True)[1]


def tanh(a: Taylor) -> Taylor:
    s, c = _sincos(a, hyperbolic=True)
    return s / c


def exp(a: Taylor) -> Taylor:
    c = a.c
    e = [np.exp(c[0])]
    for k in range(1, len(c)):
        acc = 0
        for j in range(1, k + 1):
            acc = acc + j * c[j] * e[k - j]
        e.append(acc / k)
    return Taylor(e)


def log(a: Taylor) -> Taylor:
    c = a.c
    if _any(np.asarray(c[0]) <= 0):
        raise DomainError("log of a non-positive value")
    out = [np.log(c[0])]
    for k in range(1, len(c)):
        acc = 0
        for j in range(1, k):
            acc = acc + j * out[j] * c[k - j]
        out.append((c[k] - acc / k) / c[0])
    return Taylor(out)


def sqrt(a: Taylor) -> Taylor:
    c = a.c
    if _any(np.asarray(c[0]) < 0):
        raise DomainError("sqrt of a negative value")
    if len(c) > 1 and _any(np.asarray(c[0]) == 0):
        raise DomainError("sqrt has unbounded derivatives at 0")
    r = [np.sqrt(c[0])]
    for k in range(1, len(c)):
        acc = c[k]
        for j in range(1, k):
            acc = acc - r[j] * r[k - j]
        r.append(acc / (2 * r[0]))
    return Taylor(r)


def fabs(a: Taylor) -> Taylor:
    v = np.asarray(a.c[0])
    if _any(v == 0):
        raise DomainError("abs is not differentiable at 0")
    return a * np.sign(a.c[0])


def reverse(series: Taylor) -> Taylor:
    """Compositional inverse around the expansion point.

    ``series`` expands ``X(t0 + u) = X0 + a1 u + a2 u^2 + ...``.  Returns the
    expansion of ``t(X0 + v) = t0 + b1 v + ...`` with ``t0`` left as 0; the
    caller adds the base point.  Requires ``a1 != 0``.
    """
    a = series.c
    K = series.order
    if _any(np.asarray(a[1]) == 0):
        raise DomainError("series is not locally invertible (zero slope)")
    b = [0, _div(1, a[1])] + [0] * (K - 1)
    for n in range(2, K + 1):
        u = Taylor(b)
        # coefficient n of sum_{k>=2} a_k u^k; b_n only enters via a_1 b_n
        acc = 0
        power = u * u
        for k in range(2, n + 1):
            acc = acc + a[k] * power.c[n]
            power = power * u
        b[n] = _div(-acc, a[1])
    return Taylor(b)


@dataclass(frozen=True)
class Jet3:
    """Value and first three derivatives of a scalar function at a point."""

    v0: object
    v1: object = 0
    v2: object = 0
    v3: object = 0

    @classmethod
    def variable(cls, t) -> "Jet3":
        return cls(t, 1, 0, 0)

    @classmethod
    def from_taylor(cls, series: Taylor) -> "Jet3":
        d = series.derivatives() + (0,) * max(0, 3 - series.order)
        return cls(*d[:4])

    def to_taylor(self) -> Taylor:
        return Taylor.from_derivatives((self.v0, self.v1, self.v2, self.v3))

    def as_tuple(self) -> tuple:
        return (self.v0, self.v1, self.v2, self.v3)

    def _lift(self, other) -> Taylor:
        if isinstance(other, Jet3):
            return other.to_taylor()
        if isinstance(other, Taylor):
            return other.truncate(3)
        return Taylor.constant(other, 3)

    def __add__(self, o):
        return Jet3.from_taylor(self.to_taylor() + self._lift(o))

    __radd__ = __add__

    def __sub__(self, o):
        return Jet3.from_taylor(self.to_taylor() - self._lift(o))

    def __rsub__(self, o):
        return Jet3.from_taylor(self._lift(o) - self.to_taylor())

    def __neg__(self):
        return Jet3(-self.v0, -self.v1, -self.v2, -self.v3)

    def __mul__(self, o):
        return Jet3.from_taylor(self.to_taylor() * self._lift(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Jet3.from_taylor(self.to_taylor() / self._lift(o))

    def __rtruediv__(self, o):
        return Jet3.from_taylor(self._lift(o) / self.to_taylor())

    def __pow__(self, p):
        return Jet3.from_taylor(self.to_taylor() ** p)
