"""Complex dual numbers for forward-mode differentiation of analytic maps."""

from __future__ import annotations

import cmath
from dataclasses import dataclass


@dataclass(frozen=True)
class Dual:
    """``val + der * eps`` with ``eps**2 = 0``; both parts complex."""

    val: complex
    der: complex = 0j

    @staticmethod
    def lift(x) -> "Dual":
        return x if isinstance(x, Dual) else Dual(complex(x), 0j)

    def __add__(self, other):
        o = Dual.lift(other)
        return Dual(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __sub__(self, other):
        o = Dual.lift(other)
        return Dual(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        return Dual.lift(other) - self

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __mul__(self, other):
        o = Dual.lift(other)
        return Dual(self.val * o.val, self.val * o.der + self.der * o.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Dual.lift(other)
        if o.val == 0:
            raise ZeroDivisionError("dual division by a number with zero real part")
        q = self.val / o.val
        return Dual(q, (self.der - q * o.der) / o.val)

    def __rtruediv__(self, other):
        return Dual.lift(other) / self


def dexp(x: Dual) -> Dual:
    e = cmath.exp(x.val)
    return Dual(e, e * x.der)


def derivative(f, z: complex) -> complex:
    """``f'(z)`` for ``f`` written with ``+ - * /`` and :func:`dexp`."""
    return f(Dual(complex(z), 1 + 0j)).der
