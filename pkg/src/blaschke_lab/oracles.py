"""Reference computations that share no code with the double-precision paths.

* closed-form ``|B'(zeta)| = sum_k m_k (1 - |a_k|^2) / |zeta - a_k|^2`` for a
  finite Blaschke product on the circle;
* central finite differences in the real and imaginary directions;
* distortion values in decimal arithmetic at a configurable number of digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction

from .disk_geom import BoundaryPoint, DiskPoint
from .errors import DomainError, FiniteDifferenceMismatch, StepTooLargeNearBoundary, UnsupportedVariant
from .maps import AffineContraction, AtomicSingular, Automorphism, Composition, FiniteBlaschke, Identity, SelfMap

__all__ = [
    "OracleConfig",
    "blaschke_boundary_derivative",
    "extended_precision_one_minus_mod_sq",
    "extended_precision_tau",
    "finite_difference_derivative",
]

_EPS = 2.0**-52


@dataclass(frozen=True)
class OracleConfig:
    precision_digits: int = 50
    fd_step: float = 1e-6

    def __post_init__(self):
        if self.precision_digits < 30:
            raise DomainError("precision_digits must be at least 30")
        if not 0.0 < self.fd_step < 1e-3:
            raise DomainError("fd_step must lie in (0, 1e-3)")


def _zero_list(zeros) -> list[tuple[complex, int]]:
    if isinstance(zeros, FiniteBlaschke):
        zeros = zeros.zeros
    out = []
    for item in zeros:
        point, mult = item if isinstance(item, tuple) else (item, 1)
        a = point.z if isinstance(point, DiskPoint) else complex(point)
        if not abs(a) < 1.0:
            raise DomainError(f"zero {a!r} is not inside the disk")
        out.append((a, int(mult)))
    return out


def blaschke_boundary_derivative(zeros, zeta: BoundaryPoint) -> float:
    """Modulus of the derivative of a finite Blaschke product at a boundary point.

    ``zeros`` is a list of ``(point, multiplicity)`` pairs or a
    :class:`FiniteBlaschke`; the rotation does not affect the modulus.
    """
    w = zeta.zeta
    terms = []
    for a, m in _zero_list(zeros):
        num = 1.0 - (a.real * a.real + a.imag * a.imag)
        diff = w - a
        terms.append(m * num / (diff.real * diff.real + diff.imag * diff.imag))
    return math.fsum(terms)


def finite_difference_derivative(phi: SelfMap, z: DiskPoint, step: float = 1e-6) -> complex:
    """Central differences along the real and the imaginary axis.

    The two quotients must agree (Cauchy-Riemann); the real-direction one is
    returned.
    """
    if 1.0 - abs(z) < 2.0 * step:
        raise StepTooLargeNearBoundary(f"1 - |z| = {1.0 - abs(z):.3g} is below twice the step {step:g}")
    w = z.z
    h = step
    d_re = (phi(w + h) - phi(w - h)) / (2 * h)
    d_im = (phi(w + 1j * h) - phi(w - 1j * h)) / (2j * h)
    # truncation O(h^2) plus cancellation O(eps/h)
    tol = 1e4 * h * h * (1 + abs(d_re)) + 50 * _EPS * (1 + abs(phi(w))) / h
    if abs(d_re - d_im) > tol:
        raise FiniteDifferenceMismatch(f"real/imaginary quotients differ by {abs(d_re - d_im):.3g} at z = {w!r}")
    return d_re


# ---------------------------------------------------------- decimal complex

@dataclass(frozen=True)
class _DC:
    re: Decimal
    im: Decimal

    def __add__(self, o):
        return _DC(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _DC(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _DC(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        den = o.re * o.re + o.im * o.im
        return _DC((self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den)

    def conj(self):
        return _DC(self.re, -self.im)

    def abs2(self) -> Decimal:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


_ZERO = _DC(Decimal(0), Decimal(0))
_ONE = _DC(Decimal(1), Decimal(0))


def _dec(x) -> Decimal:
    """Exact conversion where the input is exact (floats, ints, terminating fractions)."""
    if isinstance(x, Decimal):
        return +x
    if isinstance(x, Fraction):
        return Decimal(x.numerator) / Decimal(x.denominator)
    if isinstance(x, str):
        return _dec(Fraction(x))
    return +Decimal(x)


def _dc(z: complex) -> _DC:
    return _DC(Decimal(z.real), Decimal(z.imag))


def _cos_sin(theta: float) -> _DC:
    x = Decimal(theta)
    # Taylor series; |theta| is at most a few multiples of pi here
    with localcontext() as ctx:
        ctx.prec += 10
        c, s = Decimal(0), Decimal(0)
        term = Decimal(1)
        k = 0
        while True:
            if k % 4 == 0:
                c += term
            elif k % 4 == 1:
                s += term
            elif k % 4 == 2:
                c -= term
            else:
                s -= term
            k += 1
            term = term * x / k
            if term == 0 or abs(term) < Decimal(10) ** (-(ctx.prec + 5)):
                break
    return _DC(+c, +s)


def _hp_eval(phi: SelfMap, w: _DC) -> tuple[_DC, _DC]:
    if isinstance(phi, Identity):
        return w, _ONE
    if isinstance(phi, AffineContraction):
        s = _dc(phi.scale)
        return s * w + _dc(phi.offset), s
    if isinstance(phi, (FiniteBlaschke, Automorphism)):
        if isinstance(phi, Automorphism):
            zeros, plain_zero = [phi.a.z], False
        else:
            zeros, plain_zero = phi.expanded_zeros, True
        vals, ders = [], []
        for a in zeros:
            if a == 0 and plain_zero:
                vals.append(w)
                ders.append(_ONE)
                continue
            ad = _dc(a)
            den = _ONE - ad.conj() * w
            vals.append((ad - w) / den)
            ders.append(_DC(ad.abs2() - 1, Decimal(0)) / (den * den))
        value = _ONE
        for v in vals:
            value = value * v
        der = _ZERO
        for k in range(len(vals)):
            term = ders[k]
            for j, v in enumerate(vals):
                if j != k:
                    term = term * v
            der = der + term
        rot = _cos_sin(phi.rotation)
        return rot * value, rot * der
    if isinstance(phi, Composition):
        v1, d1 = _hp_eval(phi.inner, w)
        v2, d2 = _hp_eval(phi.outer, v1)
        return v2, d2 * d1
    if isinstance(phi, AtomicSingular):
        raise UnsupportedVariant("atomic singular maps are transcendental; no decimal oracle")
    raise UnsupportedVariant(f"no decimal oracle for {type(phi).__name__}")


def _point(z) -> _DC:
    if isinstance(z, DiskPoint):
        return _DC(Decimal(z.re), Decimal(z.im))
    if isinstance(z, complex):
        return _dc(z)
    if isinstance(z, tuple):
        re, im = z
        return _DC(_dec(re), _dec(im))
    return _DC(_dec(z), Decimal(0))


def _round20(x: Decimal) -> str:
    r = Context(prec=20, rounding=ROUND_HALF_EVEN).plus(x)
    if r == 0:
        return "0." + "0" * 19
    decimals = max(0, 19 - r.adjusted())
    if r.adjusted() > 19 or r.adjusted() < -30:
        return f"{r:.19e}"
    return f"{r:.{decimals}f}"


def _hp_parts(phi: SelfMap, z, config: OracleConfig):
    with localcontext() as ctx:
        ctx.prec = config.precision_digits
        w = _point(z)
        om_z = 1 - w.abs2()
        if om_z <= 0:
            raise DomainError("point is not inside the unit disk")
        value, der = _hp_eval(phi, w)
        om_phi = 1 - value.abs2()
        return om_z, om_phi, der.abs2().sqrt()


def extended_precision_one_minus_mod_sq(phi: SelfMap, z, config: OracleConfig = OracleConfig()) -> str:
    """``1 - |phi(z)|^2`` to 20 significant digits."""
    _, om_phi, _ = _hp_parts(phi, z, config)
    return _round20(om_phi)


def extended_precision_tau(phi: SelfMap, z, alpha, config: OracleConfig = OracleConfig()) -> str:
    """Distortion ``tau_alpha`` in decimal arithmetic, correctly rounded to 20 digits.

    ``z`` may be a :class:`DiskPoint` (its doubles are taken exactly), a
    complex, or a pair of exact rationals (``Fraction``, ``int`` or decimal
    strings). ``alpha`` is likewise taken as an exact rational.
    """
    with localcontext() as ctx:
        ctx.prec = config.precision_digits
        om_z, om_phi, dmod = _hp_parts(phi, z, config)
        a = _dec(alpha if not isinstance(alpha, float) else Fraction(alpha))
        if a <= 0:
            raise DomainError("alpha must be positive")
        if dmod == 0:
            return _round20(Decimal(0))
        tau = (om_z / om_phi) ** a * dmod
        return _round20(tau)
