"""Geometry of the unit disk.

Points of the open disk, boundary points stored by angle, Stolz (non-tangential)
approach regions and the hyperbolic densities ``(1 - |z|^2)^-alpha``.

The quantity ``1 - |z|^2`` is the base of every density and distortion value in
the package. It is evaluated from the stored coordinates with error-free
products and exact summation, so it is correctly rounded even when ``|z|`` is
within a few ulps of 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "BoundaryPoint",
    "DiskPoint",
    "StolzRegion",
    "hyperbolic_density",
    "one_minus_mod_sq",
    "quasi_random_points",
    "stolz_contains",
    "two_product",
]

TWO_PI = 2.0 * math.pi
_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_product(a: float, b: float) -> tuple[float, float]:
    """Return ``(p, e)`` with ``p = fl(a*b)`` and ``a*b = p + e`` exactly."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def exact_one_minus_sq(x: float, y: float) -> float:
    """Correctly rounded ``1 - x^2 - y^2`` for doubles ``x``, ``y``."""
    xx, xe = two_product(x, x)
    yy, ye = two_product(y, y)
    return math.fsum((1.0, -xx, -xe, -yy, -ye))


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk."""

    re: float
    im: float

    def __post_init__(self):
        re, im = float(self.re), float(self.im)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise DomainError(f"non-finite coordinates ({re!r}, {im!r})")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        if exact_one_minus_sq(re, im) <= 0.0:
            raise DomainError(f"point {re!r}{im:+}i is not inside the unit disk")

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(z.real, z.imag)

    @classmethod
    def polar(cls, radius: float, angle: float) -> "DiskPoint":
        return cls(radius * math.cos(angle), radius * math.sin(angle))

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)


@dataclass(frozen=True)
class BoundaryPoint:
    """The boundary point ``exp(i*angle)``; the angle is reduced to ``[0, 2*pi)``."""

    angle: float

    def __post_init__(self):
        a = float(self.angle)
        if not math.isfinite(a):
            raise DomainError(f"non-finite boundary angle {a!r}")
        a = math.fmod(a, TWO_PI)
        if a < 0.0:
            a += TWO_PI
        if a >= TWO_PI:
            a = 0.0
        object.__setattr__(self, "angle", a)

    @property
    def zeta(self) -> complex:
        return complex(math.cos(self.angle), math.sin(self.angle))

    def angular_distance(self, other: "BoundaryPoint") -> float:
        d = abs(self.angle - other.angle)
        return min(d, TWO_PI - d)


@dataclass(frozen=True)
class StolzRegion:
    """``{z : |vertex - z| <= aperture * (1 - |z|^2)}``."""

    vertex: BoundaryPoint
    aperture: float

    def __post_init__(self):
        if not self.aperture > 1.0:
            raise DomainError(f"Stolz aperture must exceed 1, got {self.aperture!r}")

    def contains(self, z: DiskPoint) -> bool:
        return stolz_contains(self, z)


def one_minus_mod_sq(z: DiskPoint) -> float:
    """``1 - |z|^2``, correctly rounded and strictly positive."""
    return exact_one_minus_sq(z.re, z.im)


def hyperbolic_density(z: DiskPoint, alpha: float) -> float:
    """Density ``(1 - |z|^2)^-alpha`` of the alpha-hyperbolic metric."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    return one_minus_mod_sq(z) ** (-alpha)


def stolz_contains(region: StolzRegion, z: DiskPoint) -> bool:
    zeta = region.vertex.zeta
    dist = math.hypot(zeta.real - z.re, zeta.imag - z.im)
    return dist <= region.aperture * one_minus_mod_sq(z)


_PLASTIC = 1.32471795724474602596  # R2 low-discrepancy sequence constant


def quasi_random_points(n: int, seed: int = 0, boundary_fraction: float = 0.5) -> list[DiskPoint]:
    """Deterministic low-discrepancy sample of the disk.

    A ``1 - boundary_fraction`` share is area-uniform; the remainder has
    ``1 - |z|`` log-uniform in ``[1e-12, 1e-1]`` so the sample reaches deep
    into the boundary layer.
    """
    a1 = 1.0 / _PLASTIC
    a2 = 1.0 / (_PLASTIC * _PLASTIC)
    shift = (seed * 0.6180339887498949) % 1.0
    n_edge = int(round(n * boundary_fraction))
    out = []
    for k in range(n):
        u = (shift + (k + 1) * a1) % 1.0
        v = (0.5 * shift + (k + 1) * a2) % 1.0
        angle = TWO_PI * v
        if k < n - n_edge:
            radius = math.sqrt(u) * (1.0 - 1e-15)
        else:
            radius = 1.0 - 10.0 ** (-1.0 - 11.0 * u)
        out.append(DiskPoint.polar(radius, angle))
    return out
