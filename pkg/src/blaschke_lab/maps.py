"""Catalog of analytic self-maps of the unit disk.

Every map evaluates ``phi(z)``, ``phi'(z)`` and ``1 - |phi(z)|^2`` together.
The last one is never formed by subtracting ``|phi(z)|^2`` from 1 when a
cancellation-free route exists:

* a Blaschke factor ``b_a(z) = (a - z) / (1 - conj(a) z)`` satisfies
  ``1 - |b_a(z)|^2 = (1 - |a|^2)(1 - |z|^2) / |1 - conj(a) z|^2``;
* a finite product sums ``log1p(-(1 - |b_k|^2))`` and returns ``-expm1`` of it;
* an atomic singular inner function has ``|S|^2 = exp(-2 sum s_k P_k)`` with the
  Poisson kernel ``P_k = (1 - |z|^2) / |zeta_k - z|^2``;
* an affine map is evaluated in exact rational arithmetic.

Maps are immutable; evaluation is pure and thread-safe.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

from .disk_geom import BoundaryPoint, DiskPoint, exact_one_minus_sq, one_minus_mod_sq, quasi_random_points
from .dual import Dual, dexp
from .errors import DomainError, MapSpecError, OverflowNearSingularity

__all__ = [
    "AffineContraction",
    "AtomicSingular",
    "Automorphism",
    "Composition",
    "FiniteBlaschke",
    "Identity",
    "MapValue",
    "SelfMap",
    "blaschke_truncation",
    "catalog",
    "declared_singular_support",
    "dual_derivative",
    "evaluate",
    "from_spec",
    "load_spec",
    "parse_spec",
    "stable_one_minus_mod_sq",
]

SINGULAR_GUARD = 1e-14
CONSTRUCTION_SAMPLES = 1000


@dataclass(frozen=True)
class MapValue:
    value: complex
    derivative: complex
    one_minus_mod_sq_value: float


class SelfMap:
    """Base class of the map catalog.

    Subclasses implement ``_eval(w, omw)`` where ``omw = 1 - |w|^2`` is known to
    full relative precision, and ``formula(x)`` which writes the map with plain
    arithmetic so it can be pushed through dual numbers.
    """

    def _eval(self, w: complex, omw: float) -> tuple[complex, complex, float]:
        raise NotImplementedError

    def formula(self, x):
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError

    def singular_support(self) -> list[BoundaryPoint]:
        return []

    def evaluate(self, z: DiskPoint) -> MapValue:
        return evaluate(self, z)

    def __call__(self, z: complex) -> complex:
        return self._eval(complex(z), exact_one_minus_sq(z.real, z.imag))[0]


def _as_disk_point(a) -> DiskPoint:
    if isinstance(a, DiskPoint):
        return a
    return DiskPoint.from_complex(complex(a))


def _unit(theta: float) -> complex:
    return complex(math.cos(theta), math.sin(theta))


def _blaschke_factor(a: complex, om_a: float, w: complex, omw: float):
    """Value, derivative and ``1 - |b|^2`` of ``(a - w)/(1 - conj(a) w)``."""
    if a == 0:
        return -w, -1 + 0j, omw
    d = 1 - a.conjugate() * w
    val = (a - w) / d
    der = -om_a / (d * d)
    om = om_a * omw / (d.real * d.real + d.imag * d.imag)
    return val, der, om


@dataclass(frozen=True)
class FiniteBlaschke(SelfMap):
    """``exp(i*rotation) * prod_k b_{a_k}(z)`` with ``b_0(z) = z``.

    ``zeros`` holds ``(point, multiplicity)`` pairs; multiplicities are expanded
    to repeated factors internally.
    """

    zeros: tuple
    rotation: float = 0.0
    _factors: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        normalized = []
        for item in self.zeros:
            if isinstance(item, tuple):
                point, mult = item
            else:
                point, mult = item, 1
            if int(mult) != mult or mult < 1:
                raise DomainError(f"zero multiplicity must be a positive integer, got {mult!r}")
            normalized.append((_as_disk_point(point), int(mult)))
        if not normalized:
            raise DomainError("a finite Blaschke product needs at least one zero (constants are excluded)")
        object.__setattr__(self, "zeros", tuple(normalized))
        object.__setattr__(self, "rotation", float(self.rotation))
        factors = []
        for point, mult in normalized:
            factors.extend([(point.z, one_minus_mod_sq(point))] * mult)
        object.__setattr__(self, "_factors", tuple(factors))

    @property
    def degree(self) -> int:
        return len(self._factors)

    @property
    def expanded_zeros(self) -> list[complex]:
        return [a for a, _ in self._factors]

    def _eval(self, w, omw):
        vals, ders = [], []
        log_mod_sq = 0.0
        for a, om_a in self._factors:
            # zero factors are written as plain z, matching the normal form
            if a == 0:
                v, d, u = w, 1 + 0j, omw
            else:
                v, d, u = _blaschke_factor(a, om_a, w, omw)
            vals.append(v)
            ders.append(d)
            if u >= 1.0:
                log_mod_sq = -math.inf
            elif log_mod_sq > -math.inf:
                log_mod_sq += math.log1p(-u)
        n = len(vals)
        prefix = [1 + 0j] * (n + 1)
        for k in range(n):
            prefix[k + 1] = prefix[k] * vals[k]
        suffix = 1 + 0j
        der = 0j
        for k in range(n - 1, -1, -1):
            der += prefix[k] * ders[k] * suffix
            suffix *= vals[k]
        rot = _unit(self.rotation)
        om = 1.0 if log_mod_sq == -math.inf else -math.expm1(log_mod_sq)
        return rot * prefix[n], rot * der, om

    def formula(self, x):
        out = _unit(self.rotation)
        for a, _ in self._factors:
            out = out * (x if a == 0 else (a - x) / (1 - a.conjugate() * x))
        return out

    def to_spec(self):
        return {
            "type": "blaschke",
            "zeros": [{"re": p.re, "im": p.im, "mult": m} for p, m in self.zeros],
            "rotation": self.rotation,
        }


@dataclass(frozen=True)
class Automorphism(SelfMap):
    """``exp(i*rotation) * (a - z) / (1 - conj(a) z)``."""

    a: DiskPoint
    rotation: float = 0.0
    _om_a: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", _as_disk_point(self.a))
        object.__setattr__(self, "rotation", float(self.rotation))
        object.__setattr__(self, "_om_a", one_minus_mod_sq(self.a))

    def _eval(self, w, omw):
        v, d, om = _blaschke_factor(self.a.z, self._om_a, w, omw)
        rot = _unit(self.rotation)
        return rot * v, rot * d, om

    def formula(self, x):
        a = self.a.z
        return _unit(self.rotation) * (a - x) / (1 - a.conjugate() * x)

    def to_spec(self):
        return {"type": "automorphism", "a": {"re": self.a.re, "im": self.a.im}, "rotation": self.rotation}


@dataclass(frozen=True)
class AtomicSingular(SelfMap):
    """``exp(-sum_k s_k (zeta_k + z) / (zeta_k - z))`` for atoms ``(zeta_k, s_k)``."""

    atoms: tuple

    def __post_init__(self):
        normalized = []
        for point, mass in self.atoms:
            if not isinstance(point, BoundaryPoint):
                point = BoundaryPoint(point)
            mass = float(mass)
            if not (mass > 0 and math.isfinite(mass)):
                raise DomainError(f"atom mass must be positive and finite, got {mass!r}")
            normalized.append((point, mass))
        if not normalized:
            raise DomainError("an atomic singular function needs at least one atom")
        object.__setattr__(self, "atoms", tuple(normalized))

    def _eval(self, w, omw):
        expo = 0j
        dexpo = 0j
        poisson = 0.0
        for point, mass in self.atoms:
            zeta = point.zeta
            diff = zeta - w
            dist_sq = diff.real * diff.real + diff.imag * diff.imag
            if dist_sq < SINGULAR_GUARD * SINGULAR_GUARD:
                raise OverflowNearSingularity(
                    f"|zeta - z| = {math.sqrt(dist_sq):.3g} below guard {SINGULAR_GUARD:g} "
                    f"at atom angle {point.angle!r}"
                )
            expo -= mass * (zeta + w) / diff
            dexpo -= 2.0 * mass * zeta / (diff * diff)
            poisson += mass * omw / dist_sq
        # log|S| = -poisson; taking it from the complex quotient instead would use the
        # rounded |zeta| != 1 and drift from 1 - |S|^2 by far more than eps near an atom
        val = cmath.exp(complex(-poisson, expo.imag)) if poisson < 745.0 else 0j
        return val, val * dexpo, -math.expm1(-2.0 * poisson)

    def formula(self, x):
        total = 0
        for point, mass in self.atoms:
            zeta = point.zeta
            total = total - mass * (zeta + x) / (zeta - x)
        return dexp(total) if isinstance(total, Dual) else cmath.exp(total)

    def singular_support(self):
        return [p for p, _ in self.atoms]

    def to_spec(self):
        return {"type": "atomic_singular", "atoms": [{"angle": p.angle, "mass": s} for p, s in self.atoms]}


@dataclass(frozen=True)
class AffineContraction(SelfMap):
    """``scale * z + offset`` with ``0 < |scale|`` and ``|scale| + |offset| <= 1``."""

    scale: complex
    offset: complex = 0j

    def __post_init__(self):
        scale, offset = complex(self.scale), complex(self.offset)
        if abs(scale) == 0:
            raise DomainError("affine contraction must be non-constant (scale != 0)")
        # |s| + |o| <= 1 in exact arithmetic, up to the rounding of the two moduli
        if abs(scale) + abs(offset) > 1.0 + 4 * 2.0 ** -52:
            raise DomainError(f"|scale| + |offset| = {abs(scale) + abs(offset)!r} exceeds 1")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "offset", offset)

    def _eval(self, w, omw):
        s, o = self.scale, self.offset
        sr, si, o_r, oi = Fraction(s.real), Fraction(s.imag), Fraction(o.real), Fraction(o.imag)
        wr, wi = Fraction(w.real), Fraction(w.imag)
        re = sr * wr - si * wi + o_r
        im = sr * wi + si * wr + oi
        om = float(1 - re * re - im * im)
        if om <= 0.0:
            # only reachable when the rounded inner value of a composition sits on the circle
            om = math.ulp(0.0)
        return s * w + o, s, om

    def formula(self, x):
        return self.scale * x + self.offset

    def to_spec(self):
        s, o = self.scale, self.offset
        return {"type": "affine", "scale": {"re": s.real, "im": s.imag}, "offset": {"re": o.real, "im": o.imag}}


@dataclass(frozen=True)
class Identity(SelfMap):
    def _eval(self, w, omw):
        return w, 1 + 0j, omw

    def formula(self, x):
        return x

    def to_spec(self):
        return {"type": "identity"}


@dataclass(frozen=True)
class Composition(SelfMap):
    """``outer(inner(z))``.

    Built from self-maps it is a self-map; the construction-time sample is a
    guard against malformed trees, not a proof.
    """

    outer: SelfMap
    inner: SelfMap
    check_seed: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        for name in ("outer", "inner"):
            if not isinstance(getattr(self, name), SelfMap):
                raise DomainError(f"composition {name} must be a SelfMap")
        for z in quasi_random_points(CONSTRUCTION_SAMPLES, seed=self.check_seed, boundary_fraction=0.0):
            v, _, om = self._eval(z.z, one_minus_mod_sq(z))
            if not (abs(v) < 1.0 and om > 0.0):
                raise DomainError(f"composition leaves the disk at z = {z.z!r}")

    def _eval(self, w, omw):
        v1, d1, om1 = self.inner._eval(w, omw)
        v2, d2, om2 = self.outer._eval(v1, om1)
        return v2, d2 * d1, om2

    def formula(self, x):
        return self.outer.formula(self.inner.formula(x))

    def singular_support(self):
        seen = []
        for p in self.outer.singular_support() + self.inner.singular_support():
            if p not in seen:
                seen.append(p)
        return seen

    def to_spec(self):
        return {"type": "compose", "outer": self.outer.to_spec(), "inner": self.inner.to_spec()}


def evaluate(phi: SelfMap, z: DiskPoint) -> MapValue:
    """``phi(z)``, ``phi'(z)`` (closed forms) and the stable ``1 - |phi(z)|^2``."""
    v, d, om = phi._eval(z.z, one_minus_mod_sq(z))
    return MapValue(v, d, om)


def stable_one_minus_mod_sq(phi: SelfMap, z: DiskPoint) -> float:
    return phi._eval(z.z, one_minus_mod_sq(z))[2]


def dual_derivative(phi: SelfMap, z: DiskPoint) -> complex:
    """Forward-mode derivative through dual numbers; independent of the closed forms."""
    return phi.formula(Dual(z.z, 1 + 0j)).der


def declared_singular_support(phi: SelfMap) -> list[BoundaryPoint]:
    return phi.singular_support()


def blaschke_truncation(n: int, rotation: float = 0.0) -> FiniteBlaschke:
    """Finite truncation with zeros ``a_k = 1 - 2^-k``, ``k = 1..n``."""
    if n < 1:
        raise DomainError("truncation needs n >= 1")
    return FiniteBlaschke([(1.0 - 2.0 ** -k, 1) for k in range(1, n + 1)], rotation)


def catalog() -> dict[str, SelfMap]:
    """Named fixtures spanning every variant."""
    square = FiniteBlaschke([(0j, 2)])
    two = FiniteBlaschke([0j, 0.5])
    three = FiniteBlaschke([0.3 + 0.4j, -0.6, 0.1 - 0.7j], rotation=0.7)
    four = FiniteBlaschke([0.9 * _unit(1.0), -0.2 + 0.1j, 0.4 - 0.4j, 0.6j])
    six = FiniteBlaschke([0.7 * _unit(math.pi * k / 3 + 0.2) for k in range(6)], rotation=-1.3)
    atom = AtomicSingular([(BoundaryPoint(0.0), 1.0)])
    return {
        "identity": Identity(),
        "square": square,
        "blaschke_two": two,
        "blaschke_three": three,
        "blaschke_four": four,
        "blaschke_six": six,
        "truncation_5": blaschke_truncation(5),
        "automorphism_half": Automorphism(DiskPoint(0.5, 0.0)),
        "automorphism_rotated": Automorphism(DiskPoint(0.3, -0.6), rotation=1.0),
        "automorphism_edge": Automorphism(DiskPoint(0.99999, 0.0)),
        "atomic_one": atom,
        "atomic_two": AtomicSingular([(BoundaryPoint(math.pi / 2), 0.5), (BoundaryPoint(4.0), 2.0)]),
        "affine_half": AffineContraction(0.5, 0.5),
        "affine_inner": AffineContraction(0.5 + 0.1j, 0.3j),
        "compose_blaschke_atomic": Composition(two, AtomicSingular([(BoundaryPoint(math.pi / 2), 1.0)])),
        "compose_automorphism_square": Composition(Automorphism(DiskPoint(-0.4, 0.2), rotation=0.3), square),
        "compose_blaschke_affine": Composition(three, AffineContraction(0.6, -0.2 + 0.1j)),
    }


# ---------------------------------------------------------------- map specs

def _num(node: Any, path: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise MapSpecError(f"expected a number, got {node!r}", path)
    if not math.isfinite(node):
        raise MapSpecError("expected a finite number", path)
    return float(node)


def _obj(node: Any, path: str, required: Iterable[str]) -> dict:
    if not isinstance(node, dict):
        raise MapSpecError(f"expected an object, got {type(node).__name__}", path or "<root>")
    for key in required:
        if key not in node:
            raise MapSpecError("missing required field", _join(path, key))
    return node


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _complex(node: Any, path: str) -> complex:
    node = _obj(node, path, ("re", "im"))
    return complex(_num(node["re"], _join(path, "re")), _num(node["im"], _join(path, "im")))


def _list(node: Any, path: str) -> list:
    if not isinstance(node, list):
        raise MapSpecError(f"expected a list, got {type(node).__name__}", path)
    return node


def from_spec(spec: Any, path: str = "", seed: int = 0) -> SelfMap:
    """Build a map from its JSON-compatible description.

    Raises :class:`MapSpecError` naming the offending field on any malformed
    entry or invariant violation.
    """
    spec = _obj(spec, path, ("type",))
    kind = spec["type"]
    try:
        if kind == "identity":
            return Identity()
        if kind == "blaschke":
            zeros = []
            for i, item in enumerate(_list(spec.get("zeros"), _join(path, "zeros"))):
                ipath = f"{_join(path, 'zeros')}[{i}]"
                item = _obj(item, ipath, ("re", "im"))
                mult = item.get("mult", 1)
                if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
                    raise MapSpecError(f"multiplicity must be a positive integer, got {mult!r}", _join(ipath, "mult"))
                try:
                    point = DiskPoint(_num(item["re"], _join(ipath, "re")), _num(item["im"], _join(ipath, "im")))
                except DomainError as exc:
                    raise MapSpecError(str(exc), ipath) from exc
                zeros.append((point, mult))
            if not zeros:
                raise MapSpecError("at least one zero is required (constant maps are excluded)", _join(path, "zeros"))
            return FiniteBlaschke(zeros, _num(spec.get("rotation", 0.0), _join(path, "rotation")))
        if kind == "automorphism":
            a = _complex(spec.get("a"), _join(path, "a"))
            try:
                point = DiskPoint.from_complex(a)
            except DomainError as exc:
                raise MapSpecError(str(exc), _join(path, "a")) from exc
            return Automorphism(point, _num(spec.get("rotation", 0.0), _join(path, "rotation")))
        if kind == "atomic_singular":
            atoms = []
            for i, item in enumerate(_list(spec.get("atoms"), _join(path, "atoms"))):
                ipath = f"{_join(path, 'atoms')}[{i}]"
                item = _obj(item, ipath, ("angle", "mass"))
                mass = _num(item["mass"], _join(ipath, "mass"))
                if mass <= 0:
                    raise MapSpecError("mass must be positive", _join(ipath, "mass"))
                atoms.append((BoundaryPoint(_num(item["angle"], _join(ipath, "angle"))), mass))
            if not atoms:
                raise MapSpecError("at least one atom is required", _join(path, "atoms"))
            return AtomicSingular(atoms)
        if kind == "affine":
            scale = _complex(spec.get("scale"), _join(path, "scale"))
            offset = _complex(spec.get("offset", {"re": 0.0, "im": 0.0}), _join(path, "offset"))
            return AffineContraction(scale, offset)
        if kind == "compose":
            _obj(spec, path, ("outer", "inner"))
            outer = from_spec(spec["outer"], _join(path, "outer"), seed)
            inner = from_spec(spec["inner"], _join(path, "inner"), seed)
            return Composition(outer, inner, check_seed=seed)
    except DomainError as exc:
        raise MapSpecError(str(exc), path or "<root>") from exc
    raise MapSpecError(f"unknown map type {kind!r}", _join(path, "type"))


def parse_spec(text: str, seed: int = 0) -> SelfMap:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapSpecError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_spec(data, seed=seed)


def load_spec(path: str | Path, seed: int = 0) -> SelfMap:
    return parse_spec(Path(path).read_text(encoding="utf-8"), seed=seed)
