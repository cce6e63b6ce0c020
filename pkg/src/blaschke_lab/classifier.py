"""Boundary diagnostics for finite Blaschke products.

A non-constant self-map is a finite Blaschke product exactly when, for some
weight ``alpha != 1`` and some ``c > 0``, the distortion ``tau_alpha`` is
bounded on the disk and its angular liminf is at least ``c`` at almost every
boundary point. :func:`classify` checks both conditions at finite resolution:

* boundedness from the growth of circle-wise suprema on shells
  ``r_m = 1 - 2^-m``;
* "almost every boundary point" as an equispaced sample with small balls around
  the declared singular support removed, refined by doubling to expose a
  liminf that drifts to zero.

The classical weight ``alpha = 1`` is handled by the separate scans
:func:`heins_scan` (unrestricted limit), :func:`arc_scan` (arc-local limits)
and :func:`kraus_scan` (angular limits almost everywhere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from ._parallel import ordered_map
from .boundary import (
    AngularDerivativeEstimate,
    LimitEstimate,
    Marker,
    estimate_angular_derivative,
    estimate_angular_limit,
    estimate_angular_liminf,
    fit_tail,
    from_json_float,
    json_float,
    make_paths,
)
from .disk_geom import TWO_PI, BoundaryPoint, DiskPoint
from .distortion import jc_quotient, tau_value
from .errors import AlphaExcluded, DomainError, EvaluationOverflow
from .maps import SelfMap, declared_singular_support, evaluate

__all__ = [
    "BoundaryProfile",
    "BoundarySampling",
    "BoundednessReport",
    "ClassificationVerdict",
    "ClassifyConfig",
    "KrausReport",
    "ArcPoint",
    "Reason",
    "Verdict",
    "angular_derivative_bound",
    "arc_scan",
    "boundary_profile",
    "boundedness_scan",
    "check_angular_derivative_bound",
    "classify",
    "heins_scan",
    "kraus_scan",
    "liminf_scan",
    "shell_extrema",
]

EXCLUSION_RADIUS = 1e-3
GROWTH_RATIO = 1.2
PLATEAU = 0.05
WINDOW = 5
LIMIT_TOL = 1e-4


class Verdict(str, Enum):
    FINITE_BLASCHKE_CONSISTENT = "FiniteBlaschkeConsistent"
    REJECTED = "Rejected"
    INCONCLUSIVE = "Inconclusive"


class Reason(str, Enum):
    LIMINF_FAILS = "LiminfFails"
    TAU_UNBOUNDED = "TauUnbounded"


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be positive and finite, got {alpha!r}")
    if abs(alpha - 1.0) < 1e-9:
        raise AlphaExcluded(
            "alpha = 1 is excluded: with the classical weight the boundary criterion holds for every "
            "inner function with finite angular derivatives almost everywhere, a strictly larger class "
            "than the finite Blaschke products; use heins_scan/kraus_scan for alpha = 1"
        )
    return alpha


# ---------------------------------------------------------------- sampling

@dataclass(frozen=True)
class BoundarySampling:
    """Equispaced angles ``2 pi k / count`` minus balls around excluded points."""

    count: int
    excluded: tuple = ()
    exclusion_radius: float = EXCLUSION_RADIUS
    points: tuple = field(default=(), compare=False)
    indices: tuple = field(default=(), compare=False)

    @classmethod
    def equispaced(cls, count: int, excluded: Sequence[BoundaryPoint] = (), exclusion_radius: float = EXCLUSION_RADIUS):
        if count < 1:
            raise DomainError(f"boundary sample count must be >= 1, got {count!r}")
        excluded = tuple(excluded)
        points, indices = [], []
        for k in range(count):
            p = BoundaryPoint(TWO_PI * k / count)
            if any(p.angular_distance(e) < exclusion_radius for e in excluded):
                continue
            points.append(p)
            indices.append(k)
        return cls(count, excluded, exclusion_radius, tuple(points), tuple(indices))

    @classmethod
    def for_map(cls, phi: SelfMap, count: int, exclusion_radius: float = EXCLUSION_RADIUS):
        return cls.equispaced(count, declared_singular_support(phi), exclusion_radius)

    def contiguous(self, start: int, length: int) -> "BoundarySampling":
        """Sub-sample of grid indices ``start .. start + length - 1`` (mod count)."""
        keep = {(start + j) % self.count for j in range(length)}
        pairs = [(p, k) for p, k in zip(self.points, self.indices) if k in keep]
        return replace(self, points=tuple(p for p, _ in pairs), indices=tuple(k for _, k in pairs))


# ------------------------------------------------------------ boundedness

@dataclass(frozen=True)
class BoundednessReport:
    shell_sups: tuple
    verdict: str
    sup_estimate: float | None = None
    growth_rate: float | None = None
    overflow: bool = False

    @property
    def bounded(self) -> bool:
        return self.verdict == "Bounded"

    def growth_factors(self) -> list[float]:
        sups = [s for _, s in self.shell_sups]
        return [b / a if a > 0 else math.inf for a, b in zip(sups, sups[1:])]

    def to_dict(self) -> dict:
        return {
            "shell_sups": [[r, json_float(s)] for r, s in self.shell_sups],
            "verdict": self.verdict,
            "sup_estimate": json_float(self.sup_estimate),
            "growth_rate": json_float(self.growth_rate),
            "overflow": self.overflow,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundednessReport":
        return cls(
            shell_sups=tuple((r, from_json_float(s)) for r, s in data["shell_sups"]),
            verdict=data["verdict"],
            sup_estimate=from_json_float(data["sup_estimate"]),
            growth_rate=from_json_float(data["growth_rate"]),
            overflow=data["overflow"],
        )


def _circle_candidates(radius: float, resolution: int, support: Sequence[BoundaryPoint]):
    """Grid angles plus a geometric ladder towards each singular atom.

    Features near an atom live on scales between ``1 - r`` and ``O(1)``; an
    equispaced grid alone cannot see them on deep shells.
    """
    h = TWO_PI / resolution
    cands = [(TWO_PI * k / resolution, h) for k in range(resolution)]
    gap = 1.0 - radius
    for atom in support:
        delta = gap
        while delta < h:
            step = delta * (math.sqrt(2.0) - 1.0)
            cands.append((atom.angle + delta, step))
            cands.append((atom.angle - delta, step))
            delta *= math.sqrt(2.0)
    return cands


def _circle_extremum(f, radius: float, resolution: int, support, sign: float) -> tuple[float, float]:
    """Max (``sign = 1``) or min (``sign = -1``) of ``f`` on a circle, refined 4x twice."""
    best_val, best_angle, best_h = -math.inf, 0.0, TWO_PI / resolution
    for angle, h in _circle_candidates(radius, resolution, support):
        v = sign * f(DiskPoint.polar(radius, angle))
        if v > best_val:
            best_val, best_angle, best_h = v, angle, h
    for _ in range(2):
        h = best_h / 4.0
        center = best_angle
        for k in (-4, -3, -2, -1, 1, 2, 3, 4):
            angle = center + k * h
            v = sign * f(DiskPoint.polar(radius, angle))
            if v > best_val:
                best_val, best_angle = v, angle
        best_h = h
    return sign * best_val, best_angle


def shell_extrema(phi: SelfMap, alpha: float, radius: float, resolution: int = 256) -> tuple[float, float]:
    """``(min, max)`` of ``tau_alpha`` on the circle ``|z| = radius``."""
    support = declared_singular_support(phi)
    f = lambda z: tau_value(phi, z, alpha)  # noqa: E731
    lo, _ = _circle_extremum(f, radius, resolution, support, -1.0)
    hi, _ = _circle_extremum(f, radius, resolution, support, 1.0)
    return lo, hi


def boundedness_scan(
    phi: SelfMap, alpha: float, shells: int = 30, angular_resolution: int = 256
) -> BoundednessReport:
    """Suprema of ``tau_alpha`` on the circles ``r_m = 1 - 2^-m``, ``m = 1..shells``.

    Unbounded when each of the last five suprema exceeds its predecessor by a
    factor of at least 1.2; Bounded when the last five agree within 5% of their
    maximum or stay below 1.05 times the largest earlier supremum; Inconclusive
    otherwise. An overflow on any shell is Unbounded.
    """
    if shells < 8:
        raise DomainError(f"boundedness scan needs at least 8 shells, got {shells!r}")
    support = declared_singular_support(phi)
    f = lambda z: tau_value(phi, z, alpha)  # noqa: E731

    def sup_on(m):
        r = 1.0 - 2.0**-m
        try:
            return r, _circle_extremum(f, r, angular_resolution, support, 1.0)[0]
        except EvaluationOverflow:
            return r, None

    rows = ordered_map(sup_on, range(1, shells + 1))
    finite = []
    for r, s in rows:
        if s is None:
            return BoundednessReport(tuple(finite), "Unbounded", None, None, True)
        finite.append((r, s))
    sups = [s for _, s in finite]
    last = sups[-(WINDOW + 1):]
    factors = [b / a if a > 0 else math.inf for a, b in zip(last, last[1:])]
    if all(x >= GROWTH_RATIO for x in factors):
        rate = math.exp(sum(math.log(x) for x in factors) / len(factors))
        return BoundednessReport(tuple(finite), "Unbounded", None, rate)
    tail = sups[-WINDOW:]
    top = max(tail)
    earlier = max(sups[:-WINDOW], default=0.0)
    # a plateau, or a tail that sets no new high (decay towards 0 included)
    if top - min(tail) <= PLATEAU * top or top <= (1.0 + PLATEAU) * earlier:
        return BoundednessReport(tuple(finite), "Bounded", max(sups), None)
    return BoundednessReport(tuple(finite), "Inconclusive", None, None)


# ------------------------------------------------------------ liminf scan

@dataclass(frozen=True)
class ClassifyConfig:
    gamma: float = 2.0
    boundary_points: int = 64
    shells: int = 30
    depth: int = 40
    rays: int = 3
    t0: float = 0.5
    tail: int = 8
    c_min: float = 1e-3
    angular_resolution: int = 256
    refinements: int = 2
    exclusion_radius: float = EXCLUSION_RADIUS


def _tau_liminf(phi, alpha, zeta, gamma, rays, depth, t0, tail) -> LimitEstimate:
    paths = make_paths(zeta, gamma, rays, depth, t0)
    return estimate_angular_liminf(lambda z: tau_value(phi, z, alpha), paths, tail)


def _c_of(estimates) -> float:
    vals = [e.value for e in estimates if e.is_finite]
    if not vals:
        return math.inf
    return max(0.0, min(vals))


def liminf_scan(
    phi: SelfMap,
    alpha: float,
    sampling: BoundarySampling,
    gamma: float = 2.0,
    rays: int = 3,
    depth: int = 40,
    t0: float = 0.5,
    tail: int = 8,
) -> tuple[float, list[tuple[BoundaryPoint, LimitEstimate]]]:
    """Smallest angular liminf of ``tau_alpha`` over the sample.

    Points whose estimate is unbounded do not lower the constant; they are
    evidence against boundedness, which is checked separately. Negative
    extrapolations of a non-negative quantity are clamped to 0.
    """
    alpha = _check_alpha(alpha)
    ests = ordered_map(lambda p: _tau_liminf(phi, alpha, p, gamma, rays, depth, t0, tail), sampling.points)
    return _c_of(ests), list(zip(sampling.points, ests))


def angular_derivative_bound(alpha: float, c: float) -> float:
    """Upper bound ``2 (1/c)^(1/(alpha-1))`` on ``|phi'|`` implied by a liminf floor ``c``."""
    if not alpha > 1.0:
        raise DomainError("the angular derivative bound needs alpha > 1")
    if not c > 0.0:
        raise DomainError("the angular derivative bound needs c > 0")
    return 2.0 * (1.0 / c) ** (1.0 / (alpha - 1.0))


@dataclass(frozen=True)
class ClassificationVerdict:
    alpha: float
    c_estimate: float
    boundedness: BoundednessReport
    per_point: tuple
    verdict: Verdict
    reason: Reason | None = None
    derived_bound: float | None = None
    boundary_points: int = 0
    refinement: tuple = ()
    c_min: float = 1e-3
    gamma: float = 2.0

    @property
    def label(self) -> str:
        """``Verdict`` or ``Verdict(Reason)``, e.g. ``Rejected(LiminfFails)``."""
        return f"{self.verdict.value}({self.reason.value})" if self.reason else self.verdict.value

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "verdict": self.verdict.value,
            "reason": self.reason.value if self.reason else None,
            "c_estimate": json_float(self.c_estimate),
            "c_min": self.c_min,
            "derived_bound": json_float(self.derived_bound),
            "boundary_points": self.boundary_points,
            "gamma": self.gamma,
            "refinement": [[m, json_float(c)] for m, c in self.refinement],
            "boundedness": self.boundedness.to_dict(),
            "per_point": [{"angle": p.angle, "liminf": est.to_dict()} for p, est in self.per_point],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassificationVerdict":
        return cls(
            alpha=data["alpha"],
            c_estimate=from_json_float(data["c_estimate"]),
            boundedness=BoundednessReport.from_dict(data["boundedness"]),
            per_point=tuple(
                (BoundaryPoint(row["angle"]), LimitEstimate.from_dict(row["liminf"])) for row in data["per_point"]
            ),
            verdict=Verdict(data["verdict"]),
            reason=Reason(data["reason"]) if data["reason"] else None,
            derived_bound=from_json_float(data["derived_bound"]),
            boundary_points=data["boundary_points"],
            refinement=tuple((m, from_json_float(c)) for m, c in data["refinement"]),
            c_min=data["c_min"],
            gamma=data["gamma"],
        )


def _decays(levels: Sequence[float]) -> bool:
    """Liminf constant at least halving at every doubling of the sample."""
    if len(levels) < 3:
        return False
    return all(b <= 0.5 * a for a, b in zip(levels, levels[1:]))


def classify(phi: SelfMap, alpha: float, config: ClassifyConfig = ClassifyConfig()) -> ClassificationVerdict:
    """Finite-resolution check of the finite-Blaschke boundary criterion at weight ``alpha``.

    The liminf scan runs on ``boundary_points * 2^refinements`` angles; the
    reported ``c_estimate`` is the minimum over the base grid and the finer
    levels only serve as a stability check. The verdict is Rejected(LiminfFails)
    when a finer level drops below ``c_min`` or the constant keeps halving
    under refinement.
    """
    alpha = _check_alpha(alpha)
    cfg = config
    boundedness = boundedness_scan(phi, alpha, cfg.shells, cfg.angular_resolution)

    factor = 2**cfg.refinements
    fine = BoundarySampling.equispaced(
        cfg.boundary_points * factor, declared_singular_support(phi), cfg.exclusion_radius
    )
    _, rows = liminf_scan(phi, alpha, fine, cfg.gamma, cfg.rays, cfg.depth, cfg.t0, cfg.tail)
    by_index = dict(zip(fine.indices, rows))
    levels = []
    for level in range(cfg.refinements + 1):
        stride = 2 ** (cfg.refinements - level)
        ests = [est for k, (_, est) in by_index.items() if k % stride == 0]
        levels.append((cfg.boundary_points * 2**level, _c_of(ests)))
    # base-grid angles on the coarse formula, as BoundarySampling.equispaced(M) has them
    per_point = tuple((BoundaryPoint(TWO_PI * (k // factor) / cfg.boundary_points), est)
                      for k, (_, est) in sorted(by_index.items()) if k % factor == 0)
    c_estimate = levels[0][1]
    c_values = [c for _, c in levels]

    reason = None
    derived = None
    if boundedness.verdict == "Unbounded":
        verdict, reason = Verdict.REJECTED, Reason.TAU_UNBOUNDED
    elif boundedness.verdict == "Bounded":
        if min(c_values) < cfg.c_min or _decays(c_values):
            verdict, reason = Verdict.REJECTED, Reason.LIMINF_FAILS
        elif math.isinf(c_estimate):
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.FINITE_BLASCHKE_CONSISTENT
            if alpha > 1.0:
                derived = angular_derivative_bound(alpha, c_estimate)
    else:
        verdict = Verdict.INCONCLUSIVE
    return ClassificationVerdict(
        alpha=alpha,
        c_estimate=c_estimate,
        boundedness=boundedness,
        per_point=per_point,
        verdict=verdict,
        reason=reason,
        derived_bound=derived,
        boundary_points=cfg.boundary_points,
        refinement=tuple(levels),
        c_min=cfg.c_min,
        gamma=cfg.gamma,
    )


def check_angular_derivative_bound(
    phi: SelfMap,
    alpha: float,
    c: float,
    sampling: BoundarySampling,
    gamma: float = 2.0,
    rtol: float = 1e-3,
) -> bool:
    bound = angular_derivative_bound(alpha, c)
    ests = ordered_map(lambda p: estimate_angular_derivative(phi, p, gamma), sampling.points)
    for est in ests:
        if est.modulus is Marker.INFINITE or est.modulus > bound * (1.0 + rtol):
            return False
    return True


# ---------------------------------------------------------- point profiles

@dataclass(frozen=True)
class BoundaryProfile:
    point: BoundaryPoint
    liminf: LimitEstimate
    limit: LimitEstimate
    derivative: AngularDerivativeEstimate


def boundary_profile(
    phi: SelfMap,
    alpha: float,
    zeta: BoundaryPoint,
    gamma: float = 2.0,
    rays: int = 3,
    depth: int = 40,
    t0: float = 0.5,
    tail: int = 8,
) -> BoundaryProfile:
    """Angular liminf and limit of ``tau_alpha`` and ``|phi'(zeta)|`` from one set of rays."""
    paths = make_paths(zeta, gamma, rays, depth, t0)
    cache = {}

    def value(z):
        if z not in cache:
            cache[z] = evaluate(phi, z)
        return cache[z]

    tau = lambda z: tau_value(phi, z, alpha, value(z))  # noqa: E731
    liminf = estimate_angular_liminf(tau, paths, tail)
    limit = estimate_angular_limit(tau, paths, tail)
    jc = estimate_angular_liminf(lambda z: jc_quotient(phi, z), paths, tail)
    if jc.value is Marker.UNBOUNDED:
        deriv = AngularDerivativeEstimate(Marker.INFINITE, "multi-ray-min", math.inf, jc)
    else:
        deriv = AngularDerivativeEstimate(jc.value, "multi-ray-min", jc.spread, jc)
    return BoundaryProfile(zeta, liminf, limit, deriv)


# --------------------------------------------------- classical-weight scans

def heins_scan(phi: SelfMap, shells: int = 20, angular_resolution: int = 256, tail: int = 8) -> LimitEstimate:
    """Unrestricted limit of ``tau_1`` as ``|z| -> 1`` from circle-wise min and max.

    ``value`` is set only when the shell minima and maxima converge to the same
    number; the envelopes are the smallest minimum and largest maximum over the
    last ``tail`` shells.
    """
    if shells < tail:
        raise DomainError(f"heins scan needs at least {tail} shells")
    rows = ordered_map(lambda m: shell_extrema(phi, 1.0, 1.0 - 2.0**-m, angular_resolution), range(1, shells + 1))
    mins = [lo for lo, _ in rows][-tail:]
    maxs = [hi for _, hi in rows][-tail:]
    fmin, fmax = fit_tail(mins), fit_tail(maxs)
    agree = (
        not fmin.unbounded
        and not fmax.unbounded
        and abs(fmax.extrapolated - fmin.extrapolated) <= LIMIT_TOL * (1.0 + abs(fmin.extrapolated))
    )
    return LimitEstimate(
        value=fmin.extrapolated if agree else None,
        lower_envelope=min(mins),
        upper_envelope=max(maxs),
        extrapolated=fmin.extrapolated,
        convergence_order_estimate=fmin.order,
        samples_used=shells,
        per_path=(fmin.extrapolated, fmax.extrapolated),
        spread=abs(fmax.extrapolated - fmin.extrapolated),
    )


@dataclass(frozen=True)
class ArcPoint:
    point: BoundaryPoint
    liminf: LimitEstimate
    limit: LimitEstimate
    condition_a: bool
    condition_b: bool

    @property
    def consistent(self) -> bool:
        return self.condition_a == self.condition_b


def arc_scan(
    phi: SelfMap,
    arc: tuple[float, float],
    gamma: float = 2.0,
    points: int = 16,
    threshold: float = 1e-3,
) -> list[ArcPoint]:
    """Per-point check of ``liminf tau_1 > 0`` (a) and ``lim tau_1 = 1`` (b) on an open arc."""
    start, end = arc
    if not end > start or end - start > TWO_PI:
        raise DomainError(f"degenerate arc {arc!r}")
    width = (end - start) / points
    zetas = [BoundaryPoint(start + (k + 0.5) * width) for k in range(points)]

    def one(zeta):
        prof = boundary_profile(phi, 1.0, zeta, gamma)
        lim = prof.liminf.value
        cond_a = lim is Marker.UNBOUNDED or (isinstance(lim, float) and lim > threshold)
        val = prof.limit.value
        cond_b = isinstance(val, float) and abs(val - 1.0) <= LIMIT_TOL
        return ArcPoint(zeta, prof.liminf, prof.limit, cond_a, cond_b)

    return ordered_map(one, zetas)


@dataclass(frozen=True)
class KrausReport:
    fraction: float
    per_point: tuple

    @property
    def passing(self) -> int:
        return sum(1 for row in self.per_point if row[3])


def kraus_scan(phi: SelfMap, sampling: BoundarySampling, gamma: float = 2.0) -> KrausReport:
    """Share of sampled points where the angular limit of ``tau_1`` equals 1 within 1e-4.

    ``per_point`` rows are ``(point, limit, angular_derivative, passed)``.
    """
    def one(zeta):
        prof = boundary_profile(phi, 1.0, zeta, gamma)
        val = prof.limit.value
        ok = isinstance(val, float) and abs(val - 1.0) <= LIMIT_TOL
        return (zeta, prof.limit, prof.derivative, ok)

    rows = ordered_map(one, sampling.points)
    n = len(rows)
    frac = sum(1 for r in rows if r[3]) / n if n else 0.0
    return KrausReport(frac, tuple(rows))
