"""Non-tangential approach paths and numerical angular limits.

A path to ``zeta`` visits the shells ``1 - |z_n| = t0 * 2^-n``; the tangential
phase of ray ``s`` is ``s * kappa * t_n``, so every ray stays in the Stolz
region with the same relative margin at every depth. Limits are read off the
deepest ``tail`` shells with a Richardson step whose order is fitted from the
ratio of successive differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from statistics import fmean, median
from typing import Callable, Sequence

from .disk_geom import BoundaryPoint, DiskPoint, StolzRegion, stolz_contains
from .distortion import jc_quotient
from .errors import ApertureTooNarrow, DomainError, EvaluationOverflow, InsufficientDepth
from .maps import SelfMap

__all__ = [
    "AngularDerivativeEstimate",
    "ApproachPath",
    "LimitEstimate",
    "Marker",
    "PathFit",
    "estimate_angular_derivative",
    "estimate_angular_liminf",
    "estimate_angular_limit",
    "fit_tail",
    "from_json_float",
    "json_float",
    "make_paths",
    "ray_offsets",
]

DEFAULT_TAIL = 8
UNBOUNDED_VALUE = 1e12
GROWTH_FACTOR = 1.5
GROWTH_SHELLS = 5
AGREEMENT = 1e-4
KAPPA_MARGIN = 1e-3
_EPS = 2.0**-52


class Marker(str, Enum):
    UNBOUNDED = "unbounded"
    INFINITE = "inf"


def json_float(x):
    """JSON-safe form of a float, marker or ``None``; infinities become ``"inf"``."""
    if isinstance(x, Marker):
        return x.value
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def from_json_float(x):
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    return x


@dataclass(frozen=True)
class ApproachPath:
    target: BoundaryPoint
    aperture: float
    points: tuple
    offset: float
    kappa: float
    shells: tuple

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class PathFit:
    """Tail analysis of ``f`` along one path."""

    extrapolated: float
    order: float | None
    converged: bool
    unbounded: bool
    tail_min: float
    tail_max: float


@dataclass(frozen=True)
class LimitEstimate:
    value: float | Marker | None
    lower_envelope: float
    upper_envelope: float
    extrapolated: float
    convergence_order_estimate: float | None
    samples_used: int
    per_path: tuple = field(default=())
    spread: float = 0.0

    @property
    def is_finite(self) -> bool:
        return isinstance(self.value, float)

    def to_dict(self) -> dict:
        return {
            "value": json_float(self.value),
            "lower_envelope": json_float(self.lower_envelope),
            "upper_envelope": json_float(self.upper_envelope),
            "extrapolated": json_float(self.extrapolated),
            "convergence_order_estimate": self.convergence_order_estimate,
            "samples_used": self.samples_used,
            "per_path": [json_float(x) for x in self.per_path],
            "spread": json_float(self.spread),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LimitEstimate":
        value = data["value"]
        value = Marker(value) if isinstance(value, str) else value
        return cls(
            value=value,
            lower_envelope=from_json_float(data["lower_envelope"]),
            upper_envelope=from_json_float(data["upper_envelope"]),
            extrapolated=from_json_float(data["extrapolated"]),
            convergence_order_estimate=data["convergence_order_estimate"],
            samples_used=data["samples_used"],
            per_path=tuple(from_json_float(x) for x in data.get("per_path", ())),
            spread=from_json_float(data.get("spread", 0.0)),
        )


@dataclass(frozen=True)
class AngularDerivativeEstimate:
    modulus: float | Marker
    method: str
    residual: float
    liminf: LimitEstimate | None = None


# ------------------------------------------------------------------- paths

def ray_offsets(rays: int) -> list[float]:
    """Tangential offsets in ``(-1, 1)``, sorted, always containing 0.

    Odd counts are symmetric about the radial ray, which then sits in the
    middle; an even count drops the most negative offset of the next odd set.
    """
    if rays < 1:
        raise DomainError(f"rays must be >= 1, got {rays!r}")
    m = rays // 2
    offsets = [j / (m + 1) for j in range(-m, m + 1)]
    if rays % 2 == 0:
        offsets = offsets[1:]
    return offsets


def _max_phase(t: float, gamma: float) -> float:
    """Largest phase ``psi`` with ``|1 - (1-t) e^{i psi}| <= gamma (2t - t^2)``."""
    rhs = (gamma * t * (2.0 - t)) ** 2 - t * t
    if rhs <= 0.0:
        return 0.0
    s = math.sqrt(rhs / (4.0 * (1.0 - t)))
    return 2.0 * math.asin(min(1.0, s))


@lru_cache(maxsize=256)
def _kappa(gamma: float, depth: int, t0: float, s_max: float) -> float:
    if s_max == 0.0:
        return 0.0
    best = math.inf
    for n in range(depth):
        t = t0 * 2.0**-n
        best = min(best, _max_phase(t, gamma) / (t * s_max))
    return best


def _build_ray(zeta_angle: float, offset: float, kappa: float, shells) -> tuple:
    pts = []
    for t in shells:
        pts.append(DiskPoint.polar(1.0 - t, zeta_angle + offset * kappa * t))
    return tuple(pts)


def make_paths(
    target: BoundaryPoint,
    gamma: float = 2.0,
    rays: int = 3,
    depth: int = 40,
    t0: float = 0.5,
) -> list[ApproachPath]:
    """Rays ``z_n = zeta (1 - t_n) exp(i s kappa t_n)``, ``t_n = t0 2^-n``.

    ``kappa`` is the largest phase rate keeping every point of every ray in
    the Stolz region, reduced by a relative margin of ``1e-3`` so the
    containment survives rounding of the coordinates.
    """
    region = StolzRegion(target, gamma)
    if not 0.0 < t0 <= 0.5:
        raise DomainError(f"t0 must lie in (0, 1/2], got {t0!r}")
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth!r}")
    offsets = ray_offsets(rays)
    s_max = max(abs(s) for s in offsets)
    shells = tuple(t0 * 2.0**-n for n in range(depth))
    kappa = _kappa(float(gamma), depth, float(t0), s_max) * (1.0 - KAPPA_MARGIN)
    if rays > 1 and not kappa > 0.0:
        raise ApertureTooNarrow(f"no tangential phase fits in the Stolz region of aperture {gamma!r}")
    paths = []
    for s in offsets:
        k = kappa
        pts = _build_ray(target.angle, s, k, shells)
        while not all(stolz_contains(region, p) for p in pts):
            k *= 0.5
            if k < 1e-12 * max(kappa, 1.0):
                raise ApertureTooNarrow(f"ray with offset {s!r} cannot be kept inside the Stolz region")
            pts = _build_ray(target.angle, s, k, shells)
        paths.append(ApproachPath(target, float(gamma), pts, s, k, shells))
    return paths


# ------------------------------------------------------------- tail fitting

def fit_tail(values: Sequence[float]) -> PathFit:
    """Limit of a sequence sampled on geometric shells of ratio 2.

    Models ``f_n = L + C * t_n^p``. The order ``p`` comes from the ratio of
    consecutive differences, and one Richardson step removes the leading term.
    A tail that only moves at rounding level is taken as converged as is.
    Non-negative data never extrapolate below zero.
    """
    f = [float(v) for v in values]
    lo, hi = min(f), max(f)
    if any(abs(v) > UNBOUNDED_VALUE for v in f) or _sustained_growth(f):
        return PathFit(hi, None, False, True, lo, hi)
    scale = max(abs(v) for v in f)
    noise = 64.0 * _EPS * scale + 1e-300
    d = [b - a for a, b in zip(f, f[1:])]
    if not d or all(abs(x) <= noise for x in d):
        return PathFit(f[-1], None, True, False, lo, hi)
    ratios = []
    for a, b in zip(d, d[1:]):
        if abs(a) > noise and abs(b) > noise:
            ratios.append(a / b)
        else:
            ratios.append(math.nan)
    last = ratios[-3:]
    if len(last) == 3 and all(r > 1.0 for r in last):
        mid = median(last)
        if max(abs(r - mid) for r in last) <= 0.25 * mid:
            p = math.log2(mid)
            ext = f[-1] + d[-1] / (mid - 1.0)
            if lo >= 0.0 and ext < 0.0:
                # a limit of non-negative terms; the overshoot is rounding
                ext = 0.0
            return PathFit(ext, p, True, False, lo, hi)
    if abs(d[-1]) <= 1e3 * noise:
        return PathFit(f[-1], None, True, False, lo, hi)
    return PathFit(f[-1], None, False, False, lo, hi)


def _sustained_growth(f: Sequence[float]) -> bool:
    last = f[-GROWTH_SHELLS:]
    if len(last) < GROWTH_SHELLS or any(v <= 0.0 for v in last):
        return False
    return all(b >= GROWTH_FACTOR * a for a, b in zip(last, last[1:]))


def _path_fit(f: Callable[[DiskPoint], float], path: ApproachPath, tail: int) -> PathFit:
    try:
        values = [f(z) for z in path.points[-tail:]]
    except EvaluationOverflow:
        return PathFit(math.inf, None, False, True, math.inf, math.inf)
    return fit_tail(values)


def _fits(f, paths, tail):
    if not paths:
        raise DomainError("at least one approach path is required")
    for p in paths:
        if len(p) < tail:
            raise InsufficientDepth(f"path depth {len(p)} is below the tail length {tail}")
    return [_path_fit(f, p, tail) for p in paths]


def _orders(fits):
    orders = [ft.order for ft in fits if ft.order is not None]
    return median(orders) if orders else None


def _summarize(fits, value, tail, extrapolated, per_path, spread):
    finite = [ft for ft in fits if not ft.unbounded]
    if finite:
        lo = min(min(ft.tail_min, ft.extrapolated) for ft in finite)
        hi = max(max(ft.tail_max, ft.extrapolated) for ft in finite)
        if math.isfinite(extrapolated):
            # the mean of equal per-path values can round one ulp outside them
            lo, hi = min(lo, extrapolated), max(hi, extrapolated)
    else:
        lo = hi = math.inf
    return LimitEstimate(
        value=value,
        lower_envelope=lo,
        upper_envelope=hi,
        extrapolated=extrapolated,
        convergence_order_estimate=_orders(finite),
        samples_used=tail * len(fits),
        per_path=tuple(per_path),
        spread=spread,
    )


def estimate_angular_limit(
    f: Callable[[DiskPoint], float], paths: Sequence[ApproachPath], tail: int = DEFAULT_TAIL
) -> LimitEstimate:
    """Angular limit of ``f``: the mean of the per-ray extrapolations when they agree.

    ``value`` is ``Marker.UNBOUNDED`` if any ray blows up and ``None`` when the
    rays disagree by more than ``1e-4 (1 + |mean|)``; the envelopes are
    reported in every case.
    """
    fits = _fits(f, paths, tail)
    if any(ft.unbounded for ft in fits):
        per = [None if ft.unbounded else ft.extrapolated for ft in fits]
        top = max((ft.tail_max for ft in fits), default=math.inf)
        return _summarize(fits, Marker.UNBOUNDED, tail, top, per, math.inf)
    per = [ft.extrapolated for ft in fits]
    mean = fmean(per)
    spread = max(per) - min(per)
    value = mean if spread <= AGREEMENT * (1.0 + abs(mean)) else None
    return _summarize(fits, value, tail, mean, per, spread)


def estimate_angular_liminf(
    f: Callable[[DiskPoint], float], paths: Sequence[ApproachPath], tail: int = DEFAULT_TAIL
) -> LimitEstimate:
    """Smallest per-ray limit; rays that did not converge contribute their tail minimum."""
    fits = _fits(f, paths, tail)
    finite = [ft for ft in fits if not ft.unbounded]
    per = [None if ft.unbounded else ft.extrapolated for ft in fits]
    if not finite:
        top = max(ft.tail_max for ft in fits)
        return _summarize(fits, Marker.UNBOUNDED, tail, top, per, math.inf)
    lows = [ft.extrapolated if ft.converged else min(ft.tail_min, ft.extrapolated) for ft in finite]
    value = min(lows)
    ex = [ft.extrapolated for ft in finite]
    return _summarize(fits, value, tail, value, per, max(ex) - min(ex))


def estimate_angular_derivative(
    phi: SelfMap,
    target: BoundaryPoint,
    gamma: float = 2.0,
    rays: int = 3,
    depth: int = 40,
    t0: float = 0.5,
) -> AngularDerivativeEstimate:
    """``|phi'(zeta)|`` as the angular liminf of ``(1 - |phi(z)|) / (1 - |z|)``."""
    paths = make_paths(target, gamma, rays, depth, t0)
    est = estimate_angular_liminf(lambda z: jc_quotient(phi, z), paths)
    if est.value is Marker.UNBOUNDED:
        return AngularDerivativeEstimate(Marker.INFINITE, "multi-ray-min", math.inf, est)
    return AngularDerivativeEstimate(est.value, "multi-ray-min", est.spread, est)
