"""Weighted local hyperbolic distortion and the Julia-Caratheodory quotient.

``tau_alpha(phi, z, alpha) = (1 - |z|^2)^alpha |phi'(z)| / (1 - |phi(z)|^2)^alpha``
is the ratio of the pulled-back alpha-hyperbolic density to the density at
``z``. For ``alpha = 1`` it never exceeds 1, with equality exactly for disk
automorphisms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .disk_geom import DiskPoint, one_minus_mod_sq
from .errors import DomainError, TauOverflow
from .maps import MapValue, SelfMap, evaluate

__all__ = [
    "DistortionSample",
    "jc_quotient",
    "schwarz_lemma_floor",
    "tau_alpha",
    "tau_value",
]

_LOG_MAX = math.log(1.7976931348623157e308)


@dataclass(frozen=True)
class DistortionSample:
    z: DiskPoint
    alpha: float
    tau: float
    jc_quotient: float


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be positive and finite, got {alpha!r}")
    return alpha


def _assemble(om_z: float, dmod: float, om_phi: float, alpha: float) -> float:
    if dmod == 0.0:
        return 0.0
    threshold = 10.0 ** (-300.0 / alpha)
    if om_z < threshold or om_phi < threshold:
        log_tau = alpha * (math.log(om_z) - math.log(om_phi)) + math.log(dmod)
        if log_tau > _LOG_MAX:
            raise TauOverflow(f"tau overflows (log tau = {log_tau:.6g})")
        return math.exp(log_tau)
    ratio = om_z / om_phi
    try:
        tau = ratio**alpha * dmod
    except OverflowError:
        tau = math.inf
    if not math.isfinite(tau):
        log_tau = alpha * math.log(ratio) + math.log(dmod)
        if log_tau > _LOG_MAX:
            raise TauOverflow(f"tau overflows (log tau = {log_tau:.6g})")
        tau = math.exp(log_tau)
    return tau


def _jc(om_z: float, z_mod: float, om_phi: float, phi_mod: float) -> float:
    # 1 - |w| = (1 - |w|^2) / (1 + |w|)
    return (om_phi / (1.0 + phi_mod)) / (om_z / (1.0 + z_mod))


def tau_value(phi: SelfMap, z: DiskPoint, alpha: float, mv: MapValue | None = None) -> float:
    """Distortion value only; the hot path of the scans."""
    if mv is None:
        mv = evaluate(phi, z)
    return _assemble(one_minus_mod_sq(z), abs(mv.derivative), mv.one_minus_mod_sq_value, alpha)


def tau_alpha(phi: SelfMap, z: DiskPoint, alpha: float) -> DistortionSample:
    alpha = _check_alpha(alpha)
    mv = evaluate(phi, z)
    om_z = one_minus_mod_sq(z)
    tau = _assemble(om_z, abs(mv.derivative), mv.one_minus_mod_sq_value, alpha)
    jc = _jc(om_z, abs(z), mv.one_minus_mod_sq_value, abs(mv.value))
    return DistortionSample(z, alpha, tau, jc)


def jc_quotient(phi: SelfMap, z: DiskPoint) -> float:
    """``(1 - |phi(z)|) / (1 - |z|)`` from the stable one-minus forms."""
    mv = evaluate(phi, z)
    return _jc(one_minus_mod_sq(z), abs(z), mv.one_minus_mod_sq_value, abs(mv.value))


def schwarz_lemma_floor(phi: SelfMap) -> float:
    """Lower bound ``(1 - |phi(0)|) / (1 + |phi(0)|)`` for ``(1-|phi|^2)/(1-|z|^2)``."""
    mv = evaluate(phi, DiskPoint(0.0, 0.0))
    w = abs(mv.value)
    return mv.one_minus_mod_sq_value / ((1.0 + w) * (1.0 + w))
