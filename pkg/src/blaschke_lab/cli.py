"""``blaschke-lab`` command-line front end.

Every command writes to ``--out`` (default stdout). Reals in CSV are printed
with 17 significant digits; JSON uses the shortest round-trip repr. Verdicts
are data: a rejected map still exits 0. Exit codes are 2 for unparsable input,
3 for domain errors and 4 for violated preconditions.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

import click

from ._parallel import ordered_map
from .boundary import DEFAULT_TAIL, Marker, json_float
from .classifier import BoundarySampling, ClassifyConfig, _check_alpha, boundary_profile, classify
from .disk_geom import TWO_PI, DiskPoint
from .distortion import jc_quotient, tau_value
from .errors import (
    AlphaExcluded,
    ApertureTooNarrow,
    DomainError,
    EvaluationOverflow,
    InsufficientDepth,
    MapSpecError,
    StepTooLargeNearBoundary,
)
from .maps import evaluate, load_spec

EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_PRECONDITION = 4

_PRECONDITION = (AlphaExcluded, ApertureTooNarrow, InsufficientDepth, StepTooLargeNearBoundary)


class InputError(click.ClickException):
    exit_code = EXIT_PARSE


@dataclass(frozen=True)
class RunConfig:
    alpha: float | None = None
    gamma: float = 2.0
    boundary_points: int = 64
    shells: int = 30
    depth: int = 40
    rays: int = 3
    c_min: float = 1e-3
    output_format: str = "json"
    seed: int = 0

    def validate(self) -> "RunConfig":
        if not self.gamma > 1.0:
            raise ApertureTooNarrow(f"--gamma must exceed 1, got {self.gamma!r}")
        if self.boundary_points < 1:
            raise DomainError(f"--boundary-points must be >= 1, got {self.boundary_points!r}")
        if self.shells < 8:
            raise InsufficientDepth(f"--shells must be >= 8, got {self.shells!r}")
        if self.depth < DEFAULT_TAIL:
            raise InsufficientDepth(f"--depth must be >= {DEFAULT_TAIL}, got {self.depth!r}")
        if self.rays < 1:
            raise DomainError(f"--rays must be >= 1, got {self.rays!r}")
        if not self.c_min > 0.0:
            raise DomainError(f"--c-min must be positive, got {self.c_min!r}")
        return self

    def classify_config(self) -> ClassifyConfig:
        return ClassifyConfig(
            gamma=self.gamma,
            boundary_points=self.boundary_points,
            shells=self.shells,
            depth=self.depth,
            rays=self.rays,
            c_min=self.c_min,
        )


# ------------------------------------------------------------- formatting

def fmt(x) -> str:
    """17-significant-digit text for a real; markers and ``None`` as literals."""
    if isinstance(x, Marker):
        return x.value
    if x is None:
        return "nan"
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".17g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _cx(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _run(body):
    """Map library errors to exit codes; everything else propagates."""
    try:
        return body()
    except MapSpecError as exc:
        _fail(str(exc), EXIT_PARSE)
    except _PRECONDITION as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_PRECONDITION)
    except (DomainError, EvaluationOverflow) as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_DOMAIN)


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


# ---------------------------------------------------------------- parsing

def parse_complex(text: str) -> complex:
    """``"0.5+0i"``, ``"-0.2-0.3j"``, ``"0.7"`` and the like."""
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def parse_reals(text: str, name: str) -> list[float]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError:
        raise InputError(f"{name}: expected a comma-separated list of reals, got {text!r}") from None


# ---------------------------------------------------------------- options

def _map_option(f):
    f = click.option("--seed", type=int, default=0, show_default=True, help="Seed for construction checks.")(f)
    f = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")(f)
    return click.option("--map", "map_path", required=True, type=click.Path(dir_okay=False), help="Map-spec JSON.")(f)


def _scan_options(f):
    for decl, typ, default, text in reversed([
        ("--gamma", float, 2.0, "Stolz aperture, > 1."),
        ("--boundary-points", int, 64, "Boundary sample size M."),
        ("--shells", int, 30, "Shells for the boundedness scan."),
        ("--depth", int, 40, "Shells per approach ray."),
        ("--rays", int, 3, "Approach rays per boundary point."),
        ("--c-min", float, 1e-3, "Smallest liminf accepted as positive."),
    ]):
        f = click.option(decl, type=typ, default=default, show_default=True, help=text)(f)
    return f


def _format_option(default):
    return click.option(
        "--format", "output_format", type=click.Choice(["json", "csv"]), default=default, show_default=True
    )


def _load(map_path: str, seed: int):
    try:
        return load_spec(map_path, seed)
    except OSError as exc:
        raise InputError(f"cannot read map spec: {exc}") from None


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Weighted hyperbolic distortion and finite-Blaschke diagnostics for self-maps of the unit disk."""


# --------------------------------------------------------------- commands

@main.command("evaluate")
@_map_option
@click.option("--z", "z_text", required=True, help='Interior point, e.g. "0.5+0i".')
@_format_option("json")
def cmd_evaluate(map_path, out, seed, z_text, output_format):
    """Value, derivative, 1-|phi(z)|^2 and tau_1 at one point."""
    z = parse_complex(z_text)

    def body():
        phi = _load(map_path, seed)
        p = DiskPoint.from_complex(z)
        mv = evaluate(phi, p)
        tau = tau_value(phi, p, 1.0, mv)
        if output_format == "csv":
            return _csv_text(
                ["value_re", "value_im", "derivative_re", "derivative_im", "one_minus_mod_sq", "tau"],
                [[mv.value.real, mv.value.imag, mv.derivative.real, mv.derivative.imag,
                  mv.one_minus_mod_sq_value, tau]],
            )
        return _json_text({
            "z": _cx(p.z),
            "value": _cx(mv.value),
            "derivative": _cx(mv.derivative),
            "one_minus_mod_sq": mv.one_minus_mod_sq_value,
            "tau": tau,
        })

    _emit(_run(body), out)


@main.command("distortion-field")
@_map_option
@click.option("--alpha", type=float, required=True)
@click.option("--radii", required=True, help="Comma-separated radii in [0, 1).")
@click.option("--angles", type=int, default=64, show_default=True, help="Angles 2 pi k / N per radius.")
@_format_option("csv")
def cmd_distortion_field(map_path, out, seed, alpha, radii, angles, output_format):
    """tau_alpha and the Julia-Caratheodory quotient on a polar grid."""
    rs = parse_reals(radii, "--radii")

    def body():
        if angles < 1:
            raise DomainError(f"--angles must be >= 1, got {angles!r}")
        if not alpha > 0:
            raise DomainError(f"--alpha must be positive, got {alpha!r}")
        phi = _load(map_path, seed)
        grid = [DiskPoint.polar(r, TWO_PI * k / angles) for r in rs for k in range(angles)]

        def row(p):
            mv = evaluate(phi, p)
            return [p.re, p.im, tau_value(phi, p, alpha, mv), jc_quotient(phi, p)]

        rows = ordered_map(row, grid)
        header = ["re", "im", "tau", "jc_quotient"]
        if output_format == "json":
            return _json_text([dict(zip(header, r)) for r in rows])
        return _csv_text(header, rows)

    _emit(_run(body), out)


@main.command("classify")
@_map_option
@click.option("--alpha", type=float, required=True)
@_scan_options
@_format_option("json")
def cmd_classify(map_path, out, seed, alpha, output_format, **scan):
    """Finite-Blaschke consistency verdict at weight alpha (alpha != 1)."""

    def body():
        cfg = RunConfig(alpha=alpha, output_format=output_format, seed=seed, **scan).validate()
        _check_alpha(alpha)
        phi = _load(map_path, seed)
        v = classify(phi, alpha, cfg.classify_config())
        if output_format == "csv":
            rows = [[v.alpha, v.label, v.c_estimate, p.angle, est.value] for p, est in v.per_point]
            return _csv_text(["alpha", "verdict", "c_estimate", "angle", "liminf_tau_alpha"], rows)
        payload = {"label": v.label, **v.to_dict(), "run_config": asdict(cfg)}
        return _json_text(payload)

    _emit(_run(body), out)


@main.command("alpha-sweep")
@_map_option
@click.option("--alphas", required=True, help="Comma-separated weights, none equal to 1. May be empty.")
@_scan_options
@_format_option("csv")
def cmd_alpha_sweep(map_path, out, seed, alphas, output_format, **scan):
    """One classification per alpha: alpha, c_estimate, sup_tau, verdict."""
    values = parse_reals(alphas, "--alphas")

    def body():
        cfg = RunConfig(output_format=output_format, seed=seed, **scan).validate()
        for a in values:
            _check_alpha(a)
        phi = _load(map_path, seed)
        rows = []
        for a in values:
            v = classify(phi, a, cfg.classify_config())
            b = v.boundedness
            if b.verdict == "Unbounded":
                sup = Marker.UNBOUNDED
            else:
                sup = max(s for _, s in b.shell_sups)
            rows.append([a, v.c_estimate, sup, v.label])
        header = ["alpha", "c_estimate", "sup_tau", "verdict"]
        if output_format == "json":
            return _json_text([
                {"alpha": a, "c_estimate": json_float(c), "sup_tau": json_float(s), "verdict": lab}
                for a, c, s, lab in rows
            ])
        return _csv_text(header, rows)

    _emit(_run(body), out)


@main.command("boundary-scan")
@_map_option
@click.option("--alpha", type=float, required=True)
@_scan_options
@_format_option("csv")
def cmd_boundary_scan(map_path, out, seed, alpha, output_format, **scan):
    """Per boundary point: angular liminf and limit of tau_alpha, and |phi'(zeta)|.

    A limit that the approach rays do not agree on is printed as ``nan``.
    """

    def body():
        cfg = RunConfig(alpha=alpha, output_format=output_format, seed=seed, **scan).validate()
        if not alpha > 0:
            raise DomainError(f"--alpha must be positive, got {alpha!r}")
        phi = _load(map_path, seed)
        sampling = BoundarySampling.for_map(phi, cfg.boundary_points)
        profiles = ordered_map(
            lambda p: boundary_profile(phi, alpha, p, cfg.gamma, cfg.rays, cfg.depth), sampling.points
        )
        rows = [[pr.point.angle, pr.liminf.value, pr.limit.value, pr.derivative.modulus] for pr in profiles]
        header = ["angle", "liminf_tau_alpha", "limit_tau_alpha", "angular_derivative"]
        if output_format == "json":
            return _json_text([dict(zip(header, [json_float(x) for x in r])) for r in rows])
        return _csv_text(header, rows)

    _emit(_run(body), out)


if __name__ == "__main__":
    main()
