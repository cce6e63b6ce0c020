import json
import math

import pytest

from blaschke_lab.boundary import Marker
from blaschke_lab.classifier import (
    BoundarySampling,
    BoundednessReport,
    ClassificationVerdict,
    ClassifyConfig,
    Reason,
    Verdict,
    angular_derivative_bound,
    arc_scan,
    boundary_profile,
    boundedness_scan,
    check_angular_derivative_bound,
    classify,
    heins_scan,
    kraus_scan,
    liminf_scan,
    shell_extrema,
)
from blaschke_lab.disk_geom import BoundaryPoint
from blaschke_lab.errors import AlphaExcluded, DomainError
from blaschke_lab.maps import catalog


@pytest.fixture(scope="module")
def maps():
    return catalog()


def test_sampling_excludes_singular_support(maps):
    s = BoundarySampling.for_map(maps["atomic_one"], 64)
    assert len(s.points) == 63 and 0 not in s.indices
    full = BoundarySampling.equispaced(8)
    assert [p.angle for p in full.points] == pytest.approx([2 * math.pi * k / 8 for k in range(8)])
    sub = full.contiguous(6, 4)
    assert sub.indices == (0, 1, 6, 7)
    with pytest.raises(DomainError):
        BoundarySampling.equispaced(0)


def test_shell_extrema_of_square(maps):
    # tau_1(z^2) = 2r / (1 + r^2) on the whole circle
    lo, hi = shell_extrema(maps["square"], 1.0, 0.5, 64)
    assert lo == pytest.approx(0.8, rel=1e-14)
    assert hi == pytest.approx(0.8, rel=1e-14)


def test_boundedness_verdicts(maps):
    assert boundedness_scan(maps["blaschke_three"], 2.0).verdict == "Bounded"
    rep = boundedness_scan(maps["atomic_one"], 0.5)
    assert rep.verdict == "Unbounded"
    # the supremum grows like 2^(m/2) on the shells 1 - 2^-m
    assert rep.growth_rate == pytest.approx(math.sqrt(2), rel=1e-2)
    assert all(g >= 1.2 for g in rep.growth_factors()[-5:])
    assert BoundednessReport.from_dict(json.loads(json.dumps(rep.to_dict()))) == rep
    with pytest.raises(DomainError):
        boundedness_scan(maps["square"], 2.0, shells=5)


def test_decaying_sups_are_bounded(maps):
    # the image of affine_inner stays off the circle, so tau_2 -> 0 on every shell
    rep = boundedness_scan(maps["affine_inner"], 2.0)
    sups = [s for _, s in rep.shell_sups]
    assert sups[-1] < 1e-12 and rep.verdict == "Bounded"
    v = classify(maps["affine_inner"], 2.0, ClassifyConfig(boundary_points=16))
    assert v.label == "Rejected(LiminfFails)" and v.c_estimate == 0.0


def test_liminf_scan_matches_grid_prediction(maps):
    # tau_2 limit is 1/|B'|; for z^2 that is 1/2 everywhere
    c, rows = liminf_scan(maps["square"], 2.0, BoundarySampling.equispaced(8))
    assert c == pytest.approx(0.5, rel=1e-10)
    assert len(rows) == 8


def test_alpha_one_is_excluded(maps):
    with pytest.raises(AlphaExcluded) as info:
        classify(maps["square"], 1.0)
    assert "larger class" in str(info.value)


def test_derived_bound():
    assert angular_derivative_bound(2.0, 0.25) == 8.0
    assert angular_derivative_bound(3.0, 0.01) == pytest.approx(20.0)


def test_classify_blaschke_two(maps):
    v = classify(maps["blaschke_two"], 2.0)
    assert v.verdict is Verdict.FINITE_BLASCHKE_CONSISTENT and v.reason is None
    assert v.c_estimate == pytest.approx(0.25, rel=1e-8)
    assert v.derived_bound == pytest.approx(8.0, rel=1e-8)
    assert v.label == "FiniteBlaschkeConsistent"
    assert len(v.per_point) == 64
    again = ClassificationVerdict.from_dict(json.loads(json.dumps(v.to_dict(), allow_nan=False)))
    assert again == v


def test_classify_rejections(maps):
    aff = classify(maps["affine_half"], 2.0)
    assert (aff.verdict, aff.reason) == (Verdict.REJECTED, Reason.LIMINF_FAILS)
    assert aff.label == "Rejected(LiminfFails)"
    atom = classify(maps["atomic_one"], 0.5, ClassifyConfig(boundary_points=16))
    assert (atom.verdict, atom.reason) == (Verdict.REJECTED, Reason.TAU_UNBOUNDED)
    assert atom.derived_bound is None


def test_classify_small_weight_has_no_derived_bound(maps):
    v = classify(maps["square"], 0.5, ClassifyConfig(boundary_points=16))
    assert v.verdict is Verdict.FINITE_BLASCHKE_CONSISTENT
    # 2^(1 - 1/2)
    assert v.c_estimate == pytest.approx(math.sqrt(2), rel=1e-8)
    assert v.derived_bound is None


def test_check_bound(maps):
    s = BoundarySampling.equispaced(16)
    assert check_angular_derivative_bound(maps["blaschke_two"], 2.0, 0.25, s)
    assert not check_angular_derivative_bound(maps["blaschke_two"], 2.0, 1.0, s)


def test_boundary_profile_blaschke_two(maps):
    prof = boundary_profile(maps["blaschke_two"], 2.0, BoundaryPoint(0.0))
    assert prof.derivative.modulus == pytest.approx(4.0, rel=1e-8)
    assert prof.limit.value == pytest.approx(0.25, rel=1e-8)
    assert prof.liminf.value <= prof.limit.value * (1 + 1e-12)


def test_heins_scan(maps):
    assert heins_scan(maps["blaschke_two"]).value == pytest.approx(1.0, abs=1e-6)
    aff = heins_scan(maps["affine_half"])
    assert aff.value is None and aff.lower_envelope < 1e-5


def test_arc_scan_consistency(maps):
    rows = arc_scan(maps["blaschke_three"], (0.0, 1.0), points=4)
    assert all(r.condition_a and r.condition_b and r.consistent for r in rows)
    rows = arc_scan(maps["affine_half"], (1.0, 2.0), points=4)
    assert all(not r.condition_a and not r.condition_b for r in rows)
    with pytest.raises(DomainError):
        arc_scan(maps["square"], (1.0, 1.0))


def test_kraus_scan(maps):
    assert kraus_scan(maps["blaschke_three"], BoundarySampling.equispaced(16)).fraction == 1.0
    # an inner function that is not a finite Blaschke product still passes at alpha = 1
    atoms = maps["atomic_two"]
    assert kraus_scan(atoms, BoundarySampling.for_map(atoms, 16)).fraction == 1.0
    # (1+z)/2 only reaches the circle at zeta = 1, which is on the grid
    aff = kraus_scan(maps["affine_half"], BoundarySampling.equispaced(64))
    assert aff.fraction <= 1 / 64
    assert all(row[2].modulus is Marker.INFINITE for row in aff.per_point[1:])
