import math

import pytest

from blaschke_lab.disk_geom import (
    BoundaryPoint,
    DiskPoint,
    StolzRegion,
    exact_one_minus_sq,
    hyperbolic_density,
    one_minus_mod_sq,
    quasi_random_points,
    stolz_contains,
    two_product,
)
from blaschke_lab.errors import DomainError


def test_two_product_is_exact():
    a, b = 1.0 + 2.0**-30, 1.0 - 2.0**-30
    p, e = two_product(a, b)
    assert p == 1.0
    assert e == -(2.0**-60)


def test_one_minus_mod_sq_near_edge_keeps_all_digits():
    # 1 - (1 - 2^-40)^2 = 2^-39 - 2^-80, representable exactly
    z = DiskPoint(1.0 - 2.0**-40, 0.0)
    assert one_minus_mod_sq(z) == 2.0**-39 - 2.0**-80


def test_one_minus_mod_sq_simple_values():
    assert one_minus_mod_sq(DiskPoint(0.0, 0.0)) == 1.0
    assert one_minus_mod_sq(DiskPoint(0.6, 0.0)) == pytest.approx(0.64, rel=1e-15)
    assert exact_one_minus_sq(0.5, 0.5) == 0.5


def test_disk_point_rejects_boundary_and_outside():
    with pytest.raises(DomainError):
        DiskPoint(1.0, 0.0)
    with pytest.raises(DomainError):
        DiskPoint(0.8, 0.7)
    with pytest.raises(DomainError):
        DiskPoint(math.nan, 0.0)


def test_polar_and_complex_round_trip():
    p = DiskPoint.polar(0.5, math.pi / 2)
    assert abs(p.z - 0.5j) < 1e-16
    assert DiskPoint.from_complex(0.25 - 0.5j).z == 0.25 - 0.5j
    assert abs(DiskPoint(0.6, 0.8 - 1e-9)) < 1.0


def test_boundary_point_normalizes_angle():
    assert BoundaryPoint(-math.pi / 2).angle == pytest.approx(3 * math.pi / 2)
    assert BoundaryPoint(2 * math.pi).angle == 0.0
    assert BoundaryPoint(0.1).angular_distance(BoundaryPoint(2 * math.pi - 0.1)) == pytest.approx(0.2)
    with pytest.raises(DomainError):
        BoundaryPoint(math.inf)


def test_hyperbolic_density():
    z = DiskPoint(0.5, 0.0)
    assert hyperbolic_density(z, 1.0) == pytest.approx(1 / 0.75)
    assert hyperbolic_density(z, 2.0) == pytest.approx(1 / 0.75**2)
    with pytest.raises(DomainError):
        hyperbolic_density(z, 0.0)


def test_stolz_region():
    region = StolzRegion(BoundaryPoint(0.0), 2.0)
    assert stolz_contains(region, DiskPoint(0.9, 0.0))
    # tangential approach along the circle |z| = 0.9 is outside the cone
    assert not stolz_contains(region, DiskPoint.polar(0.9, 1.0))
    assert region.contains(DiskPoint(0.0, 0.0))
    assert not region.contains(DiskPoint(-0.6, 0.0))
    with pytest.raises(DomainError):
        StolzRegion(BoundaryPoint(0.0), 1.0)


def test_quasi_random_points_deterministic_and_inside():
    a = quasi_random_points(500, seed=3)
    b = quasi_random_points(500, seed=3)
    assert a == b
    assert a != quasi_random_points(500, seed=4)
    assert all(one_minus_mod_sq(p) > 0 for p in a)
    # half the points hug the circle
    assert sum(1.0 - abs(p) < 0.1 for p in a) >= 250
    assert min(1.0 - abs(p) for p in a) < 1e-9
