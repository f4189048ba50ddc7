import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essspec.cplane import (
    CompactSetEstimate,
    HullRegion,
    dilate,
    empty_region,
    empty_set,
    hull_contains,
    one_sided_distance,
    polynomial_hull,
    union,
)
from essspec.errors import InvalidParameterError


def circle(n, r=1.0, center=0j):
    return center + r * np.exp(2j * np.pi * np.arange(n) / n)


def curve(points, resolution=None):
    return CompactSetEstimate(points, "exact-curve", resolution or 0.01)


def cloud(points):
    return CompactSetEstimate(points, "eigenvalues")


@pytest.fixture(scope="module")
def disk():
    return polynomial_hull(curve(circle(256), 0.0123), 0.01)


def test_unit_circle_hull_area(disk):
    assert disk.area() == pytest.approx(math.pi, rel=0.03)


def test_unit_circle_hull_matches_point_in_disk(disk):
    # brute force: every cell center well inside the disk is in the hull,
    # every one well outside is not
    z = disk.centers(np.ones(disk.shape, bool))
    m = disk.mask.ravel()
    assert m[np.abs(z) < 1 - 2 * disk.cell_size].all()
    assert not m[np.abs(z) > 1 + 2 * disk.cell_size].any()


def test_empty_set_gives_empty_region():
    H = polynomial_hull(empty_set(), 0.01)
    assert H.is_empty and H.mask.size == 0


def test_segment_is_not_filled():
    seg = curve(np.linspace(0, 1, 201), 0.0025)
    H = polynomial_hull(seg, 0.01)
    z = H.centers()
    # fattened segment only: nothing farther than the occupancy radius
    dist = np.abs(z.real.clip(0, 1) + 0j - z)
    assert dist.max() <= H.cell_diagonal + 1e-12
    assert H.area() < 0.05


@pytest.mark.parametrize("cell, margin", [(0, 1.0), (-0.1, 1.0), (0.01, 0.0), (0.01, 0.015)])
def test_invalid_parameters(cell, margin):
    with pytest.raises(InvalidParameterError):
        polynomial_hull(curve(circle(16)), cell, margin)


def test_contains(disk):
    assert hull_contains(disk, 0, 0)
    assert not hull_contains(disk, 2, 0.05)
    assert hull_contains(disk, 1.05, 0.05)
    assert not hull_contains(empty_region(), 0, 10.0)


def test_one_sided_distance(disk):
    inside = cloud([0.1, -0.3j, 0.5 + 0.5j])
    assert one_sided_distance(inside, disk) <= disk.cell_diagonal
    # distance from 2 to the closed unit disk is 1
    far = one_sided_distance(cloud([2.0]), disk)
    assert abs(far - 1.0) <= disk.cell_diagonal
    assert one_sided_distance(empty_set(), disk) == 0.0
    assert one_sided_distance(cloud([0.0]), empty_region()) == math.inf


def test_one_sided_distance_matches_brute_force(disk):
    rng = np.random.default_rng(7)
    pts = 1.6 * (rng.uniform(-1, 1, 200) + 1j * rng.uniform(-1, 1, 200))
    centers = disk.centers()
    brute = np.abs(pts[:, None] - centers[None, :]).min(axis=1).max()
    assert one_sided_distance(cloud(pts), disk) == pytest.approx(brute, abs=1e-12)


def test_dilate_identity_and_empty(disk):
    assert dilate(disk, 0) is disk
    assert dilate(empty_region(), 1.0).is_empty


def test_dilate_area(disk):
    grown = dilate(disk, 0.1)
    assert grown.area() == pytest.approx(math.pi * 1.1**2, rel=0.05)
    # the original region is kept
    z = disk.centers()
    assert all(hull_contains(grown, p, 0) for p in z[::97])


def test_hole_filling_two_circles():
    S = curve(np.concatenate([circle(512), circle(1024, 2.0)]), 0.0124)
    H = polynomial_hull(S, 0.02)
    z = H.centers(np.ones(H.shape, bool))
    m = H.mask.ravel()
    band = 2 * H.cell_diagonal
    assert m[np.abs(z) < 2 - band].all()
    assert not m[np.abs(z) > 2 + band].any()


def test_union_exactness():
    a = curve(circle(8))
    b = CompactSetEstimate([3.0], "eigenvalues", exact=False)
    u = union(a, b)
    assert len(u) == 9 and not u.exact and u.kind == "region-raster"
    assert union(empty_set(), a).kind == "exact-curve"
    assert union().is_empty


def test_set_invariants():
    with pytest.raises(InvalidParameterError):
        CompactSetEstimate([], "eigenvalues")
    with pytest.raises(InvalidParameterError):
        CompactSetEstimate([1.0], "empty")
    with pytest.raises(InvalidParameterError):
        CompactSetEstimate([1.0], "exact-curve", 0.0)
    with pytest.raises(InvalidParameterError):
        HullRegion(0j, 0.0, np.zeros((1, 1)))


def test_boundary_of_region_never_touches_grid_edge(disk):
    m = disk.mask
    assert not (m[0].any() or m[-1].any() or m[:, 0].any() or m[:, -1].any())


clouds = st.lists(
    st.tuples(st.floats(-2, 2), st.floats(-2, 2)).map(lambda t: complex(*t)),
    min_size=1,
    max_size=30,
)


@settings(max_examples=40, deadline=None)
@given(clouds)
def test_extensive(pts):
    S = cloud(pts)
    H = polynomial_hull(S, 0.05)
    assert all(hull_contains(H, z, H.cell_diagonal) for z in pts)


@settings(max_examples=25, deadline=None)
@given(clouds, clouds)
def test_monotone(p, q):
    cs = 0.05
    small = polynomial_hull(cloud(p), cs)
    big = polynomial_hull(cloud(p + q), cs)
    slack = big.boundary_cells().sum() * cs**2
    assert small.area() <= big.area() + slack


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 1.5), st.integers(0, 3))
def test_idempotent(r, shift):
    cs = 0.02
    H = polynomial_hull(curve(circle(int(2 * math.pi * r / 0.01) + 8, r, shift * 0.3), 0.005), cs)
    rim = H.centers(H.boundary_cells())
    again = polynomial_hull(CompactSetEstimate(rim, "region-raster", cs), cs)
    layer = H.boundary_cells().sum() * cs**2
    assert abs(again.area() - H.area()) < 2 * layer
