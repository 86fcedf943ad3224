import numpy as np
import pytest

from nrange.errors import EmptyIntersection, MalformedInput
from nrange.numrange import (
    ConvexRegion,
    SupportLine,
    corner_defect,
    distance_to_boundary,
    halfplane_polygon,
    hausdorff,
    intersect_regions,
    phi_grid,
    range_region,
    region_from_points,
    region_from_support,
    support_value,
)
from nrange.sweep import dilation_sweep


def _random_unit_vectors(rng, dim, count):
    x = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _disk(phi, center, radius):
    return region_from_support(phi, radius + (np.exp(-1j * phi) * center).real)


def test_hermitian_support():
    T = np.diag([1.0, -1.0])
    h, v = support_value(T, 0.0)
    assert h == pytest.approx(1.0)
    assert abs(abs(v[0]) - 1) < 1e-14
    h, _ = support_value(T, np.pi / 2)
    assert h == pytest.approx(0.0, abs=1e-15)
    assert range_region(T, 64).degenerate


def test_jordan_disk(jordan2, rng):
    region = range_region(jordan2, 2048)
    np.testing.assert_allclose(region.h, 0.5, atol=1e-14)
    assert abs(region.area() - np.pi / 4) < 1e-3
    np.testing.assert_allclose(np.abs(region.inner), 0.5, atol=1e-14)
    # sampled quadratic form values stay inside and come close to the boundary
    x = _random_unit_vectors(rng, 2, 20000)
    vals = np.einsum("ki,ij,kj->k", x.conj(), jordan2, x)
    assert np.abs(vals).max() <= 0.5 + 1e-14
    assert np.abs(vals).max() > 0.49


def test_random_vector_oracle(rng):
    T = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    region = range_region(T, 512)
    x = _random_unit_vectors(rng, 4, 5000)
    vals = np.einsum("ki,ij,kj->k", x.conj(), T, x)
    assert np.all(region.contains(vals, tol=1e-10))
    # the maximizers realize the support values
    np.testing.assert_allclose((np.exp(-1j * region.phi) * region.inner).real, region.h, atol=1e-12)


def test_normal_matrix_is_hull():
    ev = np.array([1, 1j, -1])
    a = range_region(np.diag(ev), 2048)
    b = region_from_points(ev, 2048)
    assert hausdorff(a, b) < 1e-14
    assert set(np.round(b.boundary, 12)) == set(np.round(ev, 12))


def test_point_and_segment_hulls():
    p = region_from_points([0.3 + 0.1j] * 3, 64)
    assert p.boundary.size == 1
    s = region_from_points([0, 1, 0.5], 64)
    assert s.boundary.size == 2
    assert s.degenerate


def test_intersection_idempotent(jordan2):
    r = range_region(jordan2 + 0.2, 1024)
    both = intersect_regions([r, r])
    assert hausdorff(both, r) < 1e-12


def test_lens_area():
    phi = phi_grid(4096)
    lens = intersect_regions([_disk(phi, 0.5, 1.0), _disk(phi, -0.5, 1.0)])
    exact = 2 * np.arccos(0.5) - 0.5 * np.sqrt(3)
    assert abs(lens.area() - exact) < 1e-4
    assert lens.h[0] == pytest.approx(0.5, abs=1e-12)
    assert lens.h[1024] == pytest.approx(np.sqrt(3) / 2, abs=1e-6)


def test_disjoint_regions():
    phi = phi_grid(256)
    with pytest.raises(EmptyIntersection):
        intersect_regions([_disk(phi, 2.0, 0.5), _disk(phi, -2.0, 0.5)])


def test_disk_square_hausdorff():
    phi = phi_grid(2048)
    disk = _disk(phi, 0.0, 1.0)
    square = region_from_points([1, 1j, -1, -1j], phi=phi)
    assert hausdorff(disk, square) == pytest.approx(1 - np.sqrt(2) / 2, abs=1e-14)


def test_hausdorff_requires_shared_grid():
    with pytest.raises(ValueError):
        hausdorff(_disk(phi_grid(64), 0, 1), _disk(phi_grid(128), 0, 1))


def test_halfplane_polygon_square():
    phi = np.arange(4) * np.pi / 2
    poly = halfplane_polygon(phi, np.ones(4))
    assert set(np.round(poly, 12)) == {1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j}
    with pytest.raises(ValueError):
        halfplane_polygon(phi[:2], np.ones(2))


def test_distance_to_boundary():
    r = _disk(phi_grid(1024), 0, 1)
    assert distance_to_boundary(r, 0.25) == pytest.approx(0.75, abs=1e-5)
    assert distance_to_boundary(r, 2.0) < 0


def test_triangle_corners():
    T = np.diag([1, 1j, -1])
    corners = corner_defect(range_region(T, 1024), range_region(T, 2048))
    assert len(corners) == 3
    assert not any(c.inside_disk for c in corners)
    got = sorted(corners, key=lambda c: np.angle(c.vertex))
    np.testing.assert_allclose([c.vertex for c in got], [1, 1j, -1], atol=1e-10)
    np.testing.assert_allclose([c.angle for c in got], [3 * np.pi / 4, np.pi / 2, 3 * np.pi / 4], atol=1e-2)


def test_smooth_boundary_has_no_corners():
    J3 = np.diag([1, 1], -1).astype(complex)
    assert corner_defect(range_region(J3, 1024), range_region(J3, 2048)) == []


def test_corner_grid_mismatch(jordan2):
    with pytest.raises(ValueError):
        corner_defect(range_region(jordan2, 1024), range_region(jordan2, 1024))


def test_support_line_through():
    line = SupportLine.through(1, 1j)
    assert line.angle == pytest.approx(np.pi / 4)
    assert line.offset == pytest.approx(np.sqrt(2) / 2)


def test_region_json_roundtrip(jordan2):
    r = range_region(jordan2, 64)
    back = ConvexRegion.from_json(r.to_json())
    np.testing.assert_array_equal(back.h, r.h)
    np.testing.assert_array_equal(back.boundary, r.boundary)
    with pytest.raises(MalformedInput):
        ConvexRegion.from_json({"phi": [0, 1], "h": [1]})


def test_jordan_sweep(jordan2):
    res = dilation_sweep(jordan2, 360, 1024)
    assert res.gap < 1e-3
    assert res.skipped == 0


def test_sweep_unitary_and_double_defect(rng):
    U = np.diag(np.exp(1j * np.array([0.1, 2.0, 4.0])))
    assert dilation_sweep(U, 36, 256).gap < 1e-12
    res = dilation_sweep(np.zeros((2, 2)), 180, 512)
    # W(0) is a point; the intersection shrinks toward it
    assert res.gap < 1e-2
