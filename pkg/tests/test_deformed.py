"""Deformed products: both representations and the duality verifier."""

from fractions import Fraction as F

import pytest

from extparab import polygons
from extparab.deformed import Functional, dp_hrep, dp_verify, dp_vrep
from extparab.errors import DimensionMismatch, SizeMismatch
from extparab.extension import ConstructionParams, build, stage_polytope, stage_vertices
from extparab.polytope import HPolytope


def segment() -> HPolytope:
    # [0, 1] in R^1
    return HPolytope(A=((1,), (-1,)), b=(1, 0))


def quadrilateral_hrep():
    verts = polygons.ParabolaVertexList((F(0), F(1, 3), F(2, 3), F(1)))
    return polygons.polygon_hrep(verts)


def test_undeformed_product_is_cartesian():
    rows, beta = quadrilateral_hrep()
    phi = Functional.coordinate(1, 0)
    product = dp_hrep(segment(), phi, rows, beta, beta)
    assert product.num_facets == 6
    assert product.dim == 3
    # deformation term vanishes: fiber rows have a zero x-part
    for row in product.A[2:]:
        assert row[0] == 0
    assert product.b[2:] == beta


def test_dp_hrep_row_count_segment_fiber():
    rows, beta = polygons.polygon_hrep(polygons.build_family(4, 4, "V"))
    rows_w, beta_prime = polygons.polygon_hrep(polygons.build_family(4, 4, "W"))
    assert rows == rows_w
    product = dp_hrep(segment(), Functional.coordinate(1, 0), rows, beta, beta_prime)
    assert product.num_facets == 2 + 4
    assert product.dim == 3


def test_dp_hrep_q4_row_count():
    ext = build(ConstructionParams(n=16, d=4))
    assert ext.poly.num_facets == 8  # 4 base rows + 4 fiber rows
    assert ext.poly.dim == 4


def test_dp_hrep_dimension_mismatch():
    rows, beta = quadrilateral_hrep()
    with pytest.raises(DimensionMismatch):
        dp_hrep(segment(), Functional.coordinate(2, 0), rows, beta, beta)


def test_dp_vrep_endpoints():
    v_pts = [(F(0), F(0)), (F(1), F(0))]
    w_pts = [(F(1, 3), F(-2, 9)), (F(2, 3), F(-2, 9))]
    p_verts = [(F(0),), (F(1),)]
    phi_zero = Functional((F(0),))
    out = dp_vrep(p_verts, phi_zero, v_pts, w_pts)
    assert out == [p + v for p in p_verts for v in v_pts]

    # phi == 1 everywhere lands on the other fiber
    one = Functional((F(1),))
    out = dp_vrep([(F(1),)], one, v_pts, w_pts)
    assert out == [(F(1),) + w for w in w_pts]


def test_dp_vrep_interpolates():
    # With phi(p) = 1 the tail is w exactly; matches the t = 4 vertex of the
    # d = 4 tower whose fiber pair is (v_{0,1}, w_{0,1}) of the (4, 4) family.
    fam_v = polygons.build_family(4, 4, "V")
    fam_w = polygons.build_family(4, 4, "W")
    phi = Functional.coordinate(2, 0)
    p = (F(1), F(0))
    out = dp_vrep([p], phi, fam_v.points, fam_w.points)
    assert out[1] == p + polygons.h(F(4, 15))


def test_dp_vrep_size_mismatch():
    with pytest.raises(SizeMismatch):
        dp_vrep([(F(0),)], Functional((F(1),)), [(0, 0)], [(0, 0), (1, 0)])


def test_dp_vrep_count_multiplies():
    fam_v = polygons.build_family(4, 4, "V")
    fam_w = polygons.build_family(4, 4, "W")
    base = [polygons.h(F(t, 3)) for t in range(4)]
    out = dp_vrep(base, Functional.coordinate(2, 0), fam_v.points, fam_w.points)
    assert len(out) == len(base) * 4


def test_dp_verify_q4():
    ext = build(ConstructionParams(n=16, d=4))
    points = stage_vertices(ext, 4)
    report = dp_verify(ext.poly, points, expected_count=16)
    assert report.ok
    assert report.total == 16


def test_dp_verify_q6():
    ext = build(ConstructionParams(n=24, d=6))
    points = stage_vertices(ext, 6)
    assert ext.poly.num_facets == 12
    report = dp_verify(ext.poly, points, expected_count=64)
    assert report.ok


def test_dp_verify_flags_corruption():
    ext = build(ConstructionParams(n=16, d=4))
    points = [list(p) for p in stage_vertices(ext, 4)]
    points[5][0] += 1
    report = dp_verify(ext.poly, points, expected_count=16)
    assert not report.ok
    assert 5 in report.infeasible or 5 in report.non_simple


def test_dp_verify_flags_duplicates():
    ext = build(ConstructionParams(n=16, d=4))
    points = stage_vertices(ext, 4)
    report = dp_verify(ext.poly, points + [points[0]], expected_count=16)
    assert not report.ok
    assert report.duplicate_pairs == ((0, 16),)


def test_every_stage_passes_dp_verify():
    ext = build(ConstructionParams(n=24, d=6))
    for dim in (2, 4, 6):
        poly = stage_polytope(ext, dim)
        points = stage_vertices(ext, dim)
        expected = ext.params.level_m(dim)
        report = dp_verify(poly, points, expected_count=expected)
        assert report.ok, (dim, report)
        assert report.total == expected
