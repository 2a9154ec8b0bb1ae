import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from caratheodory.curves import PolygonalJordanCurve, SubarcPair, split_at, subarc_diameter, trace_map_boundary
from caratheodory.geometry import CurvePoint, Location, set_diameter
from caratheodory.maps import CATALOG, Identity, Mobius, Quad


def test_orientation_normalized():
    cw = PolygonalJordanCurve([0, 1j, 1 + 1j, 1])
    assert cw.area > 0
    assert set(cw.vertices.tolist()) == {0, 1, 1 + 1j, 1j}


def test_construction_errors():
    with pytest.raises(ValueError):
        PolygonalJordanCurve([0, 1])
    with pytest.raises(ValueError):
        PolygonalJordanCurve([0, 1, 1, 1j])


def test_basic_measures(square):
    assert square.perimeter == pytest.approx(4)
    assert square.bbox == (0, 0, 1, 1)
    assert square.point(CurvePoint(1, 0.5)) == 1 + 0.5j
    assert square.arclength(CurvePoint(2, 0.25)) == pytest.approx(2.25)
    assert square.locate(0.5 + 1j) == CurvePoint(2, 0.5)
    assert square.inward_normal(CurvePoint(0, 0.5)) == pytest.approx(1j)
    assert square.contains(0.5 + 0.5j) is Location.INSIDE


def test_json_round_trip(square):
    obj = square.to_json()
    assert obj["type"] == "polygon"
    back = PolygonalJordanCurve.from_json(obj)
    np.testing.assert_array_equal(back.vertices, square.vertices)


def test_split_square_midpoints(square):
    pair = split_at(square, CurvePoint(0, 0.5), CurvePoint(2, 0.5))
    assert SubarcPair.length(pair.arc1) == pytest.approx(2)
    assert SubarcPair.length(pair.arc2) == pytest.approx(2)
    assert pair.arc1[0] == 0.5 and pair.arc1[-1] == 0.5 + 1j


def test_split_same_edge(square):
    pair = split_at(square, CurvePoint(0, 0.2), CurvePoint(0, 0.7))
    assert pair.arc1.tolist() == [0.2, 0.7]
    assert SubarcPair.length(pair.arc1) == pytest.approx(0.5)
    assert SubarcPair.length(pair.arc2) == pytest.approx(3.5)


def test_split_opposite_vertices(square):
    pair = split_at(square, CurvePoint(0, 0.0), CurvePoint(2, 0.0))
    assert pair.arc1.tolist() == [0, 1, 1 + 1j]
    assert pair.arc2.tolist() == [1 + 1j, 1j, 0]
    # (i, 1) and (i + 1, 0) name the same point
    again = split_at(square, CurvePoint(3, 1.0), CurvePoint(1, 1.0))
    assert again.arc1.tolist() == pair.arc1.tolist()


def test_degenerate_split(square):
    with pytest.raises(ValueError, match="degenerate split"):
        split_at(square, CurvePoint(0, 1.0), CurvePoint(1, 0.0))


def test_subarc_diameter_examples():
    assert subarc_diameter([0j, 3]) == pytest.approx(3)
    assert subarc_diameter([0, 1, 1 + 1j]) == pytest.approx(math.sqrt(2))
    semi = np.exp(1j * np.linspace(0, np.pi, 4097))
    assert subarc_diameter(semi) == pytest.approx(2, abs=1e-6)
    with pytest.raises(ValueError):
        subarc_diameter([])


def test_trace_identity():
    c = trace_map_boundary(Identity(), 4096)
    assert len(c) == 4096
    np.testing.assert_allclose(np.abs(c.vertices), 1, atol=1e-12)


def test_trace_quad_cusp():
    c = trace_map_boundary(Quad(0.5), 4096)
    assert np.any(np.abs(c.vertices + 0.5) < 1e-15)


def test_trace_mobius_is_circle():
    c = trace_map_boundary(Mobius(0.5), 1024)
    assert np.all(np.abs(c.vertices) <= 1 + 1e-12)
    np.testing.assert_allclose(np.abs(c.vertices), 1, atol=1e-12)


def test_trace_too_coarse():
    with pytest.raises(ValueError):
        trace_map_boundary(Identity(), 8)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_traces_simple(name):
    trace_map_boundary(CATALOG[name], 4096)


def _curve_points(n_edges):
    return st.tuples(st.integers(0, n_edges - 1), st.floats(0, 1))


@given(_curve_points(6), _curve_points(6))
def test_split_invariants(a, b):
    hexagon = PolygonalJordanCurve(np.exp(2j * np.pi * np.arange(6) / 6) * (1 + 0.3 * (np.arange(6) % 2)))
    p, q = CurvePoint(*a), CurvePoint(*b)
    zp, zq = hexagon.point(p), hexagon.point(q)
    if abs(zp - zq) < 1e-9:
        return
    pair = split_at(hexagon, p, q)
    total = SubarcPair.length(pair.arc1) + SubarcPair.length(pair.arc2)
    assert total == pytest.approx(hexagon.perimeter, rel=1e-9)
    d1, d2 = subarc_diameter(pair.arc1), subarc_diameter(pair.arc2)
    assert min(d1, d2) >= abs(zp - zq) - 1e-12
    assert max(d1, d2) <= set_diameter(hexagon.vertices) + 1e-12
