import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from caratheodory import mlc
from caratheodory.components import random_convex_polygon
from caratheodory.curves import PolygonalJordanCurve, trace_map_boundary
from caratheodory.geometry import Circle, CurvePoint
from caratheodory.maps import Identity
from caratheodory.mlc import (
    MLCTable,
    check_mlc,
    corridor_polygon,
    estimate_mlc,
    raw_mlc,
    smallest_passing_g,
    verify_membership_theorem,
)


@pytest.fixture(scope="module")
def circle():
    return trace_map_boundary(Identity(), 2048)


def test_table_basics():
    t = MLCTable.linear(1, 4)
    assert t.g == (1, 2, 3, 4, 5) and t.kmax == 4
    assert t.value(10) == 11
    assert MLCTable((1, 3, 2)).monotonized().g == (1, 3, 3)
    assert not MLCTable((1, 3, 2)).is_increasing()
    with pytest.raises(ValueError, match="does not cover"):
        MLCTable((1, 2)).value(2)
    with pytest.raises(ValueError):
        MLCTable(())
    with pytest.raises(ValueError):
        MLCTable((1, -1))


def test_table_json():
    t = MLCTable((2, 3, 4), extension_pad=2)
    obj = json.loads(json.dumps(t.to_json()))
    assert obj == {"kmax": 2, "g": [2, 3, 4], "extension_pad": 2}
    assert MLCTable.from_json(obj) == t
    assert MLCTable.from_json('{"kmax": 1, "g": [0, 1]}').g == (0, 1)
    with pytest.raises(ValueError):
        MLCTable.from_json({"kmax": 3, "g": [0, 1]})
    with pytest.raises(ValueError):
        MLCTable.from_json({"g": [0, 1.5]})


def test_check_k_out_of_range(square):
    with pytest.raises(ValueError, match="out of table range"):
        check_mlc(square, MLCTable.linear(1, 2), 3)
    with pytest.raises(ValueError):
        check_mlc(square, MLCTable.linear(1, 2), 1, resolution=16)


def test_circle_passes(circle):
    assert check_mlc(circle, MLCTable.linear(1, 8), 3, 1024) is None


def test_circle_fails_without_gap(circle):
    # g(k) = k - 1 lets chords of length 2**-(k-1) through; the short arc is longer than 2**-k
    w = check_mlc(circle, MLCTable((0, 0, 1, 2, 3)), 3, 1024)
    assert w is not None
    assert w.best_arc_diameter >= 2.0 ** -3
    assert 0 < w.pair_distance <= 2.0 ** -2 + 1e-12


def test_corridor_witness():
    c = corridor_polygon()
    w = check_mlc(c, MLCTable.linear(1, 4), 1, 1024)
    assert w is not None
    assert w.k == 1
    assert w.pair_distance == pytest.approx(2.0 ** -5)
    assert w.best_arc_diameter > 0.5
    assert w.p <= w.q
    obj = w.to_json()
    assert obj["k"] == 1 and len(obj["p"]) == 2


def test_witness_invariants_random():
    rng = np.random.default_rng(5)
    for _ in range(5):
        curve = random_convex_polygon(rng, 12)
        for k in range(4):
            w = check_mlc(curve, MLCTable([0] * 4), k, 256)
            if w is not None:
                assert 0 < w.pair_distance <= 1 + 1e-12
                assert w.best_arc_diameter >= 2.0 ** -k - 1e-12


def test_single_edge_pairs_never_fail():
    # a long thin rectangle: every pair closer than 2**-(k+1) on the long edges is fine
    rect = PolygonalJordanCurve([0, 4, 4 + 1j, 1j])
    assert check_mlc(rect, MLCTable.linear(1, 3), 3, 512) is None


def test_square_raw_estimate(square):
    raw = raw_mlc(square, 4, 1024)
    assert all(g <= k + 2 for k, g in enumerate(raw))


def test_circle_raw_estimate(circle):
    assert raw_mlc(circle, 4, 1024) == [1, 2, 3, 4, 5]


def test_estimate_pads_and_monotonizes(square):
    t = estimate_mlc(square, 3, 512)
    raw = raw_mlc(square, 3, 512)
    assert t.g == tuple(np.maximum.accumulate([g + 1 for g in raw]))
    assert t.is_increasing()
    assert t.extension_pad == t.g[-1] - 3
    with pytest.raises(ValueError):
        estimate_mlc(square, -1)


def test_corridor_needs_large_g():
    assert smallest_passing_g(corridor_polygon(), 1, 1024) >= 5


def test_not_locally_connected(monkeypatch):
    monkeypatch.setattr(mlc, "MAX_G", 3)
    with pytest.raises(RuntimeError, match="not locally connected"):
        smallest_passing_g(corridor_polygon(), 0, 256)


@given(st.integers(0, 10_000), st.integers(0, 3), st.integers(0, 3), st.integers(1, 3))
def test_check_monotone_in_g(seed, k, pad, extra):
    curve = random_convex_polygon(np.random.default_rng(seed), 10)
    if check_mlc(curve, MLCTable.linear(pad, 3), k, 256) is None:
        assert check_mlc(curve, MLCTable.linear(pad + extra, 3), k, 256) is None


@given(st.integers(0, 10_000), st.integers(0, 3), st.integers(0, 2))
def test_check_monotone_in_resolution(seed, k, pad):
    curve = random_convex_polygon(np.random.default_rng(seed), 10)
    t = MLCTable.linear(pad, 3)
    if check_mlc(curve, t, k, 512) is None:
        assert check_mlc(curve, t, k, 256) is None
        assert check_mlc(curve, t, k, 128) is None


@given(st.integers(0, 10_000))
def test_estimate_increasing(seed):
    curve = random_convex_polygon(np.random.default_rng(seed), 8)
    t = estimate_mlc(curve, 3, 256)
    assert t.is_increasing()


# ----------------------------------------------------------------------------- membership theorem


def test_membership_circle(circle):
    t = MLCTable.linear(1, 8)
    assert verify_membership_theorem(circle, t, Circle(1, 0.3), 1 - 2.0 ** -8, 1, 6, 512)


def test_membership_hypothesis_distance(circle):
    t = MLCTable.linear(1, 8)
    with pytest.raises(ValueError, match="theorem hypotheses not met: \\|z0 - zeta0\\|"):
        verify_membership_theorem(circle, t, Circle(1, 0.3), 1 - 4 * 2.0 ** -7, 1, 6, 512)


def test_membership_hypothesis_clauses(circle):
    t = MLCTable.linear(1, 8)
    disk = Circle(1, 0.3)
    with pytest.raises(ValueError, match="zeta0 is not on the curve"):
        verify_membership_theorem(circle, t, disk, 0.99, 0.98, 6)
    with pytest.raises(ValueError, match="z0 is not inside the disk"):
        verify_membership_theorem(circle, t, Circle(1, 0.01), 0.98, 1, 6)
    with pytest.raises(ValueError, match="z0 lies on the curve"):
        verify_membership_theorem(circle, t, disk, 1, 1, 6)
    with pytest.raises(ValueError, match="exceeds the distance"):
        verify_membership_theorem(circle, t, Circle(1, 0.3), 1 - 2.0 ** -8, 1, 1)


def test_membership_square(square):
    t = MLCTable.linear(1, 8)
    assert verify_membership_theorem(square, t, Circle(0.5, 0.3), 0.5 + 2.0 ** -8 * 1j, CurvePoint(0, 0.5), 6, 512)


def test_membership_from_outside(square):
    t = MLCTable.linear(1, 8)
    assert verify_membership_theorem(square, t, Circle(0.5, 0.3), 0.5 - 2.0 ** -8 * 1j, 0.5, 6, 512)
