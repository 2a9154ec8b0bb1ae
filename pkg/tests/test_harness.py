import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caratheodory.bounds import BoundQuery, Log2Real, delta_of
from caratheodory.harness import is_vacuous, measured_image_diameter, verify_continuity, verify_diameter
from caratheodory.maps import CATALOG, Identity, Mobius, Quad
from caratheodory.mlc import MLCTable

# pinned by a preliminary run at grid_n = 1024, trace n = 4096
MOBIUS_HALF_DIAMETER = 0.29818


def test_identity_sound_delta():
    rep = verify_continuity(Identity(), 1, 0.5, 0.1, 100_000, 42)
    assert rep.samples == 100_000
    assert rep.violations == 0 and rep.passed and not rep.vacuous
    # identity: the ratio is |z - zeta0| / eps < 0.1 / 0.5
    assert 0 < rep.worst_ratio < 0.2


def test_planted_unsound_delta():
    rep = verify_continuity(Identity(), 1, 0.5, 1.2, 20_000, 42)
    assert rep.violations > 0 and not rep.passed
    assert rep.worst_ratio >= 1


def test_formula_delta_is_vacuous():
    d = delta_of(BoundQuery(Quad(0.25), 1.25, 0.25), MLCTable.linear(2, 8))
    rep = verify_continuity(Quad(0.25), 1.25, 0.25, d.delta, 1000, 7)
    assert rep.vacuous and rep.passed and rep.violations == 0
    assert rep.note.startswith("vacuous")


def test_vacuity_threshold():
    assert is_vacuous(1, Log2Real(-41))
    assert not is_vacuous(1, Log2Real(-39))
    assert is_vacuous(1, Log2Real.zero())


def test_continuity_report_json():
    rep = verify_continuity(Mobius(0.3), 1, 0.5, 0.01, 500, 3)
    js = rep.to_json()
    assert {"samples", "violations", "worst_ratio", "seed", "runtime_ms", "instance"} <= set(js)
    assert js["instance"]["domain"]["map"]["kind"] == "mobius"
    assert "runtime_ms" not in rep.to_json(include_runtime=False)


@settings(max_examples=10)
@given(st.integers(0, 2 ** 32 - 1))
def test_continuity_deterministic(seed):
    a = verify_continuity(Quad(0.25), 1.25, 0.25, 0.01, 2000, seed)
    b = verify_continuity(Quad(0.25), 1.25, 0.25, 0.01, 2000, seed)
    assert a.to_json(include_runtime=False) == b.to_json(include_runtime=False)


def test_diameter_identity():
    rep = verify_diameter(Identity(), 1, 0.1, 0.5, 1024)
    d = rep.extras["diameter"]
    assert d <= 0.2 and rep.passed


def test_diameter_mobius_pinned():
    rep = verify_diameter(Mobius(0.5), 1, 0.05, 0.5, 1024)
    assert rep.passed
    assert rep.extras["diameter"] == pytest.approx(MOBIUS_HALF_DIAMETER, abs=1e-4)


def test_diameter_unresolvable():
    with pytest.raises(ValueError, match="r0 unresolvable"):
        verify_diameter(Identity(), 1, 1e-9, 0.5, 1024)


def test_diameter_can_fail():
    rep = verify_diameter(Identity(), 1, 0.5, 0.1, 256)
    assert not rep.passed and rep.violations == 1


@pytest.mark.parametrize("name", ["identity", "mobius", "quad"])
def test_diameter_grows_with_radius(name):
    m = CATALOG[name]
    z = m.boundary_point(0.0)
    small = measured_image_diameter(m, z, 0.05, 512)
    big = measured_image_diameter(m, z, 0.2, 512)
    assert small < big
