"""The ten acceptance checks, each runnable on its own."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .annuli import extremal_length, extremal_length_radii, length_area_check, upper_half_annulus, is_polar_separation
from .bounds import (
    BoundQuery,
    annulus_diameter_bound,
    delta_of,
    threshold_radius,
    window_radius,
)
from .components import (
    JordanDomain,
    boundary_component,
    circle_cut_components,
    components_reaching,
    random_convex_polygon,
    separated_circle_instance,
)
from .curves import PolygonalJordanCurve, trace_map_boundary
from .geometry import Annulus
from .harness import measured_image_diameter, verify_continuity
from .maps import CATALOG, Mobius, Quad, catalog_boundary_points
from .mlc import MLCTable, check_mlc, corridor_polygon, estimate_mlc, raw_mlc
from .raster import Grid

EPSILONS = (0.1, 0.25, 0.5, 0.9)
R0_VALUES = (0.2, 0.1, 0.05)
R_VALUES = (0.05, 0.1, 0.2)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:>2} {mark}  {self.title}  ({self.seconds:.1f}s)  {self.detail}"

    def to_json(self, include_runtime: bool = False) -> dict:
        out = {"criterion": self.number, "title": self.title, "passed": self.passed, "detail": self.detail}
        if self.data:
            out["data"] = self.data
        if include_runtime:
            out["seconds"] = self.seconds
        return out


def _catalog_points():
    for name, m in CATALOG.items():
        for j, z in enumerate(catalog_boundary_points(m)):
            yield name, m, j, z


# ---------------------------------------------------------------------------


def criterion_1() -> tuple[bool, str, dict]:
    cases = [(1.0, math.e, 2 * math.pi), (1.0, math.exp(2 * math.pi), 1.0), (2.0, 2 * math.e ** 2, math.pi)]
    worst = max(abs(extremal_length(Annulus(0, r, R)) - want) / want for r, R, want in cases)
    rs = np.linspace(0.05, 1.0, 20)
    Rs = np.linspace(1.1, 20.0, 20)
    lam = np.array([[extremal_length_radii(r, R) for R in Rs] for r in rs])
    dec_R = bool(np.all(np.diff(lam, axis=1) < 0))
    inc_r = bool(np.all(np.diff(lam, axis=0) > 0))
    scale_err = 0.0
    for c in (1e-3, 0.37, 2.0, 1e3):
        for i, r in enumerate(rs):
            for j, R in enumerate(Rs):
                lc = extremal_length(Annulus(1 + 1j, r, R).scaled(c))
                scale_err = max(scale_err, abs(lc - lam[i, j]) / lam[i, j])
    ok = worst <= 1e-12 and dec_R and inc_r and scale_err <= 1e-12
    return ok, f"closed-form rel err {worst:.1e}, monotone {dec_R and inc_r}, scale rel err {scale_err:.1e}", {}


def criterion_2() -> tuple[bool, str, dict]:
    eps = np.arange(1, 100) / 100
    val = window_radius(eps / 2, eps) ** 2
    ok = bool(np.all((val > 7 / 16) & (val < 1)))
    return ok, f"range [{val.min():.6f}, {val.max():.6f}] over 99 epsilons", {}


def _thresholds():
    out = []
    for name, m, j, z in _catalog_points():
        for eps in EPSILONS:
            q = BoundQuery(m, z, eps)
            out.append((name, j, eps, q, threshold_radius(q)))
    return out


def _cached_thresholds(cache: dict | None):
    if cache is None:
        return _thresholds()
    if "thresholds" not in cache:
        cache["thresholds"] = _thresholds()
    return cache["thresholds"]


def criterion_3(cache: dict | None = None) -> tuple[bool, str, dict]:
    rows = _cached_thresholds(cache)
    finite = [np.isfinite(r[4].threshold.log2_value) for r in rows]
    vals = [r[4].threshold.log2_value for r in rows]
    ok = all(finite) and len(rows) == len(CATALOG) * 4 * len(EPSILONS)
    return ok, f"{sum(finite)}/{len(rows)} thresholds positive, log2 in [{min(vals):.1f}, {max(vals):.1f}]", {}


def criterion_4(cache: dict | None = None) -> tuple[bool, str, dict]:
    rows = _cached_thresholds(cache)
    table = MLCTable.linear(1, 8)
    margins = []
    for _, _, _, q, _ in rows:
        margins.append(delta_of(q, table).margin_log2)
    worst = min(margins)
    return worst >= 1, f"{len(margins)} instances, smallest log2 margin {worst:.3f}", {}


def hand_scaled_delta(map_spec, eps: float) -> float:
    """A delta that is sound by a derivative bound: ``eps * min|psi'| / 4``."""
    w = np.exp(2j * np.pi * np.arange(4096) / 4096)
    m = float(np.abs(map_spec.inverse_derivative(w)).min())
    return eps * m / 4


def criterion_5(n_samples: int = 100_000, seed: int = 42) -> tuple[bool, str, dict]:
    eps = 0.5
    bad = []
    total = 0
    for name, m, j, z in _catalog_points():
        rep = verify_continuity(m, z, eps, hand_scaled_delta(m, eps), n_samples, seed + j)
        total += rep.samples
        if rep.violations or rep.samples < n_samples:
            bad.append(f"{name}[{j}]: {rep.violations} violations, {rep.samples} samples")
    # the formula's delta for the quadratic domain, with an estimated boundary table
    quad = Quad(0.25)
    table = estimate_mlc(trace_map_boundary(quad, 1024), kmax=4, resolution=1024)
    d = delta_of(BoundQuery(quad, 1.25, 0.25), table)
    formula = verify_continuity(quad, 1.25, 0.25, d.delta, n_samples, seed)
    formula_ok = formula.violations == 0 and (formula.vacuous or formula.samples > 0)
    planted = verify_continuity(CATALOG["identity"], 1.0, 0.5, 1.2, n_samples, seed)
    ok = not bad and formula_ok and planted.violations >= 1
    detail = (f"{total} samples, {len(bad)} failing instances; formula delta 2**{d.delta.log2_value:.1f} "
              f"{'vacuous' if formula.vacuous else 'sampled'}; planted self-test {planted.violations} violations")
    if bad:
        detail += "; " + "; ".join(bad[:3])
    return ok, detail, {}


def criterion_6(grid_n: int = 1024) -> tuple[bool, str, dict]:
    tol = 4 / grid_n
    failures = []
    checked = 0
    for name, m, j, z in _catalog_points():
        for r0 in R0_VALUES:
            measured = measured_image_diameter(m, z, r0, grid_n)
            try:
                bound = annulus_diameter_bound(m, z, r0).bound
            except ValueError as exc:
                failures.append(f"{name}[{j}] r0={r0}: measured {measured:.4f}, no bound ({exc})")
                continue
            checked += 1
            if not measured <= bound + tol:
                failures.append(f"{name}[{j}] r0={r0}: measured {measured:.4f} > bound {bound:.4f}")
    n = len(CATALOG) * 4 * len(R0_VALUES)
    detail = f"{checked}/{n} instances bounded"
    if failures:
        detail += f"; {len(failures)} failures, first: {failures[0]}"
    return not failures, detail, {}


def criterion_7() -> tuple[bool, str, dict]:
    circle = trace_map_boundary(CATALOG["identity"], 16384)
    table = MLCTable.linear(1, 8)
    circle_ok = all(check_mlc(circle, table, k, 2 ** 14) is None for k in range(9))
    square = PolygonalJordanCurve([0, 1, 1 + 1j, 1j])
    raw = raw_mlc(square, 6, 4096)
    square_ok = all(g <= k + 2 for k, g in enumerate(raw))
    corridor = corridor_polygon(2.0 ** -5)
    witness = check_mlc(corridor, MLCTable.linear(1, 1), 1, 4096)
    est = estimate_mlc(corridor, 1, 4096)
    witness_ok = witness is not None and witness.best_arc_diameter > 0.5
    ok = circle_ok and square_ok and witness_ok and est.value(1) >= 5
    detail = (f"circle k<=8 {'pass' if circle_ok else 'FAIL'}; square raw g {raw}; corridor witness "
              f"d={witness.pair_distance if witness else float('nan'):.5f}, g(1)={est.value(1)}")
    return ok, detail, {}


def criterion_8() -> tuple[bool, str, dict]:
    A, omega, cand = upper_half_annulus(grid_n=1024)
    sep = is_polar_separation(A, omega, cand)
    ident = length_area_check(A, omega, cand)
    mob = length_area_check(A, omega, cand, Mobius(0.3))
    want = 8 / (math.pi * (math.e ** 2 - 1))
    rel = abs(ident.ratio - want) / want
    ok = bool(sep) and ident.holds and mob.holds and rel <= 0.02
    return ok, (f"identity ratio {ident.ratio:.4f} (rel err {rel:.1e}), mobius ratio {mob.ratio:.4f}, "
                f"lambda {ident.lam:.4f}"), {}


def criterion_9(n_instances: int = 100, seed: int = 42) -> tuple[bool, str, dict]:
    rng = np.random.Generator(np.random.Philox(seed))
    missing = 0
    for _ in range(n_instances):
        curve = random_convex_polygon(rng)
        C, p, q = separated_circle_instance(rng, curve)
        arcs = circle_cut_components(JordanDomain(curve), C, p, q)
        if not any(a.labels == {1, 2} for a in arcs):
            missing += 1
    return missing == 0, f"{n_instances - missing}/{n_instances} instances with a doubly labelled arc", {}


def criterion_10(grid_n: int = 1024) -> tuple[bool, str, dict]:
    not_unique = []
    not_nested = []
    for name, m, j, z in _catalog_points():
        D = JordanDomain.from_map(m)
        for r in R_VALUES:
            _, reaching = components_reaching(D, z, r, grid_n)
            if reaching != 1:
                not_unique.append(f"{name}[{j}] r={r}: {reaching}")
        grid = Grid.around(z, max(R_VALUES), grid_n)
        masks = [boundary_component(D, z, r, grid=grid).mask for r in sorted(R_VALUES)]
        for small, big in zip(masks, masks[1:]):
            if np.any(small & ~big):
                not_nested.append(f"{name}[{j}]")
    ok = not not_unique and not not_nested
    n = len(CATALOG) * 4
    detail = f"{n * len(R_VALUES) - len(not_unique)}/{n * len(R_VALUES)} unique, {n - len(not_nested)}/{n} nested"
    if not_unique:
        detail += "; " + ", ".join(not_unique[:3])
    return ok, detail, {}


CRITERIA = {
    1: ("extremal length closed form", criterion_1),
    2: ("sanity window at l = eps/2", criterion_2),
    3: ("threshold positivity", criterion_3),
    4: ("soundness inequality delta < threshold", criterion_4),
    5: ("continuity verification", criterion_5),
    6: ("diameter bound from annuli", criterion_6),
    7: ("moduli of local connectivity", criterion_7),
    8: ("length-area inequality", criterion_8),
    9: ("circle cuts meet both subarcs", criterion_9),
    10: ("boundary component uniqueness and nesting", criterion_10),
}


def run_criterion(number: int, cache: dict | None = None) -> CriterionResult:
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        if number in (3, 4):
            ok, detail, data = fn(cache)
        else:
            ok, detail, data = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail, data = False, f"error: {type(exc).__name__}: {exc}", {}
    return CriterionResult(number, title, bool(ok), detail, time.perf_counter() - t0, data)


def run_all(numbers=None) -> list[CriterionResult]:
    cache: dict = {}
    return [run_criterion(n, cache) for n in (numbers or sorted(CRITERIA))]
