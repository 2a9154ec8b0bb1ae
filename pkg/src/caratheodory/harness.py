"""Empirical continuity and diameter verification for catalog maps."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import Log2Real
from .components import JordanDomain, boundary_component
from .geometry import as_point, set_diameter
from .maps import MapSpec, map_to_json

# a delta this far (in log2 units) below the scale of zeta0 cannot be sampled
VACUITY_GAP_LOG2 = 40.0
BATCH = 1 << 15
MAX_DRAW_FACTOR = 64


@dataclass
class VerificationReport:
    kind: str
    instance: dict
    samples: int
    violations: int
    worst_ratio: float
    seed: int | None = None
    runtime_ms: int = 0
    vacuous: bool = False
    passed: bool = True
    note: str = ""
    extras: dict = field(default_factory=dict)

    def to_json(self, include_runtime: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "instance": self.instance,
            "samples": self.samples,
            "violations": self.violations,
            "worst_ratio": self.worst_ratio,
            "seed": self.seed,
            "vacuous": self.vacuous,
            "passed": self.passed,
            "note": self.note,
        }
        if self.extras:
            out["extras"] = self.extras
        if include_runtime:
            out["runtime_ms"] = self.runtime_ms
        return out


def _instance(map_spec: MapSpec, zeta0: complex, **kw) -> dict:
    out = {"domain": map_to_json(map_spec), "zeta": [zeta0.real, zeta0.imag]}
    out.update(kw)
    return out


def _as_log2(delta) -> Log2Real:
    if isinstance(delta, Log2Real):
        return delta
    return Log2Real.from_float(float(delta))


def is_vacuous(zeta0: complex, delta: Log2Real) -> bool:
    """True when a delta-disk at zeta0 has no points distinguishable from zeta0 in doubles."""
    scale = math.log2(max(1.0, abs(zeta0)))
    return delta.is_zero or delta.log2_value < scale - VACUITY_GAP_LOG2


def verify_continuity(map_spec: MapSpec, zeta0, eps: float, delta, n_samples: int = 100_000,
                      seed: int = 42) -> VerificationReport:
    """Count points z of the domain with ``|z - zeta0| < delta`` and ``|phi(z) - phi(zeta0)| >= eps``.

    Points are drawn uniformly from the delta-disk with a Philox generator
    and kept when they fall in the domain (``|phi(z)| < 1``) until
    ``n_samples`` are accepted or the draw budget runs out.
    """
    t0 = time.perf_counter()
    zeta0 = as_point(zeta0)
    delta = _as_log2(delta)
    u = map_spec.boundary_preimage(zeta0)
    inst = _instance(map_spec, zeta0, eps=eps, log2_delta=delta.log2_value)
    if is_vacuous(zeta0, delta):
        return VerificationReport("continuity", inst, 0, 0, 0.0, seed, _ms(t0), True, True,
                                  "vacuous: no representable samples")
    d = delta.to_float()
    rng = np.random.Generator(np.random.Philox(seed))
    accepted = 0
    violations = 0
    worst = 0.0
    drawn = 0
    budget = MAX_DRAW_FACTOR * n_samples
    while accepted < n_samples and drawn < budget:
        m = min(BATCH, budget - drawn)
        r = d * np.sqrt(rng.random(m))
        th = 2 * np.pi * rng.random(m)
        z = zeta0 + r * np.exp(1j * th)
        drawn += m
        with np.errstate(all="ignore"):
            w = map_spec.forward(z)
        ok = np.isfinite(w) & (np.abs(w) < 1) & (r < d)
        w = w[ok][: n_samples - accepted]
        accepted += w.size
        if w.size:
            dist = np.abs(w - u)
            violations += int(np.count_nonzero(dist >= eps))
            worst = max(worst, float(dist.max()) / eps)
    note = "" if accepted == n_samples else f"draw budget exhausted after {accepted} accepted samples"
    return VerificationReport("continuity", inst, accepted, violations, worst, seed, _ms(t0), False,
                              violations == 0 and accepted > 0, note)


def verify_diameter(map_spec: MapSpec, zeta0, r0: float, eps: float, grid_n: int = 1024,
                    trace_n: int = 4096) -> VerificationReport:
    """Diameter of ``phi[C(D; zeta0, r0)]`` measured on cell centres; passes when below eps."""
    t0 = time.perf_counter()
    zeta0 = as_point(zeta0)
    map_spec.boundary_preimage(zeta0)
    D = JordanDomain.from_map(map_spec, trace_n)
    xmin, ymin, xmax, ymax = D.boundary.bbox
    extent = max(xmax - xmin, ymax - ymin)
    if r0 < 4 * extent / grid_n:
        raise ValueError(f"r0 unresolvable; increase grid_n or r0 (need r0 >= {4 * extent / grid_n:.3g})")
    comp = boundary_component(D, zeta0, r0, grid_n)
    w = map_spec.forward(comp.cell_centers())
    diam = set_diameter(w)
    ok = diam < eps
    inst = _instance(map_spec, zeta0, eps=eps, r0=r0, grid_n=grid_n)
    return VerificationReport("diameter", inst, comp.n_cells, 0 if ok else 1, diam / eps, None, _ms(t0),
                              False, bool(ok), "", {"diameter": diam, "area_estimate": comp.area_estimate})


def measured_image_diameter(map_spec: MapSpec, zeta0, r0: float, grid_n: int = 1024,
                            trace_n: int = 4096) -> float:
    return verify_diameter(map_spec, zeta0, r0, math.inf, grid_n, trace_n).extras["diameter"]


def _ms(t0: float) -> int:
    return int(round(1000 * (time.perf_counter() - t0)))
