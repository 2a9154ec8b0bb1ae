"""Extremal length of round annuli, polar separations and the length-area check."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .curves import PolygonalJordanCurve, split_at
from .geometry import Annulus, CurvePoint, as_point, as_points, d_inf
from .maps import Identity, MapSpec
from .raster import FOUR_CONNECTED, Grid, boundary_cell_count, polygon_mask

TWO_PI = 2 * math.pi


def extremal_length(A: Annulus) -> float:
    """``2 pi / ln(R / r)`` for the annulus ``r < |z - c| < R``."""
    return TWO_PI / math.log(A.outer / A.inner)


def extremal_length_radii(inner: float, outer: float) -> float:
    if not (0 < inner < outer):
        raise ValueError(f"need 0 < inner < outer, got inner = {inner}, outer = {outer}")
    return TWO_PI / math.log(outer / inner)


@dataclass
class RegionSample:
    """A planar region given by a cell mask on a grid."""

    grid: Grid
    mask: np.ndarray

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.shape != self.grid.shape:
            raise ValueError(f"mask shape {self.mask.shape} does not match grid {self.grid.shape}")

    @classmethod
    def from_predicate(cls, pred, grid: Grid) -> "RegionSample":
        return cls(grid, np.asarray(pred(grid.centers()), dtype=bool))

    @property
    def area_estimate(self) -> float:
        return float(np.count_nonzero(self.mask)) * self.grid.cell_area

    @property
    def area_std_error(self) -> float:
        # each boundary cell is a coin flip of up to one cell area
        return math.sqrt(boundary_cell_count(self.mask)) * self.grid.cell_area / math.sqrt(12)

    def contains(self, z) -> np.ndarray:
        return self.grid.lookup(self.mask, z)

    def member_centers(self) -> np.ndarray:
        return self.grid.centers()[self.mask]


@dataclass(frozen=True)
class PolarSeparationCandidate:
    E: np.ndarray
    F: np.ndarray

    def __post_init__(self):
        E, F = as_points(self.E), as_points(self.F)
        if not d_inf(E, F) > 0:
            raise ValueError("candidate sets intersect")
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "F", F)


@dataclass(frozen=True)
class SeparationResult:
    passed: bool
    failing_radius: float | None = None
    radii_checked: int = 0

    def __bool__(self):
        return self.passed


def _angular_runs(member: np.ndarray) -> list[tuple[int, int]]:
    """Maximal cyclic runs of True as (first, last) indices; last may wrap past len."""
    n = member.size
    if not member.any() or member.all():
        return []
    shift = int(np.argmin(member))  # a False entry
    m = np.roll(member, -shift)
    d = np.diff(np.concatenate([[0], m.astype(np.int8), [0]]))
    starts = np.flatnonzero(d == 1)
    stops = np.flatnonzero(d == -1) - 1
    return [((a + shift) % n, (b + shift) % n) for a, b in zip(starts, stops)]


def polar_separation_failure(A: Annulus, Omega: RegionSample, cand: PolarSeparationCandidate,
                             n_circles: int = 16, res: int = 1024) -> float | None:
    """Smallest intermediate radius at which no arc of ``C ∩ Omega`` meets both E and F.

    ``None`` when every circle passes. An arc's end points count as touching
    a set when within one cell diagonal plus one angular step of it.
    """
    if n_circles < 8:
        raise ValueError("n_circles must be at least 8")
    if res < 256:
        raise ValueError("res must be at least 256 points per circle")
    h = Omega.grid.h
    centers = Omega.member_centers()
    dist = np.abs(centers - A.center)
    if centers.size and (dist.min() < A.inner - h or dist.max() > A.outer + h):
        raise ValueError("region is not contained in the annulus")
    ratio = A.outer / A.inner
    theta = TWO_PI * np.arange(res) / res
    unit = np.exp(1j * theta)
    for i in range(1, n_circles + 1):
        rho = A.inner * ratio ** (i / (n_circles + 1))
        pts = A.center + rho * unit
        member = Omega.contains(pts)
        tol = math.sqrt(2) * h + rho * TWO_PI / res
        ok = False
        for a, b in _angular_runs(member):
            ends = pts[[a, b]]
            near_e = np.abs(ends[:, None] - cand.E[None, :]).min(axis=1) <= tol
            near_f = np.abs(ends[:, None] - cand.F[None, :]).min(axis=1) <= tol
            if near_e.any() and near_f.any():
                ok = True
                break
        if not ok:
            return float(rho)
    return None


def is_polar_separation(A: Annulus, Omega: RegionSample, cand: PolarSeparationCandidate,
                        n_circles: int = 16, res: int = 1024) -> SeparationResult:
    bad = polar_separation_failure(A, Omega, cand, n_circles, res)
    return SeparationResult(bad is None, bad, n_circles)


@dataclass(frozen=True)
class LengthAreaRecord:
    lam: float
    ratio: float
    ratio_std_error: float
    d_inf: float
    area: float
    holds: bool

    def to_json(self) -> dict:
        return {"lambda": self.lam, "ratio": self.ratio, "ratio_std_error": self.ratio_std_error,
                "d_inf": self.d_inf, "area": self.area, "holds": self.holds}


def length_area_check(A: Annulus, Omega: RegionSample, cand: PolarSeparationCandidate,
                      map_spec: MapSpec | None = None) -> LengthAreaRecord:
    """Compare ``d_inf(f[E], f[F])**2 / Area(f[Omega])`` with the extremal length of A.

    ``f`` is the catalog map's disk-to-domain formula applied as a conformal
    function near Omega (identity when omitted). The image area is the
    cell sum of ``|f'|**2``; its standard error comes from the boundary cells.
    """
    f = map_spec if map_spec is not None else Identity()
    lam = extremal_length(A)
    dist = d_inf(f.inverse(cand.E), f.inverse(cand.F))
    centers = Omega.member_centers()
    jac = np.abs(f.inverse_derivative(centers)) ** 2
    h2 = Omega.grid.cell_area
    area = float(jac.sum() * h2)
    if area == 0:
        if dist > 0:
            raise ValueError("degenerate region: zero area with positive separation")
        return LengthAreaRecord(lam, 0.0, 0.0, dist, 0.0, True)
    inner = ndimage.binary_erosion(Omega.mask, structure=FOUR_CONNECTED, border_value=0)
    edge_jac = np.abs(f.inverse_derivative(Omega.grid.centers()[Omega.mask & ~inner])) ** 2
    area_err = math.sqrt(float((edge_jac ** 2).sum())) * h2 / math.sqrt(12)
    ratio = dist * dist / area
    ratio_err = ratio * area_err / area
    return LengthAreaRecord(lam, ratio, ratio_err, dist, area, bool(lam >= ratio - 3 * ratio_err))


# ---------------------------------------------------------------------------
# standard instances


def upper_half_annulus(inner: float = 1.0, outer: float = math.e, grid_n: int = 1024,
                       n_samples: int = 2048) -> tuple[Annulus, RegionSample, PolarSeparationCandidate]:
    """Upper half of the annulus at 0, with E and F the two real-axis segments it ends on."""
    A = Annulus(0j, inner, outer)
    grid = Grid(-outer, 0.0, 2 * outer / grid_n, grid_n, grid_n // 2)

    def pred(z):
        d = np.abs(z)
        return (d >= inner) & (d <= outer) & (z.imag >= 0)

    omega = RegionSample.from_predicate(pred, grid)
    seg = np.linspace(inner, outer, n_samples)
    return A, omega, PolarSeparationCandidate(seg.astype(complex), (-seg).astype(complex))


def _densify(arc: np.ndarray, spacing: float) -> np.ndarray:
    out = [arc[:1]]
    for a, b in zip(arc[:-1], arc[1:]):
        m = max(int(math.ceil(abs(b - a) / spacing)), 1)
        out.append(a + (b - a) * np.arange(1, m + 1) / m)
    return np.concatenate(out)


def domain_separation(curve: PolygonalJordanCurve, A: Annulus, p: CurvePoint, q: CurvePoint,
                      grid_n: int = 1024) -> tuple[RegionSample, PolarSeparationCandidate]:
    """Omega = interior ∩ A; E, F = the two boundary subarcs between p and q, restricted to A.

    p must lie inside the inner circle and q outside the outer one, so every
    intermediate circle separates them.
    """
    zp, zq = curve.point(p), curve.point(q)
    if not (abs(zp - A.center) < A.inner and abs(zq - A.center) > A.outer):
        raise ValueError("p must lie inside the inner circle and q outside the outer circle")
    grid = Grid.around(A.center, A.outer, grid_n)
    inside = polygon_mask(curve.vertices, grid)
    omega = RegionSample(grid, inside & A.contains(grid.centers()))
    arcs = split_at(curve, p, q)
    pieces = []
    for arc in (arcs.arc1, arcs.arc2):
        pts = _densify(arc, grid.h / 2)
        keep = A.contains(pts)
        if not keep.any():
            raise ValueError("a boundary subarc misses the annulus")
        pieces.append(pts[keep])
    return omega, PolarSeparationCandidate(*pieces)


def annulus_at(zeta0, inner: float, outer: float) -> Annulus:
    return Annulus(as_point(zeta0), inner, outer)
