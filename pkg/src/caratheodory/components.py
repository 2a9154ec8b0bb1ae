"""Disk/domain intersections, crosscut sides and circle cuts on cell grids."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from shapely.geometry import LineString

from .curves import PolygonalJordanCurve, split_at
from .geometry import Circle, CurvePoint, as_point, as_points, circle_polygon_intersection, polyline_distance, winding_number
from .maps import MapSpec, map_from_json
from .raster import Grid, disk_mask, label, polygon_mask, touching_labels

DEFAULT_TRACE_N = 4096


@dataclass(frozen=True)
class JordanDomain:
    """Interior of a polygonal Jordan curve, optionally carrying its conformal map."""

    boundary: PolygonalJordanCurve
    map: MapSpec | None = None

    @classmethod
    def from_map(cls, map_spec: MapSpec, n: int = DEFAULT_TRACE_N) -> "JordanDomain":
        from .curves import trace_map_boundary

        return cls(trace_map_boundary(map_spec, n), map_spec)

    @classmethod
    def from_json(cls, obj, trace_n: int = DEFAULT_TRACE_N) -> "JordanDomain":
        if isinstance(obj, str):
            obj = json.loads(obj)
        kind = obj.get("type")
        if kind == "polygon":
            return cls(PolygonalJordanCurve.from_json(obj))
        if kind == "mapped_disk":
            return cls.from_map(map_from_json(obj), trace_n)
        raise ValueError(f"unknown domain type {kind!r}; expected 'polygon' or 'mapped_disk'")

    def boundary_point(self, zeta) -> CurvePoint:
        if isinstance(zeta, CurvePoint):
            return self.boundary.normalize(zeta)
        return self.boundary.locate(as_point(zeta))


@dataclass
class ComponentRegion:
    """A 4-connected set of grid cells standing for an open planar region."""

    grid: Grid
    mask: np.ndarray
    boundary_touch: tuple[CurvePoint, ...] = ()
    touches_zeta0: bool = False
    extras: dict = field(default_factory=dict)

    @property
    def n_cells(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def area_estimate(self) -> float:
        return self.n_cells * self.grid.cell_area

    def cell_centers(self) -> np.ndarray:
        return self.grid.centers()[self.mask]

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        rows, cols = np.nonzero(self.mask)
        h = self.grid.h
        return (float(self.grid.x0 + cols.min() * h), float(self.grid.y0 + rows.min() * h),
                float(self.grid.x0 + (cols.max() + 1) * h), float(self.grid.y0 + (rows.max() + 1) * h))

    def reaches(self, z: complex) -> bool:
        return 1 in touching_labels(self.mask.astype(np.int32), self.grid, as_point(z))

    def summary(self) -> dict:
        return {"area_estimate": self.area_estimate, "bbox": list(self.bbox),
                "touches_zeta0": bool(self.touches_zeta0)}

    def write_csv(self, path) -> None:
        centers = self.cell_centers()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["cell_x", "cell_y"])
            for z in centers:
                w.writerow([repr(float(z.real)), repr(float(z.imag))])


def _disk_domain_labels(D: JordanDomain, z: complex, r: float, grid: Grid):
    mask = polygon_mask(D.boundary.vertices, grid) & disk_mask(z, r, grid)
    labels, count = label(mask)
    return mask, labels, count


def boundary_component(D: JordanDomain, zeta0, r: float, grid_n: int = 1024,
                       grid: Grid | None = None) -> ComponentRegion:
    """The component of ``D_r(zeta0) ∩ D`` having the boundary point zeta0 in its closure.

    The intersection is rasterised on ``grid_n x grid_n`` cells over the
    disk's bounding box (or on ``grid`` when given, so that several radii
    can share one grid). The flood fill is seeded two cells inside D along
    the inward normal at zeta0, backing off up to 8 cells.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if grid is None and grid_n < 128:
        raise ValueError("grid_n must be at least 128")
    cp = D.boundary_point(zeta0)
    z = D.boundary.point(cp)
    if grid is None:
        grid = Grid.around(z, r, grid_n)
    mask, labels, _ = _disk_domain_labels(D, z, r, grid)
    normal = D.boundary.inward_normal(cp)
    lab = 0
    for offset in range(2, 9):
        row, col = grid.cell_of(z + offset * grid.h * normal)
        if grid.in_bounds(row, col) and mask[row, col]:
            lab = int(labels[row, col])
            break
    if lab == 0:
        raise ValueError("cannot seed component: radius is below the grid resolution")
    touches = lab in touching_labels(labels, grid, z)
    if not touches:
        raise RuntimeError("seeded component does not reach zeta0; refine the grid")
    return ComponentRegion(grid, labels == lab, (cp,), True, {"zeta0": z, "radius": r})


def components_reaching(D: JordanDomain, zeta0, r: float, grid_n: int = 1024) -> tuple[int, int]:
    """(number of components of D_r(zeta0) ∩ D, number reaching zeta0 within one cell)."""
    cp = D.boundary_point(zeta0)
    z = D.boundary.point(cp)
    grid = Grid.around(z, r, grid_n)
    _, labels, count = _disk_domain_labels(D, z, r, grid)
    return count, len(touching_labels(labels, grid, z))


# ---------------------------------------------------------------------------
# crosscuts


def _check_crosscut(D: JordanDomain, alpha: np.ndarray, tol: float) -> None:
    if alpha.size < 2:
        raise ValueError("not a crosscut: need at least two points")
    ends = D.boundary.distance(alpha[[0, -1]])
    if np.any(ends > tol):
        raise ValueError("not a crosscut: end point is off the boundary")
    if alpha[0] == alpha[-1]:
        raise ValueError("not a crosscut: end points coincide")
    if not LineString(np.column_stack([alpha.real, alpha.imag])).is_simple:
        raise ValueError("not a crosscut: arc is not simple")
    # interior of the arc must lie in D
    s = np.linspace(0, 1, 34)[1:-1]
    probes = (alpha[:-1, None] + s[None, :] * (alpha[1:] - alpha[:-1])[:, None]).ravel()
    probes = np.concatenate([probes, alpha[1:-1]])
    inside = winding_number(probes, D.boundary.vertices) != 0
    off = D.boundary.distance(probes) <= tol
    if np.any(~inside | off):
        raise ValueError("not a crosscut: arc leaves the domain")


def crosscut_sides(D: JordanDomain, alpha, grid_n: int = 512,
                   tol: float = 1e-9) -> tuple[ComponentRegion, ComponentRegion]:
    """The two sides of a crosscut, as cell regions.

    The first region returned is the side bounded by ``alpha`` and the
    boundary subarc running counterclockwise from ``alpha[0]`` to
    ``alpha[-1]``; the second is the other side. Cells within half a cell of
    ``alpha`` are removed so no 4-connected path crosses it.
    """
    alpha = as_points(alpha)
    _check_crosscut(D, alpha, tol)
    grid = Grid.covering(*D.boundary.bbox, n=grid_n)
    centers = grid.centers()
    mask = polygon_mask(D.boundary.vertices, grid)
    cut = polyline_distance(centers.ravel(), alpha, closed=False).reshape(grid.shape) <= 0.5 * grid.h * (1 + 1e-9)
    mask &= ~cut
    labels, count = label(mask)
    if count < 2:
        raise RuntimeError("crosscut does not split the rasterised domain; refine the grid")
    sizes = np.bincount(labels.ravel())[1:]
    two = np.argsort(sizes)[::-1][:2] + 1
    regions = [labels == k for k in two]

    p = D.boundary.locate(alpha[0])
    q = D.boundary.locate(alpha[-1])
    arc1 = split_at(D.boundary, p, q).arc1
    side1_poly = np.concatenate([arc1, alpha[::-1][1:-1]])
    side1_mask = polygon_mask(side1_poly, grid)
    overlap = [np.count_nonzero(m & side1_mask) / np.count_nonzero(m) for m in regions]
    first = int(np.argmax(overlap))
    ordered = (regions[first], regions[1 - first])
    landmarks = (p, q)
    return tuple(
        ComponentRegion(grid, m, landmarks, False, {"components": count, "gamma": i + 1})
        for i, m in enumerate(ordered)
    )


# ---------------------------------------------------------------------------
# circle cuts


@dataclass(frozen=True)
class CircleCutArc:
    """One component of ``C ∩ D``: the open arc from ``theta_start`` to ``theta_end``."""

    theta_start: float
    theta_end: float
    start: CurvePoint
    end: CurvePoint
    start_label: int
    end_label: int

    @property
    def labels(self) -> frozenset[int]:
        return frozenset({self.start_label, self.end_label})


def _subarc_label(curve: PolygonalJordanCurve, x: CurvePoint, sp: float, sq: float) -> int:
    P = curve.perimeter
    return 1 if (curve.arclength(x) - sp) % P < (sq - sp) % P else 2


def circle_cut_components(D: JordanDomain, C: Circle, p_mark, q_mark) -> list[CircleCutArc]:
    """Components of ``C ∩ D`` with their end points labelled by boundary subarc.

    Label 1 is the subarc running counterclockwise from ``p_mark`` to
    ``q_mark``, label 2 the complementary one.
    """
    curve = D.boundary
    p = D.boundary_point(p_mark)
    q = D.boundary_point(q_mark)
    zp, zq = curve.point(p), curve.point(q)
    dp, dq = abs(zp - C.center) - C.radius, abs(zq - C.center) - C.radius
    if not (dp * dq < 0):
        raise ValueError("circle does not separate the two boundary points")
    contacts = circle_polygon_intersection(C, curve)
    if not contacts:
        raise RuntimeError("separating circle has no contact with the boundary")
    thetas = np.array([np.angle(c.z - C.center) % (2 * np.pi) for c in contacts])
    order = np.argsort(thetas, kind="stable")
    thetas = thetas[order]
    contacts = [contacts[i] for i in order]
    sp, sq = curve.arclength(p), curve.arclength(q)

    out: list[CircleCutArc] = []
    m = len(contacts)
    for i in range(m):
        j = (i + 1) % m
        t0 = thetas[i]
        t1 = thetas[j] if j > i else thetas[j] + 2 * np.pi
        if m > 1 and t1 - t0 <= 1e-15:
            continue
        mid = C.center + C.radius * np.exp(1j * 0.5 * (t0 + t1))
        if winding_number(mid, curve.vertices)[0] == 0:
            continue
        a, b = contacts[i].where, contacts[j].where
        out.append(CircleCutArc(float(t0), float(t1), a, b,
                                _subarc_label(curve, a, sp, sq), _subarc_label(curve, b, sp, sq)))
    return out


def random_convex_polygon(rng: np.random.Generator, n_points: int = 24) -> PolygonalJordanCurve:
    """Convex hull of random points in the unit square (test instance generator)."""
    from scipy.spatial import ConvexHull

    pts = rng.random((n_points, 2))
    hull = ConvexHull(pts)
    return PolygonalJordanCurve(pts[hull.vertices])


def separated_circle_instance(rng: np.random.Generator, curve: PolygonalJordanCurve
                              ) -> tuple[Circle, CurvePoint, CurvePoint]:
    """A circle with one random boundary point strictly inside and another strictly outside."""
    P = curve.perimeter
    while True:
        s = rng.random(2) * P
        idx, t = curve.at_arclength(s)
        p = curve.normalize(CurvePoint(int(idx[0]), float(t[0])))
        q = curve.normalize(CurvePoint(int(idx[1]), float(t[1])))
        zp, zq = curve.point(p), curve.point(q)
        if abs(zp - zq) < 1e-3:
            continue
        center = zp + (rng.random() - 0.5) * 0.2 * abs(zq - zp) * np.exp(2j * np.pi * rng.random())
        lo, hi = abs(zp - center), abs(zq - center)
        if hi - lo < 1e-6:
            continue
        radius = lo + (0.1 + 0.8 * rng.random()) * (hi - lo)
        return Circle(center, radius), p, q


def as_sequence(x) -> Sequence:
    return x if isinstance(x, (list, tuple)) else [x]
