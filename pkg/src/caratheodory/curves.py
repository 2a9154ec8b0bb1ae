"""Polygonal Jordan curves, subarcs and arc diameters."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np
from shapely.geometry import LinearRing

from .geometry import (
    Circle,
    CurvePoint,
    Location,
    as_point,
    as_points,
    circle_polygon_intersection,
    point_in_polygon,
    polyline_distance,
    set_diameter,
)

if TYPE_CHECKING:
    from .maps import MapSpec

__all__ = [
    "CurvePoint",
    "PolygonalJordanCurve",
    "SubarcPair",
    "split_at",
    "subarc_diameter",
    "trace_map_boundary",
    "point_in_polygon",
    "circle_polygon_intersection",
    "Location",
    "Circle",
]


class PolygonalJordanCurve:
    """A simple closed polygon, stored counterclockwise.

    Parameters
    ----------
    vertices : array-like
        Complex numbers or ``(n, 2)`` coordinates, interpreted cyclically.
        A repeated closing vertex is dropped.

    Raises
    ------
    ValueError
        If fewer than three distinct vertices remain, consecutive vertices
        coincide, or the polygon is not simple ("not a Jordan curve").
    """

    def __init__(self, vertices):
        v = as_points(vertices)
        if v.size > 1 and v[0] == v[-1]:
            v = v[:-1]
        if v.size < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if np.any(v == np.roll(v, -1)):
            raise ValueError("consecutive vertices must be distinct")
        ring = LinearRing(np.column_stack([v.real, v.imag]))
        if not ring.is_simple:
            raise ValueError("not a Jordan curve: polygon is self-intersecting")
        area = 0.5 * np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag)
        if area == 0:
            raise ValueError("not a Jordan curve: polygon has zero area")
        if area < 0:
            v = v[::-1].copy()
        v.setflags(write=False)
        self._v = v

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    @property
    def n_edges(self) -> int:
        return self._v.size

    def __len__(self):
        return self._v.size

    def __repr__(self):
        return f"PolygonalJordanCurve(n={self.n_edges}, perimeter={self.perimeter:.6g})"

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        return np.abs(np.roll(self._v, -1) - self._v)

    @cached_property
    def cumulative(self) -> np.ndarray:
        """Arclength at each vertex, length ``n_edges + 1``."""
        return np.concatenate([[0.0], np.cumsum(self.edge_lengths)])

    @property
    def perimeter(self) -> float:
        return float(self.cumulative[-1])

    @cached_property
    def area(self) -> float:
        v = self._v
        return float(0.5 * np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag))

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        v = self._v
        return float(v.real.min()), float(v.imag.min()), float(v.real.max()), float(v.imag.max())

    def normalize(self, p: CurvePoint) -> CurvePoint:
        if p.edge_index >= self.n_edges:
            raise ValueError(f"edge index {p.edge_index} out of range for {self.n_edges} edges")
        if p.t == 1.0:
            return CurvePoint((p.edge_index + 1) % self.n_edges, 0.0)
        return p

    def point(self, p: CurvePoint) -> complex:
        p = self.normalize(p)
        a = self._v[p.edge_index]
        b = self._v[(p.edge_index + 1) % self.n_edges]
        return complex(a + p.t * (b - a))

    def arclength(self, p: CurvePoint) -> float:
        p = self.normalize(p)
        return float(self.cumulative[p.edge_index] + p.t * self.edge_lengths[p.edge_index])

    def at_arclength(self, s) -> tuple[np.ndarray, np.ndarray]:
        """Edge indices and parameters at arclengths ``s`` (taken mod perimeter)."""
        s = np.mod(np.asarray(s, dtype=float), self.perimeter)
        idx = np.searchsorted(self.cumulative, s, side="right") - 1
        idx = np.clip(idx, 0, self.n_edges - 1)
        t = (s - self.cumulative[idx]) / self.edge_lengths[idx]
        return idx, np.clip(t, 0.0, 1.0)

    def points_at_arclength(self, s) -> np.ndarray:
        idx, t = self.at_arclength(s)
        a = self._v[idx]
        b = self._v[(idx + 1) % self.n_edges]
        return a + t * (b - a)

    def locate(self, z) -> CurvePoint:
        """Nearest point of the curve to ``z``, as a :class:`CurvePoint`."""
        z = as_point(z)
        a = self._v
        b = np.roll(a, -1)
        d = b - a
        t = np.clip(((z - a) * d.conj()).real / (d * d.conj()).real, 0.0, 1.0)
        i = int(np.argmin(np.abs(z - (a + t * d))))
        return self.normalize(CurvePoint(i, float(t[i])))

    def distance(self, z) -> np.ndarray:
        return polyline_distance(z, self._v, closed=True)

    def tangent(self, p: CurvePoint) -> complex:
        """Unit direction of travel at ``p`` (bisected at vertices)."""
        p = self.normalize(p)
        n = self.n_edges
        i = p.edge_index
        out = self._v[(i + 1) % n] - self._v[i]
        out /= abs(out)
        if p.t > 0.0:
            return complex(out)
        inc = self._v[i] - self._v[i - 1]
        inc /= abs(inc)
        s = inc + out
        if abs(s) < 1e-12:
            return complex(out)
        return complex(s / abs(s))

    def inward_normal(self, p: CurvePoint) -> complex:
        """Unit normal pointing into the bounded face (curve is CCW)."""
        return 1j * self.tangent(p)

    def contains(self, z, tol: float = 1e-9) -> Location:
        return point_in_polygon(z, self, tol)

    def to_json(self) -> dict:
        return {"type": "polygon", "vertices": [[float(z.real), float(z.imag)] for z in self._v]}

    @classmethod
    def from_json(cls, obj) -> "PolygonalJordanCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("type") != "polygon":
            raise ValueError("expected a polygon document")
        return cls(np.asarray(obj["vertices"], dtype=float))


@dataclass(frozen=True)
class SubarcPair:
    """The two arcs of a Jordan curve joining two of its points.

    ``arc1`` runs counterclockwise from the first split point to the second,
    ``arc2`` continues from the second back to the first.
    """

    arc1: np.ndarray
    arc2: np.ndarray

    @staticmethod
    def length(arc) -> float:
        return float(np.abs(np.diff(arc)).sum())


def _forward_path(curve: PolygonalJordanCurve, p: CurvePoint, q: CurvePoint) -> np.ndarray:
    """Polyline from p to q following the curve orientation."""
    n = curve.n_edges
    zp, zq = curve.point(p), curve.point(q)
    if p.edge_index == q.edge_index and p.t < q.t:
        return np.array([zp, zq])
    # vertices strictly after p up to the start of q's edge
    first = (p.edge_index + 1) % n
    count = (q.edge_index - first) % n + 1
    idx = (first + np.arange(count)) % n
    mids = curve.vertices[idx]
    pts = [zp, *mids]
    if q.t > 0.0 or pts[-1] != zq:
        pts.append(zq)
    out = np.asarray(pts, dtype=complex)
    # drop duplicates created when p or q sit on a vertex
    keep = np.concatenate([[True], out[1:] != out[:-1]])
    return out[keep]


def split_at(curve: PolygonalJordanCurve, p: CurvePoint, q: CurvePoint) -> SubarcPair:
    """Split a Jordan polygon at two distinct points into its two subarcs."""
    p = curve.normalize(p)
    q = curve.normalize(q)
    if curve.point(p) == curve.point(q):
        raise ValueError("degenerate split: p and q coincide")
    return SubarcPair(_forward_path(curve, p, q), _forward_path(curve, q, p))


def subarc_diameter(arc) -> float:
    """Diameter of a polyline, exact: the maximum is attained at vertices."""
    pts = as_points(arc, allow_empty=True)
    if pts.size == 0:
        raise ValueError("empty arc")
    return set_diameter(pts)


def trace_map_boundary(map_spec: "MapSpec", n: int) -> PolygonalJordanCurve:
    """Polygon through ``psi(exp(2 pi i j / n))``, j = 0..n-1."""
    if n < 16:
        raise ValueError("trace needs n >= 16")
    w = np.exp(2j * np.pi * np.arange(n) / n)
    # hit -1 exactly when n is even
    if n % 2 == 0:
        w[n // 2] = -1.0
    z = map_spec.inverse(w)
    try:
        return PolygonalJordanCurve(z)
    except ValueError as exc:
        raise ValueError("self-intersecting trace; increase n") from exc

