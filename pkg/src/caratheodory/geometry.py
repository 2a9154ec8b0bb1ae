"""Planar primitives shared by the rest of the package.

Points of the plane are represented as Python/numpy complex numbers
throughout; ``as_point`` and ``as_points`` accept complex scalars, ``(x, y)``
pairs and ``(n, 2)`` arrays and normalise them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial import QhullError

DEFAULT_TOL = 1e-9

# above this size set_diameter goes through the convex hull
_HULL_THRESHOLD = 64


def as_point(z) -> complex:
    """Coerce ``z`` (complex, ``(x, y)`` pair, length-2 array) to a complex."""
    if isinstance(z, (complex, float, int, np.number)):
        w = complex(z)
    else:
        arr = np.asarray(z, dtype=float).ravel()
        if arr.shape != (2,):
            raise ValueError(f"expected a plane point, got {z!r}")
        w = complex(arr[0], arr[1])
    if not (np.isfinite(w.real) and np.isfinite(w.imag)):
        raise ValueError("point coordinates must be finite")
    return w


def as_points(X, allow_empty: bool = False) -> np.ndarray:
    """Coerce a point collection to a 1-D complex array.

    Accepts complex arrays/sequences or real arrays of shape ``(n, 2)``. A
    real 1-D array is a set of points on the real axis, even at length 2.
    """
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        pts = arr.astype(complex).ravel()
    else:
        arr = np.asarray(arr, dtype=float)
        if arr.size == 0:
            pts = np.zeros(0, dtype=complex)
        elif arr.ndim == 2 and arr.shape[1] == 2:
            pts = arr[:, 0] + 1j * arr[:, 1]
        elif arr.ndim == 1:
            # a real 1-D array is a set of points on the real axis
            pts = arr.astype(complex)
        else:
            raise ValueError(f"cannot interpret array of shape {arr.shape} as points")
    if pts.size == 0 and not allow_empty:
        raise ValueError("empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    return pts


def to_xy(pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=complex)
    return np.column_stack([pts.real, pts.imag])


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (np.isfinite(r) and r > 0):
            raise ValueError("circle radius must be positive and finite")
        object.__setattr__(self, "radius", r)

    def contains(self, z, strict: bool = True):
        d = np.abs(np.asarray(z) - self.center)
        return d < self.radius if strict else d <= self.radius

    def boundary_distance(self, z) -> float:
        return abs(abs(as_point(z) - self.center) - self.radius)


@dataclass(frozen=True)
class Annulus:
    """Round annulus ``{inner < |z - center| < outer}``."""

    center: complex
    inner: float
    outer: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r, R = float(self.inner), float(self.outer)
        if not (0 < r < R < np.inf):
            raise ValueError(f"annulus needs 0 < inner < outer < inf, got {r}, {R}")
        object.__setattr__(self, "inner", r)
        object.__setattr__(self, "outer", R)

    def contains(self, z):
        d = np.abs(np.asarray(z) - self.center)
        return (d > self.inner) & (d < self.outer)

    def scaled(self, c: float) -> "Annulus":
        return Annulus(self.center * c, self.inner * c, self.outer * c)


class Location(str, enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary"


@dataclass(frozen=True, order=True)
class CurvePoint:
    """A point on a polygonal curve: edge index plus affine parameter."""

    edge_index: int
    t: float

    def __post_init__(self):
        if self.edge_index < 0:
            raise ValueError("edge_index must be non-negative")
        if not (0.0 <= self.t <= 1.0):
            raise ValueError(f"edge parameter must lie in [0, 1], got {self.t}")


class Crossing(NamedTuple):
    where: CurvePoint
    z: complex
    tangent: bool


# ---------------------------------------------------------------------------
# diameters and distances


def _brute_diameter(pts: np.ndarray) -> float:
    best = 0.0
    # chunked so memory stays O(n * chunk)
    chunk = 2048
    for i in range(0, pts.size, chunk):
        block = pts[i:i + chunk]
        best = max(best, float(np.abs(block[:, None] - pts[None, :]).max()))
    return best


def set_diameter(S) -> float:
    """Maximum pairwise Euclidean distance of a finite point set.

    Exact: large sets are reduced to their convex hull vertices first,
    which is where the farthest pair lives.
    """
    pts = as_points(S)
    if pts.size == 1:
        return 0.0
    pts = np.unique(pts)
    if pts.size > _HULL_THRESHOLD:
        try:
            hull = ConvexHull(to_xy(pts))
            pts = pts[hull.vertices]
        except QhullError:
            # collinear (or otherwise flat) input: extremes along the line
            centred = pts - pts.mean()
            direction = centred[np.argmax(np.abs(centred))]
            proj = (centred * np.conj(direction)).real
            return float(abs(pts[np.argmax(proj)] - pts[np.argmin(proj)]))
    return _brute_diameter(pts)


def d_inf(X, Y) -> float:
    """Infimum of |x - y| over x in X, y in Y (exact for finite sets)."""
    xs = as_points(X)
    ys = as_points(Y)
    if xs.size * ys.size <= 1 << 16:
        return float(np.abs(xs[:, None] - ys[None, :]).min())
    tree = cKDTree(to_xy(ys))
    dist, _ = tree.query(to_xy(xs), k=1)
    return float(dist.min())


def segment_distance(z, a, b) -> np.ndarray:
    """Distance from points ``z`` to segments ``[a, b]`` (broadcasting)."""
    z = np.asarray(z, dtype=complex)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = b - a
    dd = (d * d.conj()).real
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, ((z - a) * d.conj()).real / np.where(dd > 0, dd, 1), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(z - (a + t * d))


def polyline_distance(z, vertices, closed: bool) -> np.ndarray:
    """Distance from each point in ``z`` to a polyline."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    v = np.asarray(vertices, dtype=complex)
    a = v if closed else v[:-1]
    b = np.roll(v, -1) if closed else v[1:]
    out = np.full(z.shape, np.inf)
    chunk = max(1, (1 << 22) // max(a.size, 1))
    for i in range(0, z.size, chunk):
        zz = z[i:i + chunk]
        out[i:i + chunk] = segment_distance(zz[:, None], a[None, :], b[None, :]).min(axis=1)
    return out


# ---------------------------------------------------------------------------
# point location


def winding_number(z, vertices) -> np.ndarray:
    """Winding number of a closed polygon around each point of ``z``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    v = np.asarray(vertices, dtype=complex)
    a = v[None, :]
    b = np.roll(v, -1)[None, :]
    zz = z[:, None]
    cross = (b.real - a.real) * (zz.imag - a.imag) - (zz.real - a.real) * (b.imag - a.imag)
    up = (a.imag <= zz.imag) & (b.imag > zz.imag) & (cross > 0)
    down = (a.imag > zz.imag) & (b.imag <= zz.imag) & (cross < 0)
    return up.sum(axis=1) - down.sum(axis=1)


def point_in_polygon(z, curve, tol: float = DEFAULT_TOL) -> Location:
    """Classify ``z`` against a Jordan polygon.

    ``curve`` is anything with a ``vertices`` complex array (normally a
    :class:`~caratheodory.curves.PolygonalJordanCurve`, which is validated to
    be simple at construction). Points within ``tol`` of the polygon are
    reported as boundary.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    z = as_point(z)
    vertices = getattr(curve, "vertices", None)
    if vertices is None:
        raise TypeError("point_in_polygon needs a polygonal curve")
    if polyline_distance(z, vertices, closed=True)[0] <= tol:
        return Location.BOUNDARY
    return Location.INSIDE if winding_number(z, vertices)[0] != 0 else Location.OUTSIDE


# ---------------------------------------------------------------------------
# circle / segment intersection


def circle_segment_roots(center, radius, a, b):
    """Intersections of circles with segments, vectorised over pairs.

    Returns ``(t_minus, t_plus, disc)`` where ``t_*`` are the roots of
    ``|a + t (b - a) - center| = radius`` (NaN if no real root) and ``disc``
    is the normalised discriminant.
    """
    center = np.asarray(center, dtype=complex)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = b - a
    f = a - center
    A = (d * d.conj()).real
    B = 2 * (f * d.conj()).real
    C = (f * f.conj()).real - np.asarray(radius, dtype=float) ** 2
    disc = B * B - 4 * A * C
    with np.errstate(invalid="ignore"):
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
    # numerically stable quadratic roots
    q = -0.5 * (B + np.copysign(sq, B))
    with np.errstate(invalid="ignore", divide="ignore"):
        r1 = q / A
        r2 = np.where(q != 0, C / np.where(q != 0, q, 1), r1)
    t_minus = np.minimum(r1, r2)
    t_plus = np.maximum(r1, r2)
    scale = np.where(A > 0, A, 1.0) * np.maximum(np.abs(C) + (f * f.conj()).real, 1e-300)
    return t_minus, t_plus, disc / (4 * scale)


def _signed_power(vertices, idx, t, center, radius, ds):
    """|z - center| - radius at arclength offset ``ds`` from (idx, t)."""
    n = vertices.size
    i, tt = idx, t
    remaining = ds
    # walk along the polygon; ds is tiny so this touches at most a few edges
    for _ in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        length = abs(b - a)
        if remaining >= 0:
            room = (1.0 - tt) * length
            if remaining <= room:
                tt += remaining / length
                break
            remaining -= room
            i, tt = (i + 1) % n, 0.0
        else:
            room = tt * length
            if -remaining <= room:
                tt += remaining / length
                break
            remaining += room
            i, tt = (i - 1) % n, 1.0
    a, b = vertices[i], vertices[(i + 1) % n]
    return abs(a + tt * (b - a) - center) - radius


def circle_polygon_intersection(circle: Circle, curve, tol: float = DEFAULT_TOL) -> list[Crossing]:
    """Points where a circle meets a closed polygon, in traversal order.

    Each contact carries a ``tangent`` flag: True when the polygon touches
    the circle without passing from one side to the other. Tangent contacts
    do not count towards crossing parity.
    """
    v = np.asarray(curve.vertices, dtype=complex)
    n = v.size
    a = v
    b = np.roll(v, -1)
    t_lo, t_hi, disc = circle_segment_roots(circle.center, circle.radius, a, b)
    lengths = np.abs(b - a)
    probe = max(1e-7 * float(lengths.min()), 1e-12)

    hits: list[tuple[int, float, bool]] = []
    for i in np.flatnonzero(np.isfinite(t_lo)):
        double = abs(disc[i]) <= 1e-14
        roots = [t_lo[i]] if double else [t_lo[i], t_hi[i]]
        for t in roots:
            # snap to the edge end points
            if abs(t) <= 1e-12:
                t = 0.0
            if abs(t - 1.0) <= 1e-12:
                t = 1.0
            if not (0.0 <= t < 1.0):
                continue
            hits.append((int(i), float(t), double))

    out: list[Crossing] = []
    seen: set[tuple[int, float]] = set()
    for i, t, double in sorted(hits):
        key = (i, round(t, 12))
        if key in seen:
            continue
        seen.add(key)
        z = a[i] + t * (b[i] - a[i])
        before = _signed_power(v, i, t, circle.center, circle.radius, -probe)
        after = _signed_power(v, i, t, circle.center, circle.radius, probe)
        tangent = double or np.sign(before) == np.sign(after) or before == 0 or after == 0
        if abs(abs(z - circle.center) - circle.radius) > tol:
            # a root of the quadratic that drifted; project back onto the circle
            z = circle.center + circle.radius * (z - circle.center) / abs(z - circle.center)
        out.append(Crossing(CurvePoint(i, t), complex(z), bool(tangent)))
    return out


def crossing_count(crossings: Iterable[Crossing]) -> int:
    return sum(1 for c in crossings if not c.tangent)
