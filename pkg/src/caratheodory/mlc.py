"""Moduli of local connectivity for polygonal Jordan curves.

A table ``g`` is a modulus of local connectivity (MLC) for a curve when any
two curve points at distance at most ``2**-g(k)`` are joined by a subarc of
diameter smaller than ``2**-k``. The checker here is sampled: it can refute a
table, never certify one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import chain
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .curves import PolygonalJordanCurve, split_at, subarc_diameter
from .geometry import Circle, CurvePoint, as_point, circle_segment_roots, set_diameter, winding_number
from .raster import Grid, disk_mask, label, polygon_mask, touching_labels

STRICT_SLACK = 1e-12
MAX_G = 64
# sampling density is capped at this many points per 2**-g of perimeter
POINTS_PER_RADIUS = 128


@dataclass(frozen=True)
class MLCTable:
    """``g(0..kmax)``; ``extension_pad`` declares ``g(k) = k + pad`` beyond kmax."""

    g: tuple[int, ...]
    extension_pad: int | None = None

    def __post_init__(self):
        g = tuple(int(x) for x in self.g)
        if not g:
            raise ValueError("MLC table needs at least one entry")
        if any(x < 0 for x in g):
            raise ValueError("MLC table entries must be non-negative")
        object.__setattr__(self, "g", g)
        if self.extension_pad is not None:
            object.__setattr__(self, "extension_pad", int(self.extension_pad))

    @classmethod
    def linear(cls, pad: int, kmax: int, extend: bool = True) -> "MLCTable":
        return cls(tuple(k + pad for k in range(kmax + 1)), pad if extend else None)

    @property
    def kmax(self) -> int:
        return len(self.g) - 1

    def value(self, k: int) -> int:
        if k < 0:
            raise ValueError("k must be non-negative")
        if k <= self.kmax:
            return self.g[k]
        if self.extension_pad is None:
            raise ValueError(f"MLC table does not cover k = {k} (kmax = {self.kmax}, no extension rule)")
        return k + self.extension_pad

    def monotonized(self) -> "MLCTable":
        return MLCTable(tuple(np.maximum.accumulate(self.g)), self.extension_pad)

    def is_increasing(self) -> bool:
        return all(b >= a for a, b in zip(self.g, self.g[1:]))

    def to_json(self) -> dict:
        out = {"kmax": self.kmax, "g": list(self.g)}
        if self.extension_pad is not None:
            out["extension_pad"] = self.extension_pad
        return out

    @classmethod
    def from_json(cls, obj) -> "MLCTable":
        if isinstance(obj, str):
            obj = json.loads(obj)
        g = obj["g"]
        if "kmax" in obj and int(obj["kmax"]) != len(g) - 1:
            raise ValueError(f"kmax = {obj['kmax']} disagrees with {len(g)} table entries")
        if any(not isinstance(x, int) or isinstance(x, bool) for x in g):
            raise ValueError("MLC table entries must be integers")
        return cls(tuple(g), obj.get("extension_pad"))


@dataclass(frozen=True)
class MLCWitness:
    """A pair of curve points refuting a table at level k."""

    p: CurvePoint
    q: CurvePoint
    k: int
    pair_distance: float
    best_arc_diameter: float

    def to_json(self) -> dict:
        return {"p": [self.p.edge_index, self.p.t], "q": [self.q.edge_index, self.q.t], "k": self.k,
                "pair_distance": self.pair_distance, "best_arc_diameter": self.best_arc_diameter}


# ---------------------------------------------------------------------------


def _partners(curve: PolygonalJordanCurve, S: np.ndarray, radius: float, chunk: int = 8192):
    """Points of the curve at distance exactly ``radius`` from each sample.

    Returns (sample index, edge index, t) arrays.
    """
    a = curve.vertices
    b = np.roll(a, -1)
    L = curve.edge_lengths
    mids = 0.5 * (a + b)
    reach = radius + 0.5 * L.max() * (1 + 1e-12)
    mid_tree = cKDTree(np.column_stack([mids.real, mids.imag]))
    out_s, out_e, out_t = [], [], []
    for start in range(0, S.size, chunk):
        block = S[start:start + chunk]
        tree = cKDTree(np.column_stack([block.real, block.imag]))
        hits = tree.sparse_distance_matrix(mid_tree, reach, output_type="ndarray")
        si = hits["i"].astype(np.int64) + start
        ei = hits["j"].astype(np.int64)
        if ei.size == 0:
            continue
        # a segment meets the circle iff its end points straddle it, or both
        # lie outside and the segment is long enough to dip inside
        da = np.abs(a[ei] - S[si]) - radius
        db = np.abs(b[ei] - S[si]) - radius
        keep = (da * db <= 0) | ((da > 0) & (db > 0) & (L[ei] >= da + db))
        si, ei = si[keep], ei[keep]
        if ei.size == 0:
            continue
        tm, tp, disc = circle_segment_roots(S[si], radius, a[ei], b[ei])
        for t in (tm, tp):
            t = np.where(np.abs(t) <= 1e-12, 0.0, t)
            t = np.where(np.abs(t - 1) <= 1e-12, 1.0, t)
            ok = np.isfinite(t) & (t >= 0) & (t < 1) & (disc >= 0)
            out_s.append(si[ok])
            out_e.append(ei[ok])
            out_t.append(t[ok])
    if not out_s:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)
    s, e, t = np.concatenate(out_s), np.concatenate(out_e), np.concatenate(out_t)
    if s.size == 0:
        return s, e, t
    # a root reported by both tm and tp (tangency) is kept once
    key = np.unique(np.column_stack([s, e, np.round(t * 2**40)]), axis=0, return_index=True)[1]
    key.sort()
    return s[key], e[key], t[key]


def _first_exceed(Z: np.ndarray, s: np.ndarray, is_vertex: np.ndarray, thr: float,
                  max_block: int = 64) -> np.ndarray:
    """For each m, the first index m' > m with ``|Z[m'] - Z[m]| > thr`` (len(Z) if none).

    ``Z`` runs along a polygon whose vertices are flagged by ``is_vertex``.
    Points within arclength ``thr`` of m cannot exceed, so the search starts
    past that window. Distance to Z[m] is convex along each edge, so the
    first exceeding vertex pins down the edge and a bisection inside that
    edge finds the first exceeding point.
    """
    n = Z.size
    c = np.full(n, n, dtype=np.int64)
    VI = np.flatnonzero(is_vertex)
    nv = VI.size
    st = np.maximum(np.searchsorted(s, s + thr, side="right"), np.arange(n) + 1)
    j = np.searchsorted(VI, st)
    todo = np.flatnonzero((st < n) & (j < nv))
    cur = j[todo]
    hit_m, hit_j = [], []
    block = 2
    while todo.size:
        offs = cur[:, None] + np.arange(block)[None, :]
        valid = offs < nv
        far = np.abs(Z[VI[np.minimum(offs, nv - 1)]] - Z[todo][:, None]) > thr
        far &= valid
        hit = far.any(axis=1)
        hit_m.append(todo[hit])
        hit_j.append(cur[hit] + np.argmax(far[hit], axis=1))
        cur = cur + block
        keep = ~hit & (cur < nv)
        todo, cur = todo[keep], cur[keep]
        block = min(2 * block, max_block)
    if not hit_m:
        return c
    m = np.concatenate(hit_m)
    jj = np.concatenate(hit_j)
    hi = VI[jj]
    lo = np.where(jj > 0, VI[np.maximum(jj - 1, 0)], -1)
    lo = np.maximum(lo, st[m] - 1)
    # invariant: Z[lo] within thr (or lo = m), Z[hi] beyond it
    while True:
        gap = hi - lo > 1
        if not gap.any():
            break
        mid = (lo + hi) // 2
        ex = np.abs(Z[mid] - Z[m]) > thr
        hi = np.where(gap & ex, mid, hi)
        lo = np.where(gap & ~ex, mid, lo)
    c[m] = hi
    return c


def _sample_counts(curve: PolygonalJordanCurve, g: int, resolution: int) -> int:
    density = min(float(resolution), POINTS_PER_RADIUS * 2.0 ** g)
    return max(int(math.ceil(curve.perimeter * density)), 16)


def _failing_pairs(curve: PolygonalJordanCurve, k: int, g: int, resolution: int):
    """Sampled pairs at distance <= 2**-g whose both arcs have diameter >= 2**-k.

    Returns ``(p_edge, p_t, q_edge, q_t, distance)`` arrays, one row per failure.
    """
    thr = 2.0 ** -k - STRICT_SLACK
    rad = 2.0 ** -g
    P = curve.perimeter
    n = _sample_counts(curve, g, resolution)
    s_samp = np.arange(n) * (P / n)
    e_samp, t_samp = curve.at_arclength(s_samp)
    S = curve.points_at_arclength(s_samp)

    ps, pe, pt = _partners(curve, S, rad)
    v = curve.vertices
    nv = v.size
    zp = v[pe] + pt * (np.roll(v, -1)[pe] - v[pe])

    # fine sequence of all points, in arclength order
    Z = np.concatenate([v, S, zp])
    E = np.concatenate([np.arange(nv), e_samp, pe])
    T = np.concatenate([np.zeros(nv), t_samp, pt])
    s_all = curve.cumulative[E] + T * curve.edge_lengths[E]
    order = np.lexsort((T, E))
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    Zs, ss = Z[order], s_all[order]
    N = Zs.size

    # reach: largest forward index whose arc from m stays within thr
    Z2 = np.concatenate([Zs, Zs])
    s2 = np.concatenate([ss, ss + P])
    isv = np.zeros(N, dtype=bool)
    isv[rank[:nv]] = True
    c = _first_exceed(Z2, s2, np.concatenate([isv, isv]), thr)
    reach = np.minimum.accumulate(c[::-1])[::-1] - 1

    tree = cKDTree(np.column_stack([S.real, S.imag]))
    pairs = tree.query_pairs(rad, output_type="ndarray")
    ia = np.concatenate([pairs[:, 0] + nv, ps + nv])
    ib = np.concatenate([pairs[:, 1] + nv, np.arange(ps.size) + nv + n])
    fa, fb = rank[ia], rank[ib]
    lo, hi = np.minimum(fa, fb), np.maximum(fa, fb)
    d = np.abs(Zs[lo] - Zs[hi])
    ok = (reach[lo] >= hi) | (reach[hi] >= lo + N) | (d == 0)
    bad = ~ok
    lo, hi, d = lo[bad], hi[bad], d[bad]
    Ef, Tf = E[order], T[order]
    return Ef[lo], Tf[lo], Ef[hi], Tf[hi], d


def check_mlc(curve: PolygonalJordanCurve, table: MLCTable, k: int, resolution: int = 4096):
    """Test the MLC property of ``table`` at level ``k`` on sampled pairs.

    Samples are spread uniformly in arclength at ``resolution`` points per
    unit of perimeter (fewer when ``2**-g(k)`` is coarse, see
    ``POINTS_PER_RADIUS``). Besides sample-sample pairs, each sample is
    paired with the curve points at distance exactly ``2**-g(k)`` from it.
    Arc diameters are exact over the sampled points and polygon vertices.

    Returns ``None`` on pass, otherwise the :class:`MLCWitness` whose ``p``
    is lexicographically smallest (closest ``q`` among ties).
    """
    if not (0 <= k <= table.kmax):
        raise ValueError(f"k = {k} out of table range 0..{table.kmax}")
    if resolution < 64:
        raise ValueError("resolution must be at least 64 samples per unit perimeter")
    g = table.value(k)
    pe, pt, qe, qt, d = _failing_pairs(curve, k, g, resolution)
    if d.size == 0:
        return None
    # orient each pair so that p precedes q, then pick the smallest p
    swap = (qe < pe) | ((qe == pe) & (qt < pt))
    pe, qe = np.where(swap, qe, pe), np.where(swap, pe, qe)
    pt, qt = np.where(swap, qt, pt), np.where(swap, pt, qt)
    i = np.lexsort((d, pt, pe))[0]
    p = curve.normalize(CurvePoint(int(pe[i]), float(pt[i])))
    q = curve.normalize(CurvePoint(int(qe[i]), float(qt[i])))
    arcs = split_at(curve, p, q)
    best = min(subarc_diameter(arcs.arc1), subarc_diameter(arcs.arc2))
    return MLCWitness(p, q, k, float(abs(curve.point(p) - curve.point(q))), float(best))


def smallest_passing_g(curve: PolygonalJordanCurve, k: int, resolution: int = 4096) -> int:
    # every point has curve points at each distance up to half the diameter,
    # so once 2**-g <= diam / 2 and g < k the partner pairs at distance
    # 2**-g > 2**-k fail outright; those g are skipped
    half_diam = 0.5 * set_diameter(curve.vertices)
    g1 = 0
    while 2.0 ** -g1 > half_diam:
        g1 += 1
    for g in chain(range(min(g1, k)), range(k, MAX_G + 1)):
        if _failing_pairs(curve, k, g, resolution)[4].size == 0:
            return g
    raise RuntimeError(f"curve appears not locally connected at resolution {resolution} (k = {k})")


def estimate_mlc(curve: PolygonalJordanCurve, kmax: int = 8, resolution: int = 4096,
                 pad: int = 1) -> MLCTable:
    """Smallest passing g(k) for k = 0..kmax, plus ``pad``, made non-decreasing.

    The result extends beyond kmax by ``g(k) = k + (g(kmax) - kmax)``.
    """
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    raw = [smallest_passing_g(curve, k, resolution) + pad for k in range(kmax + 1)]
    g = np.maximum.accumulate(raw)
    return MLCTable(tuple(int(x) for x in g), int(g[-1]) - kmax)


def raw_mlc(curve: PolygonalJordanCurve, kmax: int, resolution: int = 4096) -> list[int]:
    """Pre-pad, pre-monotonization estimates."""
    return [smallest_passing_g(curve, k, resolution) for k in range(kmax + 1)]


# ---------------------------------------------------------------------------


def _hypothesis_error(clause: str) -> ValueError:
    return ValueError(f"theorem hypotheses not met: {clause}")


def verify_membership_theorem(curve: PolygonalJordanCurve, table: MLCTable, disk: Circle, z0, zeta0,
                              k: int, grid_n: int = 512) -> bool:
    """Check on a grid that zeta0 is a boundary point of the component of z0 in ``disk - curve``.

    Hypotheses (each enforced, with its own message): zeta0 on the curve
    and inside the disk, z0 inside the disk and off the curve,
    ``|z0 - zeta0| < 2**-g(k)``, and ``2**-k + 2**-g(k)`` at most the larger
    distance of zeta0 or z0 to the disk's circle.
    """
    z0 = as_point(z0)
    if isinstance(zeta0, CurvePoint):
        zeta = curve.point(zeta0)
    else:
        zeta = as_point(zeta0)
        if curve.distance(zeta)[0] > 1e-9:
            raise _hypothesis_error("zeta0 is not on the curve")
    g = table.value(k)
    if not disk.contains(zeta):
        raise _hypothesis_error("zeta0 is not inside the disk")
    if not disk.contains(z0):
        raise _hypothesis_error("z0 is not inside the disk")
    if curve.distance(z0)[0] <= 1e-12:
        raise _hypothesis_error("z0 lies on the curve")
    if not abs(z0 - zeta) < 2.0 ** -g:
        raise _hypothesis_error(f"|z0 - zeta0| = {abs(z0 - zeta):.6g} is not below 2**-g(k) = 2**-{g}")
    room = max(disk.boundary_distance(zeta), disk.boundary_distance(z0))
    if 2.0 ** -k + 2.0 ** -g > room:
        raise _hypothesis_error(f"2**-k + 2**-g(k) exceeds the distance {room:.6g} to the disk boundary")

    grid = Grid.around(disk.center, disk.radius, grid_n)
    inside = polygon_mask(curve.vertices, grid)
    in_disk = disk_mask(disk.center, disk.radius, grid)
    side = inside if winding_number(z0, curve.vertices)[0] != 0 else ~inside
    labels, _ = label(side & in_disk)
    row, col = grid.cell_of(z0)
    lab = int(labels[row, col]) if grid.in_bounds(row, col) else 0
    if lab == 0:
        raise RuntimeError("z0 is within half a cell of the curve; increase grid_n")
    return lab in touching_labels(labels, grid, zeta)


def corridor_polygon(neck: float = 2.0 ** -5, neck_length: float = 0.5) -> PolygonalJordanCurve:
    """Two unit squares joined by a thin horizontal neck.

    Vertices start at the lower-left corner of the neck so the first sample
    sits where the neck meets the left square.
    """
    lo, hi = 0.5 - neck / 2, 0.5 + neck / 2
    x1 = 1 + neck_length
    x2 = x1 + 1
    pts: Sequence[complex] = [
        complex(1, lo), complex(x1, lo), complex(x1, 0), complex(x2, 0), complex(x2, 1), complex(x1, 1),
        complex(x1, hi), complex(1, hi), complex(1, 1), complex(0, 1), complex(0, 0), complex(1, 0),
    ]
    return PolygonalJordanCurve(pts)
