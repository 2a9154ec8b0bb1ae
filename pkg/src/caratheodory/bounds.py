"""Quantitative continuity bounds for conformal maps of Jordan domains.

The thresholds involved are routinely far below the smallest positive double
(``exp(-8 pi^2 / eps^2)`` is about ``2**-11400`` for ``eps = 0.1``), so every
quantity is carried as a base-2 logarithm in :class:`Log2Real`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from .geometry import Annulus, as_point
from .maps import MapSpec, golden_section_rows, min_inverse_distances
from .mlc import MLCTable

LN2 = math.log(2.0)
EIGHT_PI_SQ = 8 * math.pi ** 2
# plain floats are only handed out above this exponent
FLOAT_LOG2_FLOOR = -1000.0


@total_ordering
@dataclass(frozen=True)
class Log2Real:
    """A non-negative real stored as its base-2 logarithm (``-inf`` is zero)."""

    log2_value: float

    def __post_init__(self):
        v = float(self.log2_value)
        if math.isnan(v) or v == math.inf:
            raise ValueError(f"invalid log2 value {v}")
        object.__setattr__(self, "log2_value", v)

    @classmethod
    def from_float(cls, x: float) -> "Log2Real":
        if x < 0:
            raise ValueError("Log2Real holds non-negative values only")
        return cls(-math.inf if x == 0 else math.log2(x))

    @classmethod
    def pow2(cls, e: float) -> "Log2Real":
        return cls(float(e))

    @classmethod
    def zero(cls) -> "Log2Real":
        return cls(-math.inf)

    @property
    def is_zero(self) -> bool:
        return self.log2_value == -math.inf

    def to_float(self) -> float:
        if self.is_zero:
            return 0.0
        if self.log2_value <= FLOAT_LOG2_FLOOR:
            raise OverflowError(f"2**{self.log2_value:.6g} is not offered as a plain float")
        return 2.0 ** self.log2_value

    def __add__(self, other: "Log2Real") -> "Log2Real":
        if not isinstance(other, Log2Real):
            return NotImplemented
        hi, lo = max(self.log2_value, other.log2_value), min(self.log2_value, other.log2_value)
        if lo == -math.inf:
            return Log2Real(hi)
        return Log2Real(hi + math.log1p(2.0 ** (lo - hi)) / LN2)

    def __mul__(self, other) -> "Log2Real":
        if isinstance(other, Log2Real):
            return Log2Real(self.log2_value + other.log2_value)
        return self * Log2Real.from_float(float(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Log2Real):
            return NotImplemented
        return self.log2_value == other.log2_value

    def __lt__(self, other):
        if not isinstance(other, Log2Real):
            return NotImplemented
        return self.log2_value < other.log2_value

    def __hash__(self):
        return hash(self.log2_value)

    def __repr__(self):
        return f"Log2Real(2**{self.log2_value:.10g})"


# ---------------------------------------------------------------------------


def diameter_bound(lam: float, r: float) -> float:
    """Upper bound on the image diameter of a component cut off by an annulus.

    With ``l = 1 - sqrt(r**2 - pi * lam)`` the bound is
    ``sqrt(l**2 + 4 * pi * lam)``.

    Raises
    ------
    ValueError
        If ``r < sqrt(pi * lam)`` ("annulus too thin for radius"), ``lam <= 0``
        or ``r > 1``.
    """
    if not lam > 0:
        raise ValueError("extremal length must be positive")
    if r > 1:
        raise ValueError("radius must not exceed 1")
    gap = r * r - math.pi * lam
    if gap < 0:
        raise ValueError(
            f"annulus too thin for radius: r = {r:.6g} < sqrt(pi * lambda) = {math.sqrt(math.pi * lam):.6g}"
        )
    l = 1 - math.sqrt(gap)
    return math.sqrt(l * l + 4 * math.pi * lam)


def window_radius(l, eps):
    """``sqrt((1 - l)**2 + (eps**2 - l**2) / 4)``, the w-disk radius in the threshold."""
    l = np.asarray(l, dtype=float)
    return np.sqrt((1 - l) ** 2 + (eps * eps - l * l) / 4)


@dataclass(frozen=True)
class BoundQuery:
    map: MapSpec
    zeta0: complex
    eps: float

    def __post_init__(self):
        eps = float(self.eps)
        if not (0 < eps < 1):
            raise ValueError(f"unsupported epsilon {eps}: need 0 < eps < 1")
        object.__setattr__(self, "eps", eps)
        zeta0 = as_point(self.zeta0)
        self.map.boundary_preimage(zeta0)
        object.__setattr__(self, "zeta0", zeta0)


def log2_threshold_terms(q: BoundQuery, ls, res: int = 512) -> np.ndarray:
    """log2 of ``exp(8 pi^2 / (l^2 - eps^2)) * min{|zeta0 - psi(w)| : |w| <= rho(l)}``.

    Where ``rho(l) >= 1`` the closed disk reaches the preimage of zeta0, the
    minimum is 0 and the term is ``-inf``.
    """
    ls = np.atleast_1d(np.asarray(ls, dtype=float))
    out = np.full(ls.shape, -np.inf)
    rhos = window_radius(ls, q.eps)
    ok = rhos < 1
    if ok.any():
        mins = min_inverse_distances(q.map, q.zeta0, rhos[ok], res)
        with np.errstate(divide="ignore"):
            out[ok] = EIGHT_PI_SQ / ((ls[ok] ** 2 - q.eps ** 2) * LN2) + np.log2(mins)
    return out


@dataclass(frozen=True)
class ThresholdResult:
    threshold: Log2Real
    l_star: float
    rho: float
    r1: float
    grid_l: np.ndarray
    grid_log2: np.ndarray


def threshold_radius(q: BoundQuery, l_grid: int = 256, res: int = 512) -> ThresholdResult:
    """Supremum over ``0 < l < eps`` of the radius below which image diameters are < eps.

    Grid search over ``l_grid`` interior points, then golden-section
    refinement between the neighbours of the best grid point. Any value
    below the supremum is still a valid radius, so a refinement that fails
    to improve on the grid simply keeps the grid value.
    """
    if l_grid < 64:
        raise ValueError("l_grid must be at least 64")
    ls = q.eps * np.arange(1, l_grid + 1) / (l_grid + 1)
    vals = log2_threshold_terms(q, ls, res)
    j = int(np.argmax(vals))
    best_l, best = float(ls[j]), float(vals[j])
    if np.isfinite(best):
        lo = ls[j - 1] if j > 0 else 0.5 * ls[0]
        hi = ls[j + 1] if j + 1 < ls.size else 0.5 * (ls[-1] + q.eps)

        def neg(l):
            return -log2_threshold_terms(q, l, res)

        x, fx = golden_section_rows(neg, np.array([lo]), np.array([hi]), iters=60)
        if -fx[0] > best:
            best_l, best = float(x[0]), float(-fx[0])
    if not np.isfinite(best):
        raise ValueError("threshold vanished on the whole l grid; refine l_grid")
    rho = float(window_radius(best_l, q.eps))
    r1 = float(min_inverse_distances(q.map, q.zeta0, [rho], res)[0])
    return ThresholdResult(Log2Real(best), best_l, rho, r1, ls, vals)


def k_from_log2_threshold(x: float) -> int:
    """``2 - floor(x)`` with ``x`` the base-2 logarithm of the threshold."""
    return 2 - math.floor(x)


def k_of(q: BoundQuery, l_grid: int = 256, res: int = 512) -> int:
    return k_from_log2_threshold(threshold_radius(q, l_grid, res).threshold.log2_value)


class SoundnessError(RuntimeError):
    """delta reached the threshold it is supposed to stay under."""


@dataclass(frozen=True)
class DeltaResult:
    k: int
    delta: Log2Real
    l_star: float
    threshold: Log2Real
    g_used: int
    rho: float = math.nan
    r1: float = math.nan

    @property
    def margin_log2(self) -> float:
        return self.threshold.log2_value - self.delta.log2_value

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "log2_delta": self.delta.log2_value,
            "log2_threshold": self.threshold.log2_value,
            "l_star": self.l_star,
            "g_used": self.g_used,
        }


def delta_of(q: BoundQuery, table: MLCTable, l_grid: int = 256, res: int = 512) -> DeltaResult:
    """``delta = 2**-k + 2**-g(k)`` with ``k = k(zeta0, eps)``.

    Raises
    ------
    ValueError
        If the table neither covers ``k`` nor declares an extension rule.
    SoundnessError
        If delta is not strictly below the threshold.
    """
    tr = threshold_radius(q, l_grid, res)
    k = k_from_log2_threshold(tr.threshold.log2_value)
    g = table.value(k)
    delta = Log2Real.pow2(-k) + Log2Real.pow2(-g)
    if not delta < tr.threshold:
        raise SoundnessError(
            f"soundness violation: log2 delta = {delta.log2_value} >= log2 threshold = {tr.threshold.log2_value}"
        )
    return DeltaResult(k, delta, tr.l_star, tr.threshold, g, tr.rho, tr.r1)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnulusBound:
    bound: float
    r: float
    r1: float
    lam: float


def annulus_diameter_bound(map_spec: MapSpec, zeta0, r0: float, n_r: int = 256,
                           res: int = 512) -> AnnulusBound:
    """Best diameter bound for ``phi[C(D; zeta0, r0)]`` from annuli centred at zeta0.

    For each disk radius ``r`` on a grid in (0, 1) the outer radius is the
    distance from zeta0 to ``psi`` of the closed r-disk (shrunk by 1e-9 so the
    closed annulus separates), the inner radius is ``r0``, and the bound is
    the diameter bound for that annulus. The smallest feasible bound wins.

    Raises ``ValueError`` (from :func:`diameter_bound`) when no radius
    makes the annulus thick enough.
    """
    from .annuli import extremal_length

    zeta0 = as_point(zeta0)
    rs = np.arange(1, n_r + 1) / (n_r + 1)
    r1s = min_inverse_distances(map_spec, zeta0, rs, res) * (1 - 1e-9)
    best: AnnulusBound | None = None
    closest: tuple[float, float, float] | None = None
    for r, r1 in zip(rs, r1s):
        if r1 <= r0:
            continue
        lam = extremal_length(Annulus(zeta0, r0, r1))
        slack = r * r - math.pi * lam
        if closest is None or slack > closest[0]:
            closest = (slack, r, lam)
        if slack < 0:
            continue
        b = diameter_bound(lam, float(r))
        if best is None or b < best.bound:
            best = AnnulusBound(b, float(r), float(r1), lam)
    if best is None:
        if closest is None:
            raise ValueError("annulus too thin for radius: r0 exceeds every admissible outer radius")
        _, r, lam = closest
        raise ValueError(
            f"annulus too thin for radius: best candidate r = {r:.4g} has r**2 = {r * r:.3g} < "
            f"pi * lambda = {math.pi * lam:.3g}; r < 1 forces outer/inner > exp(2 pi**2) = "
            f"{math.exp(2 * math.pi ** 2):.3g}"
        )
    return best
