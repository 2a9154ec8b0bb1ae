"""Jordan domains with closed-form conformal maps onto the unit disk.

Every map is described by its inverse ``psi`` (disk -> domain), a polynomial
or rational function; ``phi`` is ``psi``'s inverse. The kinds are

* ``Identity``          psi(w) = w
* ``Mobius(a)``         psi(w) = (w + a) / (1 + conj(a) w),  |a| < 1
* ``Quad(c)``           psi(w) = w + c w**2,                 |c| <= 1/2
* ``Affine(s, b, f)``   psi(w) = s * f.psi(w) + b,           s > 0
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import as_point

DISK_TOL = 1e-12
BOUNDARY_TOL = 1e-9


def _as_complex_param(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex parameter must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


class MapSpec:
    """Base class for catalog maps. Subclasses are frozen dataclasses."""

    kind: str = ""

    # raw evaluators: no domain checks, vectorised over numpy arrays
    def inverse(self, w):
        raise NotImplementedError

    def forward(self, z):
        raise NotImplementedError

    def inverse_derivative(self, w):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def boundary_point(self, theta: float) -> complex:
        """The domain boundary point ``psi(exp(i theta))``."""
        return complex(self.inverse(np.exp(1j * theta)))

    def boundary_preimage(self, zeta) -> complex:
        """Unimodular ``u`` with ``psi(u) = zeta``; raises if zeta is off the boundary."""
        u = complex(self.forward(as_point(zeta)))
        if abs(abs(u) - 1.0) > BOUNDARY_TOL:
            raise ValueError(f"{zeta!r} is not a boundary point of the domain (|phi| = {abs(u):.12g})")
        return u / abs(u)


@dataclass(frozen=True)
class Identity(MapSpec):
    kind = "identity"

    def inverse(self, w):
        return np.asarray(w, dtype=complex) * 1.0

    def forward(self, z):
        return np.asarray(z, dtype=complex) * 1.0

    def inverse_derivative(self, w):
        return np.ones_like(np.asarray(w, dtype=complex))

    def to_json(self):
        return {"kind": "identity"}


@dataclass(frozen=True)
class Mobius(MapSpec):
    a: complex
    kind = "mobius"

    def __post_init__(self):
        a = complex(self.a)
        if not abs(a) < 1:
            raise ValueError("mobius parameter needs |a| < 1")
        object.__setattr__(self, "a", a)

    def inverse(self, w):
        w = np.asarray(w, dtype=complex)
        return (w + self.a) / (1 + np.conj(self.a) * w)

    def forward(self, z):
        z = np.asarray(z, dtype=complex)
        return (z - self.a) / (1 - np.conj(self.a) * z)

    def inverse_derivative(self, w):
        w = np.asarray(w, dtype=complex)
        return (1 - abs(self.a) ** 2) / (1 + np.conj(self.a) * w) ** 2

    def to_json(self):
        return {"kind": "mobius", "a": _pair(self.a)}


@dataclass(frozen=True)
class Quad(MapSpec):
    c: complex
    kind = "quad"

    def __post_init__(self):
        c = complex(self.c)
        if abs(c) > 0.5:
            raise ValueError("quad parameter needs |c| <= 1/2 for univalence")
        object.__setattr__(self, "c", c)

    def inverse(self, w):
        w = np.asarray(w, dtype=complex)
        return w + self.c * w * w

    def forward(self, z):
        # root of c w^2 + w - z = 0 written as 2z / (1 + sqrt(1 + 4cz));
        # the principal root equals 1 + 2cw for |w| <= 1, |c| <= 1/2
        z = np.asarray(z, dtype=complex)
        return 2 * z / (1 + np.sqrt(1 + 4 * self.c * z))

    def inverse_derivative(self, w):
        return 1 + 2 * self.c * np.asarray(w, dtype=complex)

    def to_json(self):
        return {"kind": "quad", "c": _pair(self.c)}


@dataclass(frozen=True)
class Affine(MapSpec):
    scale: float
    shift: complex
    inner: MapSpec
    kind = "affine"

    def __post_init__(self):
        s = float(self.scale)
        if not (np.isfinite(s) and s > 0):
            raise ValueError("affine scale must be positive")
        object.__setattr__(self, "scale", s)
        object.__setattr__(self, "shift", complex(self.shift))

    def inverse(self, w):
        return self.scale * self.inner.inverse(w) + self.shift

    def forward(self, z):
        z = np.asarray(z, dtype=complex)
        return self.inner.forward((z - self.shift) / self.scale)

    def inverse_derivative(self, w):
        return self.scale * self.inner.inverse_derivative(w)

    def to_json(self):
        return {"kind": "affine", "scale": self.scale, "shift": _pair(self.shift),
                "inner": self.inner.to_json()}


# ---------------------------------------------------------------------------


def eval_inverse(map_spec: MapSpec, w):
    """psi(w) for |w| <= 1; raises ``ValueError`` outside the closed disk."""
    arr = np.asarray(w, dtype=complex)
    if np.any(np.abs(arr) > 1 + DISK_TOL):
        raise ValueError("outside closed disk")
    out = map_spec.inverse(arr)
    return complex(out) if out.ndim == 0 else out


def eval_forward(map_spec: MapSpec, z):
    """phi(z) for z in the closed domain; raises ``ValueError`` otherwise."""
    arr = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = map_spec.forward(arr)
    if np.any(~np.isfinite(w)) or np.any(np.abs(w) > 1 + DISK_TOL):
        raise ValueError("not in domain")
    return complex(w) if w.ndim == 0 else w


def min_inverse_distances(map_spec: MapSpec, zeta0: complex, rhos, res: int = 512) -> np.ndarray:
    """``min{|zeta0 - psi(w)| : |w| <= rho}`` for each rho in ``rhos``.

    ``zeta0 - psi(w)`` has no zeros in the open unit disk, so by the minimum
    modulus principle the minimum over the closed disk sits on ``|w| = rho``.
    A grid of ``res`` angles locates it, golden-section search polishes it.
    """
    rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
    theta = 2 * np.pi * np.arange(res) / res
    circle = np.exp(1j * theta)
    vals = np.abs(zeta0 - map_spec.inverse(rhos[:, None] * circle[None, :]))
    j = np.argmin(vals, axis=1)
    step = 2 * np.pi / res
    lo = theta[j] - step
    hi = theta[j] + step

    def objective(th):
        return np.abs(zeta0 - map_spec.inverse(rhos * np.exp(1j * th)))

    _, refined = golden_section_rows(objective, lo, hi)
    return np.minimum(refined, vals.min(axis=1))


def golden_section_rows(objective, lo, hi, iters: int = 80):
    """Golden-section per row, always evaluating every row (rows are independent)."""
    invphi = (np.sqrt(5.0) - 1) / 2
    a, b = lo.astype(float), hi.astype(float)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = objective(c), objective(d)
    for _ in range(iters):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = np.where(left, b - invphi * (b - a), d)
        d_new = np.where(left, c, a + invphi * (b - a))
        # one fresh evaluation per row: the other interior point is reused
        fresh = objective(np.where(left, c_new, d_new))
        fc, fd = np.where(left, fresh, fd), np.where(left, fc, fresh)
        c, d = c_new, d_new
    x = np.where(fc < fd, c, d)
    return x, np.minimum(fc, fd)


def min_inverse_distance(map_spec: MapSpec, zeta0, rho: float, res: int = 512) -> float:
    """Distance from the boundary point ``zeta0`` to ``psi`` of the closed disk of radius rho."""
    if not (0 < rho < 1):
        raise ValueError("rho must lie in (0, 1)")
    zeta0 = as_point(zeta0)
    return float(min_inverse_distances(map_spec, zeta0, [rho], res)[0])


# ---------------------------------------------------------------------------
# JSON


def map_from_json(obj) -> MapSpec:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj.get("type") == "mapped_disk":
        obj = obj["map"]
    kind = obj.get("kind")
    if kind == "identity":
        return Identity()
    if kind == "mobius":
        return Mobius(_as_complex_param(obj["a"]))
    if kind == "quad":
        return Quad(_as_complex_param(obj["c"]))
    if kind == "affine":
        return Affine(float(obj["scale"]), _as_complex_param(obj.get("shift", 0)),
                      map_from_json(obj["inner"]))
    raise ValueError(f"unknown map kind {kind!r}")


def map_to_json(map_spec: MapSpec) -> dict:
    return {"type": "mapped_disk", "map": map_spec.to_json()}


# ---------------------------------------------------------------------------
# catalog

CATALOG: dict[str, MapSpec] = {
    "identity": Identity(),
    "mobius": Mobius(0.3),
    "mobius_complex": Mobius(0.3 + 0.4j),
    "quad": Quad(0.25),
    "quad_dented": Quad(0.4),
    "affine_quad": Affine(2.0, 1 + 1j, Quad(0.25)),
}

CATALOG_ANGLES = (0.0, np.pi / 2, np.pi, 3 * np.pi / 2)


def catalog_boundary_points(map_spec: MapSpec) -> list[complex]:
    return [map_spec.boundary_point(theta) for theta in CATALOG_ANGLES]
