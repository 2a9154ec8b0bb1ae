"""scikit-learn style wrappers around the MLC search and the catalog maps."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .curves import PolygonalJordanCurve
from .maps import CATALOG, MapSpec, eval_forward, eval_inverse, map_from_json
from .mlc import MLCTable, check_mlc, estimate_mlc


def _as_curve(X) -> PolygonalJordanCurve:
    if isinstance(X, PolygonalJordanCurve):
        return X
    if isinstance(X, dict):
        return PolygonalJordanCurve.from_json(X)
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        return PolygonalJordanCurve(arr.ravel())
    return PolygonalJordanCurve(check_array(arr, ensure_min_samples=3))


class MLCEstimator(BaseEstimator):
    """Fit a modulus of local connectivity table to a polygonal curve.

    ``X`` is the curve: an ``(n, 2)`` vertex array, complex vertices, a
    polygon JSON document or a :class:`PolygonalJordanCurve`.

    Attributes
    ----------
    table_ : MLCTable
    g_ : ndarray of shape (kmax + 1,)
    curve_ : PolygonalJordanCurve
    """

    def __init__(self, kmax=8, resolution=4096, pad=1):
        self.kmax = kmax
        self.resolution = resolution
        self.pad = pad

    def fit(self, X, y=None):
        self.curve_ = _as_curve(X)
        self.table_ = estimate_mlc(self.curve_, self.kmax, self.resolution, self.pad)
        self.g_ = np.asarray(self.table_.g)
        return self

    def check(self, k, X=None, table=None):
        """Witness against ``table`` (default: the fitted one) at level k, or None."""
        check_is_fitted(self, "table_")
        curve = self.curve_ if X is None else _as_curve(X)
        return check_mlc(curve, table or self.table_, k, self.resolution)

    def score(self, X, y=None):
        """Fraction of levels 0..kmax at which the fitted table survives on ``X``."""
        check_is_fitted(self, "table_")
        curve = _as_curve(X)
        ok = [check_mlc(curve, self.table_, k, self.resolution) is None for k in range(self.table_.kmax + 1)]
        return float(np.mean(ok))


def _resolve_map(spec) -> MapSpec:
    if isinstance(spec, MapSpec):
        return spec
    if isinstance(spec, str):
        if spec not in CATALOG:
            raise ValueError(f"unknown catalog map {spec!r}; choose from {sorted(CATALOG)}")
        return CATALOG[spec]
    if isinstance(spec, dict):
        return map_from_json(spec)
    raise TypeError(f"cannot interpret {spec!r} as a map")


class ConformalMapTransformer(TransformerMixin, BaseEstimator):
    """Push planar points through a catalog conformal map.

    ``direction="forward"`` applies phi (domain -> disk), ``"inverse"``
    applies psi (disk -> domain). Points are rows ``(x, y)``.
    """

    def __init__(self, map="identity", direction="forward", check_domain=True):
        self.map = map
        self.direction = direction
        self.check_domain = check_domain

    def fit(self, X=None, y=None):
        if self.direction not in ("forward", "inverse"):
            raise ValueError("direction must be 'forward' or 'inverse'")
        self.map_ = _resolve_map(self.map)
        if X is not None:
            check_array(X)
        self.n_features_in_ = 2
        return self

    def _apply(self, X, forward: bool):
        check_is_fitted(self, "map_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 columns (x, y), got {X.shape[1]}")
        z = X[:, 0] + 1j * X[:, 1]
        if forward:
            w = eval_forward(self.map_, z) if self.check_domain else self.map_.forward(z)
        else:
            w = eval_inverse(self.map_, z) if self.check_domain else self.map_.inverse(z)
        w = np.atleast_1d(w)
        return np.column_stack([w.real, w.imag])

    def transform(self, X):
        return self._apply(X, self.direction == "forward")

    def inverse_transform(self, X):
        return self._apply(X, self.direction != "forward")


__all__ = ["MLCEstimator", "ConformalMapTransformer", "MLCTable"]
