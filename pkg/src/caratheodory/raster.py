"""Uniform cell grids, scanline polygon fill and 4-connected labelling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class Grid:
    """``ny x nx`` square cells of side ``h``; (x0, y0) is the lower-left corner.

    Row index runs with y, column index with x.
    """

    x0: float
    y0: float
    h: float
    nx: int
    ny: int

    @classmethod
    def around(cls, center: complex, half_width: float, n: int) -> "Grid":
        h = 2 * half_width / n
        return cls(center.real - half_width, center.imag - half_width, h, n, n)

    @classmethod
    def covering(cls, xmin, ymin, xmax, ymax, n: int, pad_cells: int = 2) -> "Grid":
        """Square cells, ``n`` across the longer side of the box, plus padding."""
        side = max(xmax - xmin, ymax - ymin)
        h = side / n
        nx = int(np.ceil((xmax - xmin) / h)) + 2 * pad_cells
        ny = int(np.ceil((ymax - ymin) / h)) + 2 * pad_cells
        return cls(xmin - pad_cells * h, ymin - pad_cells * h, h, nx, ny)

    @property
    def shape(self) -> tuple[int, int]:
        return self.ny, self.nx

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    @property
    def xs(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx) + 0.5) * self.h

    @property
    def ys(self) -> np.ndarray:
        return self.y0 + (np.arange(self.ny) + 0.5) * self.h

    def centers(self) -> np.ndarray:
        return self.xs[None, :] + 1j * self.ys[:, None]

    def cell_of(self, z: complex) -> tuple[int, int]:
        col = int(np.floor((z.real - self.x0) / self.h))
        row = int(np.floor((z.imag - self.y0) / self.h))
        return row, col

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.ny and 0 <= col < self.nx

    def lookup(self, mask: np.ndarray, z) -> np.ndarray:
        """Mask value at the cells containing points ``z`` (False off-grid)."""
        z = np.asarray(z, dtype=complex)
        col = np.floor((z.real - self.x0) / self.h).astype(np.int64)
        row = np.floor((z.imag - self.y0) / self.h).astype(np.int64)
        ok = (row >= 0) & (row < self.ny) & (col >= 0) & (col < self.nx)
        out = np.zeros(z.shape, dtype=bool)
        out[ok] = mask[row[ok], col[ok]]
        return out

    def near_cells(self, z: complex, cells: float = 1.5) -> tuple[slice, slice]:
        """Index window of cells whose centres are within ``cells`` cells (Chebyshev) of z."""
        c = (z.real - self.x0) / self.h - 0.5
        r = (z.imag - self.y0) / self.h - 0.5
        c0, c1 = int(np.ceil(c - cells)), int(np.floor(c + cells))
        r0, r1 = int(np.ceil(r - cells)), int(np.floor(r + cells))
        return slice(max(r0, 0), max(min(r1 + 1, self.ny), 0)), slice(max(c0, 0), max(min(c1 + 1, self.nx), 0))


def polygon_mask(vertices, grid: Grid) -> np.ndarray:
    """Cells whose centres lie inside the closed polygon (even-odd scanline)."""
    v = np.asarray(vertices, dtype=complex)
    a = v
    b = np.roll(v, -1)
    ys = grid.ys
    xs = grid.xs
    ay, by = a.imag[None, :], b.imag[None, :]
    Y = ys[:, None]
    spans = ((ay <= Y) & (by > Y)) | ((by <= Y) & (ay > Y))
    mask = np.zeros(grid.shape, dtype=bool)
    rows, edges = np.nonzero(spans)
    if rows.size == 0:
        return mask
    ea, eb = a[edges], b[edges]
    yy = ys[rows]
    xc = ea.real + (yy - ea.imag) * (eb.real - ea.real) / (eb.imag - ea.imag)
    order = np.lexsort((xc, rows))
    rows, xc = rows[order], xc[order]
    starts = np.searchsorted(rows, np.arange(grid.ny), side="left")
    stops = np.searchsorted(rows, np.arange(grid.ny), side="right")
    for r in np.flatnonzero(stops > starts):
        crossings = xc[starts[r]:stops[r]]
        parity = np.searchsorted(crossings, xs, side="right") & 1
        mask[r] = parity.astype(bool)
    return mask


def disk_mask(center: complex, radius: float, grid: Grid, strict: bool = True) -> np.ndarray:
    d = np.abs(grid.centers() - center)
    return d < radius if strict else d <= radius


def label(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """4-connected component labels (0 is background)."""
    return ndimage.label(mask, structure=FOUR_CONNECTED)


def touching_labels(labels: np.ndarray, grid: Grid, z: complex, cells: float = 1.5) -> set[int]:
    """Labels with a cell within one grid cell of ``z``.

    A cell counts when ``z`` lies in the closed 3x3 block of cells around it,
    i.e. its centre is within 1.5 cells of z in the max-norm.
    """
    rs, cs = grid.near_cells(z, cells)
    window = labels[rs, cs]
    return {int(x) for x in np.unique(window) if x != 0}


def boundary_cell_count(mask: np.ndarray) -> int:
    """Member cells with at least one 4-neighbour outside the mask."""
    inner = ndimage.binary_erosion(mask, structure=FOUR_CONNECTED, border_value=0)
    return int(np.count_nonzero(mask & ~inner))
