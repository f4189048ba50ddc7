"""Compact subsets of the complex plane.

Sets are carried around as finite point clouds (:class:`CompactSetEstimate`)
and their polynomial hulls as rasters (:class:`HullRegion`).  For a compact
planar set the polynomial hull is the set together with the bounded
components of its complement, so the hull is computed by marking the cells
near the samples and filling every pocket of free cells the boundary of the
grid cannot reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .errors import InvalidParameterError

KINDS = ("exact-curve", "eigenvalues", "region-raster", "empty")

# 4-connectivity: a diagonal step may not squeeze between two occupied cells.
_FOUR = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True, eq=False)
class CompactSetEstimate:
    """A finite sample of a compact set in the plane.

    ``resolution`` bounds the distance from any point of the true set to the
    nearest sample.  ``exact`` is False when the cloud is only known to
    contain the set it stands for (an upper bound), which is enough for
    union checks but never for an inclusion verdict.
    """

    points: np.ndarray
    kind: str
    resolution: float = 0.0
    exact: bool = True

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).reshape(-1)
        object.__setattr__(self, "points", pts)
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown set kind {self.kind!r}")
        if (self.kind == "empty") != (pts.size == 0):
            raise InvalidParameterError("kind 'empty' must go with an empty point list")
        if self.kind == "exact-curve" and not self.resolution > 0:
            raise InvalidParameterError("exact-curve sets need a positive resolution")
        if not np.all(np.isfinite(pts)):
            raise InvalidParameterError("points must be finite")

    def __len__(self):
        return self.points.size

    @property
    def is_empty(self):
        return self.points.size == 0

    def max_modulus(self):
        return float(np.abs(self.points).max()) if self.points.size else 0.0


def empty_set():
    return CompactSetEstimate(np.empty(0, complex), "empty")


def union(*sets):
    """Union of point clouds; the result is exact only if every part is."""
    parts = [s for s in sets if not s.is_empty]
    if not parts:
        exact = all(s.exact for s in sets)
        return CompactSetEstimate(np.empty(0, complex), "empty", exact=exact)
    kinds = {s.kind for s in parts}
    kind = kinds.pop() if len(kinds) == 1 else "region-raster"
    return CompactSetEstimate(
        np.concatenate([s.points for s in parts]),
        kind,
        resolution=max(s.resolution for s in parts),
        exact=all(s.exact for s in sets),
    )


@dataclass(frozen=True, eq=False)
class HullRegion:
    """Rasterized filled region.

    Cell ``(r, c)`` is the square with lower-left corner
    ``origin + c*cell_size + 1j*r*cell_size``; rows run along the imaginary
    axis.
    """

    origin: complex
    cell_size: float
    mask: np.ndarray = field(repr=False)
    source_resolution: float = 0.0

    def __post_init__(self):
        if not self.cell_size > 0:
            raise InvalidParameterError("cell_size must be positive")
        object.__setattr__(self, "mask", np.asarray(self.mask, dtype=bool))
        object.__setattr__(self, "origin", complex(self.origin))

    @property
    def shape(self):
        return self.mask.shape

    @property
    def is_empty(self):
        return not self.mask.any()

    @property
    def cell_diagonal(self):
        return self.cell_size * math.sqrt(2.0)

    def area(self):
        return float(self.mask.sum()) * self.cell_size**2

    def centers(self, which=None):
        """Centers of the cells selected by ``which`` (default: true cells)."""
        sel = self.mask if which is None else which
        rows, cols = np.nonzero(sel)
        return self.origin + (cols + 0.5) * self.cell_size + 1j * (rows + 0.5) * self.cell_size

    def boundary_cells(self):
        """True cells with a false 4-neighbour or on the edge of the grid."""
        padded = np.pad(self.mask, 1, constant_values=False)
        interior = ndimage.binary_erosion(padded, structure=_FOUR)[1:-1, 1:-1]
        return self.mask & ~interior

    def cell_index(self, z):
        """(row, col) of the cell containing ``z``; may fall outside the grid."""
        w = (np.asarray(z, dtype=complex) - self.origin) / self.cell_size
        return np.floor(w.imag).astype(int), np.floor(w.real).astype(int)


def empty_region(cell_size=1.0):
    return HullRegion(0j, cell_size, np.zeros((0, 0), bool))


def default_margin(cell_size):
    return 0.5 + 2.0 * cell_size


def grid_for(points, cell_size, margin):
    """Grid geometry (origin, rows, cols) covering ``points`` plus ``margin``."""
    lo = complex(points.real.min() - margin, points.imag.min() - margin)
    hi = complex(points.real.max() + margin, points.imag.max() + margin)
    cols = int(math.ceil((hi.real - lo.real) / cell_size)) + 1
    rows = int(math.ceil((hi.imag - lo.imag) / cell_size)) + 1
    return lo, rows, cols


def occupancy(points, origin, rows, cols, cell_size):
    """Cells whose center lies within one cell diagonal of some point."""
    occ = np.zeros((rows, cols), bool)
    if points.size == 0:
        return occ
    radius = cell_size * math.sqrt(2.0)
    reach = int(math.ceil(radius / cell_size)) + 1
    offs = np.arange(-reach, reach + 1)
    dr, dc = np.meshgrid(offs, offs, indexing="ij")
    dr, dc = dr.ravel(), dc.ravel()
    w = (points - origin) / cell_size
    r0 = np.floor(w.imag).astype(int)
    c0 = np.floor(w.real).astype(int)
    # process in chunks to bound memory on dense curves
    step = 20000
    for start in range(0, points.size, step):
        rr = r0[start:start + step, None] + dr[None, :]
        cc = c0[start:start + step, None] + dc[None, :]
        centers = origin + (cc + 0.5) * cell_size + 1j * (rr + 0.5) * cell_size
        hit = np.abs(centers - points[start:start + step, None]) <= radius
        hit &= (rr >= 0) & (rr < rows) & (cc >= 0) & (cc < cols)
        occ[rr[hit], cc[hit]] = True
    return occ


def fill_holes(occ):
    """Occupied cells plus every free cell unreachable from the grid boundary."""
    return ndimage.binary_fill_holes(occ, structure=_FOUR)


def polynomial_hull(S, cell_size, margin=None):
    """Raster of ``S`` together with the bounded components of its complement."""
    if not cell_size > 0:
        raise InvalidParameterError(f"cell_size must be positive, got {cell_size}")
    if margin is None:
        margin = default_margin(cell_size)
    if not margin >= 2 * cell_size:
        raise InvalidParameterError(f"margin must be at least 2*cell_size, got {margin}")
    if S.is_empty:
        return HullRegion(0j, cell_size, np.zeros((0, 0), bool), S.resolution)
    origin, rows, cols = grid_for(S.points, cell_size, margin)
    occ = occupancy(S.points, origin, rows, cols, cell_size)
    return HullRegion(origin, cell_size, fill_holes(occ), S.resolution)


def hull_contains(H, z, slack=0.0):
    """True iff ``z`` is within ``slack`` of some true cell (as a closed square)."""
    if H.is_empty:
        return False
    cs = H.cell_size
    w = (complex(z) - H.origin) / cs
    reach = slack / cs + 1
    r_lo = max(int(math.floor(w.imag - reach)), 0)
    r_hi = min(int(math.ceil(w.imag + reach)), H.shape[0] - 1)
    c_lo = max(int(math.floor(w.real - reach)), 0)
    c_hi = min(int(math.ceil(w.real + reach)), H.shape[1] - 1)
    if r_lo > r_hi or c_lo > c_hi:
        return False
    sub = H.mask[r_lo:r_hi + 1, c_lo:c_hi + 1]
    if not sub.any():
        return False
    rows, cols = np.nonzero(sub)
    cx = H.origin.real + (cols + c_lo + 0.5) * cs
    cy = H.origin.imag + (rows + r_lo + 0.5) * cs
    dx = np.maximum(np.abs(complex(z).real - cx) - cs / 2, 0.0)
    dy = np.maximum(np.abs(complex(z).imag - cy) - cs / 2, 0.0)
    return bool(np.any(np.hypot(dx, dy) <= slack))


def one_sided_distance(A, H):
    """sup over points of ``A`` of the distance to the nearest true cell center."""
    if A.is_empty:
        return 0.0
    if H.is_empty:
        return math.inf
    pts = A.points
    rows, cols = H.cell_index(pts)
    nr, nc = H.shape
    inside = (rows >= 0) & (rows < nr) & (cols >= 0) & (cols < nc)
    in_true = np.zeros(pts.size, bool)
    in_true[inside] = H.mask[rows[inside], cols[inside]]

    dist = np.empty(pts.size)
    if (~in_true).any():
        # the nearest true center to a point outside the region is a boundary cell
        tree = cKDTree(np.column_stack(_xy(H.centers(H.boundary_cells()))))
        dist[~in_true] = tree.query(np.column_stack(_xy(pts[~in_true])))[0]
    if in_true.any():
        idx = np.nonzero(in_true)[0]
        best = np.full(idx.size, math.inf)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                r = rows[idx] + dr
                c = cols[idx] + dc
                ok = (r >= 0) & (r < nr) & (c >= 0) & (c < nc)
                ok[ok] = H.mask[r[ok], c[ok]]
                cen = H.origin + (c + 0.5) * H.cell_size + 1j * (r + 0.5) * H.cell_size
                d = np.where(ok, np.abs(pts[idx] - cen), math.inf)
                best = np.minimum(best, d)
        dist[idx] = best
    return float(dist.max())


def dilate(H, delta):
    """Morphological dilation of the mask by a disk of radius ``delta``."""
    if delta < 0:
        raise InvalidParameterError("dilation radius must be nonnegative")
    if delta == 0 or H.is_empty:
        return H
    cs = H.cell_size
    pad = int(math.ceil(delta / cs)) + 1
    offs = np.arange(-pad, pad + 1)
    disk = (offs[:, None] ** 2 + offs[None, :] ** 2) * cs**2 <= delta**2 * (1 + 1e-12)
    grown = ndimage.binary_dilation(np.pad(H.mask, pad), structure=disk)
    return HullRegion(H.origin - pad * cs * (1 + 1j), cs, grown, H.source_resolution)


def _xy(z):
    return z.real, z.imag
