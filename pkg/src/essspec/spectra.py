"""Spectra, essential spectra and essential spectral radii.

Ground truth for symbol operators comes from the symbol calculus, never from
finite sections: ``sigma(L(a)) = sigma_e(L(a)) = sigma_e(T(a)) = a(circle)``
and ``sigma(T(a))`` adds every point around which the curve winds.  In
finite dimension the essential spectrum is empty and ``r_e = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy import ndimage

from . import cplane
from .cplane import CompactSetEstimate, empty_set, union
from .errors import InvalidParameterError, OnCurveError, ShapeError, SolverError, UnsupportedError
from .operators import (
    BlockTriangular,
    DirectSum,
    FiniteOperator,
    LaurentOperator,
    ToeplitzOperator,
    dense_matrix,
)
from .symbols import eval_symbol, next_pow2, winding_number

DEFAULT_RESOLUTION = 5e-3
MIN_CURVE_NODES = 256
MAX_CURVE_NODES = 2**20
MAX_GRID_CELLS = 10**6


@dataclass(frozen=True, eq=False)
class SpectralReport:
    spectrum: CompactSetEstimate
    essential: CompactSetEstimate
    essential_radius: float
    method: str


def eigenvalues(M):
    """All eigenvalues of a square matrix, with multiplicity (LAPACK QR)."""
    if isinstance(M, FiniteOperator):
        M = M.matrix
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"eigenvalues need a square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        return np.empty(0, complex)
    try:
        return sla.eigvals(M, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"eigensolver failed: {exc}") from exc


def curve_nodes(a, resolution=DEFAULT_RESOLUTION):
    """Smallest power-of-two sampling meeting ``resolution`` along ``a(circle)``."""
    D = a.derivative_bound()
    N = next_pow2(max(MIN_CURVE_NODES, 2 * a.bandwidth + 2))
    while math.pi * D / N > resolution and N < MAX_CURVE_NODES:
        N *= 2
    return N


def symbol_curve(a, nodes=None, resolution=DEFAULT_RESOLUTION):
    """Samples of ``a(e^{iθ})``; ``resolution`` is a rigorous sampling bound."""
    N = curve_nodes(a, resolution) if nodes is None else nodes
    vals = eval_symbol(a, N).values
    # any point of the curve sits within half a node spacing (in θ) of a sample
    res = max(math.pi * a.derivative_bound() / N, np.finfo(float).eps)
    return CompactSetEstimate(vals, "exact-curve", res)


def winding_region(a, cell_size, curve=None):
    """Centers of grid cells around which ``a`` winds a nonzero number of times.

    The winding number is constant on each component of the complement of
    the curve, so it is evaluated once per raster component, at the cell
    farthest from the curve.
    """
    if curve is None:
        curve = symbol_curve(a, resolution=cell_size / 2)
    pts = curve.points
    origin, rows, cols = cplane.grid_for(pts, cell_size, cplane.default_margin(cell_size))
    if rows * cols > MAX_GRID_CELLS * 16:
        raise InvalidParameterError(f"winding grid of {rows}x{cols} cells is too large")
    occ = cplane.occupancy(pts, origin, rows, cols, cell_size)
    labels, count = ndimage.label(~occ, structure=cplane._FOUR)
    if count == 0:
        return np.empty(0, complex)
    edge = np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]]))
    dist = ndimage.distance_transform_edt(~occ)
    inside = np.zeros_like(occ)
    for lab in range(1, count + 1):
        if lab in edge:
            continue
        sel = labels == lab
        flat = np.argmax(np.where(sel, dist, -1.0))
        r, c = np.unravel_index(flat, sel.shape)
        z = origin + (c + 0.5) * cell_size + 1j * (r + 0.5) * cell_size
        try:
            wind = winding_number(a, z)
        except OnCurveError:
            continue
        if wind != 0:
            inside |= sel
    rr, cc = np.nonzero(inside)
    return origin + (cc + 0.5) * cell_size + 1j * (rr + 0.5) * cell_size


def _toeplitz_spectrum(a, nodes, resolution, cell_size):
    if cell_size is None:
        cell_size = max(2 * resolution, 0.01)
    curve = symbol_curve(a, nodes, min(resolution, cell_size / 2) if nodes is None else resolution)
    region = winding_region(a, cell_size, curve)
    if region.size == 0:
        return curve
    return CompactSetEstimate(
        np.concatenate([curve.points, region]),
        "region-raster",
        resolution=curve.resolution + cell_size * math.sqrt(2.0),
    )


def spectrum(T, nodes=None, resolution=DEFAULT_RESOLUTION, cell_size=None):
    """Spectrum as a point cloud.

    Block triangular operators with symbol blocks get the union of the
    diagonal-block spectra, flagged non-exact.
    """
    M = dense_matrix(T)
    if M is not None:
        ev = eigenvalues(M)
        if ev.size == 0:
            return empty_set()
        res = 1e-8 * max(1.0, float(np.linalg.norm(M, 2)))
        return CompactSetEstimate(ev, "eigenvalues", res)
    if isinstance(T, LaurentOperator):
        return symbol_curve(T.symbol, nodes, resolution)
    if isinstance(T, ToeplitzOperator):
        return _toeplitz_spectrum(T.symbol, nodes, resolution, cell_size)
    if isinstance(T, DirectSum):
        return union(*(spectrum(p, nodes, resolution, cell_size) for p in T.parts))
    if isinstance(T, BlockTriangular):
        u = union(*(spectrum(p, nodes, resolution, cell_size) for p in T.diag))
        return CompactSetEstimate(u.points, u.kind, u.resolution, exact=u.exact and not T.coupling)
    raise UnsupportedError(f"no spectrum for {type(T).__name__}")


def essential_spectrum(T, nodes=None, resolution=DEFAULT_RESOLUTION):
    """Essential spectrum as a point cloud (empty in finite dimension)."""
    if dense_matrix(T) is not None:
        return empty_set()
    if isinstance(T, (LaurentOperator, ToeplitzOperator)):
        return symbol_curve(T.symbol, nodes, resolution)
    if isinstance(T, DirectSum):
        return union(*(essential_spectrum(p, nodes, resolution) for p in T.parts))
    if isinstance(T, BlockTriangular):
        u = union(*(essential_spectrum(p, nodes, resolution) for p in T.diag))
        # with coupling only the union bound is known to hold
        return CompactSetEstimate(u.points, u.kind, u.resolution, exact=u.exact and not T.coupling)
    raise UnsupportedError(f"no essential spectrum for {type(T).__name__}")


def essential_spectral_radius(T, nodes=None, resolution=DEFAULT_RESOLUTION):
    return essential_spectrum(T, nodes, resolution).max_modulus()


def _method(T):
    if dense_matrix(T) is not None:
        return "eigensolver"
    if isinstance(T, LaurentOperator):
        return "symbol-curve"
    if isinstance(T, ToeplitzOperator):
        return "symbol-curve-plus-winding"
    return "union"


def spectral_report(T, nodes=None, resolution=DEFAULT_RESOLUTION, cell_size=None):
    ess = essential_spectrum(T, nodes, resolution)
    spec = spectrum(T, nodes, resolution, cell_size)
    method = _method(T)
    if method == "eigensolver":
        method = "empty-by-convention" if spec.is_empty else method
    return SpectralReport(spec, ess, ess.max_modulus(), method)


def smallest_singular_value(M, z):
    M = np.asarray(M.matrix if isinstance(M, FiniteOperator) else M, complex)
    n = M.shape[0]
    return float(np.linalg.svd(z * np.eye(n) - M, compute_uv=False)[-1])


def pseudospectrum_grid(M, lower_left, upper_right, cell_size):
    """Smallest singular value of ``z - M`` on a rectangular grid of points.

    Returns ``(xs, ys, smin)`` with ``smin[i, j]`` taken at ``xs[j] + 1j*ys[i]``.
    """
    if not cell_size > 0:
        raise InvalidParameterError("cell_size must be positive")
    lo, hi = complex(lower_left), complex(upper_right)
    xs = lo.real + cell_size * np.arange(int(math.floor((hi.real - lo.real) / cell_size + 1e-9)) + 1)
    ys = lo.imag + cell_size * np.arange(int(math.floor((hi.imag - lo.imag) / cell_size + 1e-9)) + 1)
    if xs.size * ys.size > MAX_GRID_CELLS:
        raise InvalidParameterError(f"grid of {xs.size * ys.size} points exceeds {MAX_GRID_CELLS}")
    A = np.asarray(M.matrix if isinstance(M, FiniteOperator) else M, complex)
    smin = np.empty((ys.size, xs.size))
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            smin[i, j] = smallest_singular_value(A, complex(x, y))
    return xs, ys, smin
