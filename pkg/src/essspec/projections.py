"""Resolvents and Riesz spectral projections of matrices.

The projection onto the spectral subspace of the eigenvalues inside the
circle ``|z - lam| = radius`` is the contour integral of the resolvent,
evaluated by the trapezoid rule, which converges geometrically for
analytic periodic integrands.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import ContourCollisionError, InvalidParameterError, PrecisionError, SingularResolventError
from .operators import FiniteOperator, as_finite

MAX_CONDITION = 1e12
GAP_FACTOR = 0.1
DEFAULT_NODES = 128
RANK_TOL = 1e-8


def _matrix(T):
    if isinstance(T, np.ndarray):
        return np.asarray(T, complex)
    return as_finite(T).matrix


def resolvent_apply(T, z):
    """``(z - T)^{-1}`` via a pivoted LU factorization."""
    M = _matrix(T)
    n = M.shape[0]
    A = z * np.eye(n) - M
    if n == 0:
        return np.zeros((0, 0), complex)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularResolventError(f"z = {z} is (numerically) in the spectrum", cond)
    return sla.lu_solve(sla.lu_factor(A), np.eye(n, dtype=complex))


@dataclass(eq=False)
class ProjectionReport:
    matrix: np.ndarray = field(repr=False)
    lam: complex
    radius: float
    nodes: int
    idempotency_residual: float
    commutation_residual: float
    rank: int
    trace_gap: float

    def to_dict(self):
        d = asdict(self)
        d.pop("matrix")
        d["lambda"] = [self.lam.real, self.lam.imag]
        del d["lam"]
        d["dimension"] = int(self.matrix.shape[0])
        return d


def cluster(ev, lam, tol=None):
    """Boolean mask of the eigenvalues that coincide with ``lam`` numerically."""
    if tol is None:
        tol = 1e-6 * max(1.0, abs(lam))
    return np.abs(ev - lam) <= tol


def default_radius(T, lam):
    """Half the distance from ``lam`` to the nearest other eigenvalue."""
    ev = np.linalg.eigvals(_matrix(T)) if _matrix(T).size else np.empty(0)
    others = ev[~cluster(ev, lam)]
    if others.size == 0:
        return 1.0
    return 0.5 * float(np.abs(others - lam).min())


def _check_contour(ev, lam, radius, gap):
    d = np.abs(ev - lam)
    hit = (d >= radius * (1 - gap)) & (d <= radius * (1 + gap))
    if hit.any():
        raise ContourCollisionError(
            f"eigenvalue {ev[hit][0]:.6g} lies within the guard band of the contour "
            f"|z - {lam:.6g}| = {radius:.6g}"
        )


def contour_projection(T, lam, radius=None, nodes=DEFAULT_NODES, gap=GAP_FACTOR):
    """Trapezoid-rule Riesz projection for the circle of ``radius`` around ``lam``."""
    M = _matrix(T)
    lam = complex(lam)
    if nodes < 16:
        raise InvalidParameterError(f"need at least 16 quadrature nodes, got {nodes}")
    if radius is None:
        radius = default_radius(M, lam)
    if not radius > 0:
        raise InvalidParameterError("radius must be positive")
    n = M.shape[0]
    ev = np.linalg.eigvals(M) if n else np.empty(0, complex)
    _check_contour(ev, lam, radius, gap)

    P = np.zeros((n, n), complex)
    for k in range(nodes):  # fixed accumulation order
        w = np.exp(2j * np.pi * k / nodes)
        P += w * resolvent_apply(M, lam + radius * w)
    P *= radius / nodes

    if n == 0:
        return ProjectionReport(P, lam, radius, nodes, 0.0, 0.0, 0, 0.0)
    s = np.linalg.svd(P, compute_uv=False)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s[0] > RANK_TOL else 0
    trace_gap = abs(np.trace(P) - rank)
    if trace_gap > 0.1:
        raise PrecisionError(f"trace of the projection is {np.trace(P):.4g}, rank {rank}; increase nodes")
    return ProjectionReport(
        P,
        lam,
        float(radius),
        nodes,
        float(np.linalg.norm(P @ P - P, 2)),
        float(np.linalg.norm(M @ P - P @ M, 2)),
        rank,
        float(trace_gap),
    )


@dataclass(frozen=True)
class FredholmConsistency:
    consistent: bool
    rank: int
    multiplicity: int
    dimension_drop: int


def rank_vs_fredholm_check(T, lam, radius=None, nodes=DEFAULT_NODES):
    """Compare three counts of the spectral subspace at an isolated eigenvalue.

    ``rank`` of the contour projection, the algebraic ``multiplicity``
    (eigenvalues enclosed by the contour) and ``dimension_drop``, the
    nullity of ``(lam - T)^n``.  In finite dimension every such projection
    has finite rank and all three agree.
    """
    M = _matrix(T)
    rep = contour_projection(M, lam, radius, nodes)
    ev = np.linalg.eigvals(M)
    mult = int(np.sum(np.abs(ev - rep.lam) < rep.radius))
    n = M.shape[0]
    A = np.linalg.matrix_power(rep.lam * np.eye(n) - M, n)
    s = np.linalg.svd(A, compute_uv=False)
    scale = max(1.0, float(np.linalg.norm(M, 2))) ** n
    drop = int(np.sum(s <= 1e-8 * scale))
    return FredholmConsistency(rep.rank == mult == drop, rep.rank, mult, drop)
