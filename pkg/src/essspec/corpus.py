"""Seeded random operator families used by suites and acceptance runs.

All randomness goes through a caller-supplied ``numpy.random.Generator``.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .operators import (
    BlockTriangular,
    CoordinateSubspace,
    Coupling,
    FiniteOperator,
    HalfLine,
    LaurentOperator,
    operator_doc,
    subspace_doc,
)
from .symbols import Symbol

FAMILIES = ("analytic_laurent", "block_triangular")


def unit_box(rng, size=None):
    """Complex numbers with real and imaginary parts uniform in [-1, 1]."""
    return rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size)


def random_analytic_symbol(rng, max_degree=6):
    """Analytic trigonometric polynomial of degree 1..max_degree, coefficients in the unit box."""
    degree = int(rng.integers(1, max_degree + 1))
    c = unit_box(rng, degree + 1)
    if abs(c[-1]) < 0.1:
        c[-1] += 0.5
    return Symbol.from_list(c)


def separated_points(rng, n, gap, scale=2.0):
    """``n`` points in the box of half-width ``scale`` with pairwise distance >= gap."""
    pts = []
    while len(pts) < n:
        z = scale * unit_box(rng)
        if all(abs(z - p) >= gap for p in pts):
            pts.append(z)
    return np.array(pts)


def well_conditioned(rng, n, spread=0.3):
    """Random invertible matrix close to the identity (condition number O(1))."""
    return np.eye(n) + spread * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)


def diagonalizable(rng, eigs, spread=0.3):
    V = well_conditioned(rng, len(eigs), spread)
    return V @ np.diag(eigs) @ np.linalg.inv(V), V


def projection_case(rng, n_max=12, gap=0.3):
    """Diagonalizable matrix with separated eigenvalues and its exact Riesz data.

    Returns ``(M, lam, P)`` where ``P`` is the eigenprojection onto the
    eigenvector of ``lam`` along the others.
    """
    n = int(rng.integers(2, n_max + 1))
    eigs = separated_points(rng, n, gap)
    M, V = diagonalizable(rng, eigs)
    j = int(rng.integers(n))
    W = np.linalg.inv(V)
    P = np.outer(V[:, j], W[j, :])
    return M, complex(eigs[j]), P


def block_triangular_case(rng, n_max=8, gap=0.3, coupling=1.0):
    """Block upper triangular matrix [[A, B], [0, C]] with separated eigenvalues.

    Returns ``(T, F, lam)`` with ``F`` the leading coordinate block and
    ``lam`` an eigenvalue of ``A``.
    """
    n = int(rng.integers(2, n_max + 1))
    k = int(rng.integers(1, n))
    eigs = separated_points(rng, n, gap)
    A, _ = diagonalizable(rng, eigs[:k])
    C, _ = diagonalizable(rng, eigs[k:])
    B = coupling * unit_box(rng, (k, n - k))
    T = BlockTriangular((FiniteOperator(A), FiniteOperator(C)), (Coupling(0, 1, B),), label=f"block{n}x{k}")
    F = CoordinateSubspace(tuple(range(k)), label=f"leading{k}")
    return T, F, complex(eigs[int(rng.integers(k))])


def expand_case(doc, path, rng, parse):
    """Expand a ``{"corpus": {...}, ...}`` suite entry into parsed cases."""
    spec = doc["corpus"]
    if not isinstance(spec, dict):
        raise ValidationError(f"{path}.corpus", "expected an object")
    family = spec.get("family", "analytic_laurent")
    count = spec.get("count", 10)
    if family not in FAMILIES:
        raise ValidationError(f"{path}.corpus.family", f"expected one of {list(FAMILIES)}")
    if not isinstance(count, int) or count < 0:
        raise ValidationError(f"{path}.corpus.count", "must be a nonnegative integer")
    base = {k: v for k, v in doc.items() if k != "corpus"}
    cases = []
    for i in range(count):
        entry = dict(base)
        if family == "analytic_laurent":
            a = random_analytic_symbol(rng, spec.get("max_degree", 6))
            entry["operator"] = operator_doc(LaurentOperator(a, f"laurent{i}"))
            entry["subspace"] = subspace_doc(HalfLine(0, "halfline0"))
        else:
            T, F, lam = block_triangular_case(rng, spec.get("n_max", 8))
            T = BlockTriangular(T.diag, T.coupling, f"block{i}")
            entry["operator"] = operator_doc(T)
            entry["subspace"] = subspace_doc(F)
            entry["lambda"] = [lam.real, lam.imag]
        entry["label"] = f"{base.get('label', family)}[{i}]"
        cases.append(parse(entry, f"{path}.corpus[{i}]"))
    return cases
