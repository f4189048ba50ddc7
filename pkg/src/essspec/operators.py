"""Operators, invariant subspaces and the induced pair (restriction, quotient).

Supported operators are dense matrices, Laurent and Toeplitz operators of
trigonometric-polynomial symbols (optionally tensored with an identity of
size ``multiplicity``), direct sums, and block upper triangular compositions.
Subspaces are coordinate index sets, ranges of basis matrices, half lines
``span{e_k : k >= start}`` of a symbol operator, or per-summand lists for a
direct sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import scipy.linalg as sla

from .errors import (
    BasisError,
    InvalidParameterError,
    NotInvariantError,
    ShapeError,
    UnsupportedError,
    ValidationError,
)
from .symbols import Symbol

DEFAULT_TOL = 1e-10


# --------------------------------------------------------------------------
# operator values


@dataclass(frozen=True, eq=False)
class FiniteOperator:
    matrix: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"finite operator needs a square matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class LaurentOperator:
    symbol: Symbol
    label: str = ""


@dataclass(frozen=True, eq=False)
class ToeplitzOperator:
    symbol: Symbol
    label: str = ""


@dataclass(frozen=True, eq=False)
class DirectSum:
    parts: tuple
    label: str = ""


@dataclass(frozen=True, eq=False)
class Coupling:
    """Finite-rank block from diagonal block ``row`` to block ``col`` (row < col).

    For symbol blocks the matrix sits in the top-left corner of the block.
    """

    row: int
    col: int
    matrix: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class BlockTriangular:
    diag: tuple
    coupling: tuple = ()
    label: str = ""


Operator = Union[FiniteOperator, LaurentOperator, ToeplitzOperator, DirectSum, BlockTriangular]
SYMBOL_TYPES = (LaurentOperator, ToeplitzOperator)


def dense_matrix(T) -> Optional[np.ndarray]:
    """Dense matrix of an operator built only from finite pieces, else None."""
    if isinstance(T, FiniteOperator):
        return T.matrix
    if isinstance(T, DirectSum):
        blocks = [dense_matrix(p) for p in T.parts]
        if any(b is None for b in blocks):
            return None
        return sla.block_diag(*blocks).astype(complex) if blocks else np.zeros((0, 0), complex)
    if isinstance(T, BlockTriangular):
        blocks = [dense_matrix(p) for p in T.diag]
        if any(b is None for b in blocks):
            return None
        sizes = [b.shape[0] for b in blocks]
        starts = np.concatenate([[0], np.cumsum(sizes)])
        M = sla.block_diag(*blocks).astype(complex)
        for cp in T.coupling:
            r0, c0 = starts[cp.row], starts[cp.col]
            h, w = cp.matrix.shape
            M[r0:r0 + h, c0:c0 + w] += cp.matrix
        return M
    return None


def is_finite(T):
    return dense_matrix(T) is not None


def as_finite(T):
    M = dense_matrix(T)
    if M is None:
        raise UnsupportedError(f"{type(T).__name__} is not a finite-dimensional operator")
    return T if isinstance(T, FiniteOperator) else FiniteOperator(M, T.label)


# --------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True, eq=False)
class CoordinateSubspace:
    indices: tuple
    label: str = ""


@dataclass(frozen=True, eq=False)
class HalfLine:
    start: int = 0
    label: str = ""


@dataclass(frozen=True, eq=False)
class BasisSubspace:
    basis: np.ndarray = field(repr=False)
    label: str = ""


@dataclass(frozen=True, eq=False)
class SumSubspace:
    """One subspace per summand of a direct sum."""

    parts: tuple
    label: str = ""


@dataclass(frozen=True, eq=False)
class InducedPair:
    restriction: Operator
    quotient: Operator
    basis: Optional[np.ndarray] = field(default=None, repr=False)


# --------------------------------------------------------------------------
# spec documents -> values


def _complex(x, path):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(x[0], x[1])
    raise ValidationError(path, f"expected a number or an [re, im] pair, got {x!r}")


def parse_matrix(doc, path, square=True):
    """Row-major nested arrays of ``[re, im]`` pairs (plain numbers accepted)."""
    if not isinstance(doc, list) or not doc or not all(isinstance(r, list) for r in doc):
        raise ValidationError(path, "expected a non-empty list of rows")
    width = len(doc[0])
    rows = []
    for i, row in enumerate(doc):
        if len(row) != width:
            raise ValidationError(f"{path}[{i}]", f"row has {len(row)} entries, expected {width}")
        rows.append([_complex(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    M = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise ValidationError(path, "entries must be finite")
    if square and M.shape[0] != M.shape[1]:
        raise ValidationError(path, f"matrix must be square, got {M.shape[0]}x{M.shape[1]}")
    return M


def parse_symbol(doc, path="symbol"):
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise ValidationError(path, "expected an object with 'coeffs'")
    coeffs = {}
    raw = doc["coeffs"]
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}.coeffs", "expected an object mapping index -> [re, im]")
    for key, val in raw.items():
        try:
            m = int(key)
        except (TypeError, ValueError):
            raise ValidationError(f"{path}.coeffs", f"index {key!r} is not an integer") from None
        coeffs[m] = _complex(val, f"{path}.coeffs.{key}")
    d = doc.get("multiplicity", 1)
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValidationError(f"{path}.multiplicity", "must be a positive integer")
    return Symbol(coeffs, d)


def build_operator(spec, path="operator"):
    """Validate an operator spec document and build the operator value."""
    if not isinstance(spec, dict):
        raise ValidationError(path, "expected an object")
    variant = spec.get("variant")
    label = spec.get("label", "")
    if not isinstance(label, str):
        raise ValidationError(f"{path}.label", "must be a string")
    if variant == "finite":
        if "matrix" not in spec:
            raise ValidationError(f"{path}.matrix", "missing")
        return FiniteOperator(parse_matrix(spec["matrix"], f"{path}.matrix"), label)
    if variant in ("laurent", "toeplitz"):
        if "symbol" not in spec:
            raise ValidationError(f"{path}.symbol", "missing")
        sym = parse_symbol(spec["symbol"], f"{path}.symbol")
        cls = LaurentOperator if variant == "laurent" else ToeplitzOperator
        return cls(sym, label)
    if variant == "direct_sum":
        parts = spec.get("parts")
        if not isinstance(parts, list) or not parts:
            raise ValidationError(f"{path}.parts", "expected a non-empty list")
        return DirectSum(tuple(build_operator(p, f"{path}.parts[{i}]") for i, p in enumerate(parts)), label)
    if variant == "block_triangular":
        diag = spec.get("diag")
        if not isinstance(diag, list) or not diag:
            raise ValidationError(f"{path}.diag", "expected a non-empty list")
        blocks = tuple(build_operator(p, f"{path}.diag[{i}]") for i, p in enumerate(diag))
        couplings = []
        for i, cp in enumerate(spec.get("coupling", [])):
            cpath = f"{path}.coupling[{i}]"
            if not isinstance(cp, dict):
                raise ValidationError(cpath, "expected an object")
            r, c = cp.get("row"), cp.get("col")
            if not (isinstance(r, int) and isinstance(c, int) and 0 <= r < c < len(blocks)):
                raise ValidationError(cpath, "need integer block indices with row < col")
            mat = parse_matrix(cp.get("matrix"), f"{cpath}.matrix", square=False)
            for side, blk, n in (("rows", blocks[r], mat.shape[0]), ("cols", blocks[c], mat.shape[1])):
                M = dense_matrix(blk)
                if M is not None and n > M.shape[0]:
                    raise ValidationError(f"{cpath}.matrix", f"too many {side} for block of size {M.shape[0]}")
            couplings.append(Coupling(r, c, mat))
        return BlockTriangular(blocks, tuple(couplings), label)
    raise ValidationError(f"{path}.variant", f"unknown operator variant {variant!r}")


def build_subspace(spec, path="subspace"):
    if not isinstance(spec, dict):
        raise ValidationError(path, "expected an object")
    variant = spec.get("variant")
    label = spec.get("label", "")
    if variant == "coordinate":
        idx = spec.get("indices")
        if not isinstance(idx, list) or not all(isinstance(i, int) and i >= 0 for i in idx):
            raise ValidationError(f"{path}.indices", "expected a list of nonnegative integers")
        if len(set(idx)) != len(idx):
            raise ValidationError(f"{path}.indices", "indices must be distinct")
        return CoordinateSubspace(tuple(sorted(idx)), label)
    if variant == "halfline":
        start = spec.get("start", 0)
        if not isinstance(start, int) or start < 0:
            raise ValidationError(f"{path}.start", "must be a nonnegative integer")
        return HalfLine(start, label)
    if variant == "basis":
        return BasisSubspace(parse_matrix(spec.get("matrix"), f"{path}.matrix", square=False), label)
    if variant == "sum":
        parts = spec.get("parts")
        if not isinstance(parts, list) or not parts:
            raise ValidationError(f"{path}.parts", "expected a non-empty list")
        return SumSubspace(tuple(build_subspace(p, f"{path}.parts[{i}]") for i, p in enumerate(parts)), label)
    raise ValidationError(f"{path}.variant", f"unknown subspace variant {variant!r}")


def _matrix_doc(M):
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(M, complex)]


def symbol_doc(a):
    return {
        "coeffs": {str(m): [c.real, c.imag] for m, c in a.coeffs.items()},
        "multiplicity": a.multiplicity,
    }


def operator_doc(T):
    """Inverse of :func:`build_operator`."""
    doc = {}
    if isinstance(T, FiniteOperator):
        doc = {"variant": "finite", "matrix": _matrix_doc(T.matrix)}
    elif isinstance(T, LaurentOperator):
        doc = {"variant": "laurent", "symbol": symbol_doc(T.symbol)}
    elif isinstance(T, ToeplitzOperator):
        doc = {"variant": "toeplitz", "symbol": symbol_doc(T.symbol)}
    elif isinstance(T, DirectSum):
        doc = {"variant": "direct_sum", "parts": [operator_doc(p) for p in T.parts]}
    elif isinstance(T, BlockTriangular):
        doc = {
            "variant": "block_triangular",
            "diag": [operator_doc(p) for p in T.diag],
            "coupling": [{"row": c.row, "col": c.col, "matrix": _matrix_doc(c.matrix)} for c in T.coupling],
        }
    if T.label:
        doc["label"] = T.label
    return doc


def subspace_doc(F):
    if isinstance(F, CoordinateSubspace):
        doc = {"variant": "coordinate", "indices": list(F.indices)}
    elif isinstance(F, HalfLine):
        doc = {"variant": "halfline", "start": F.start}
    elif isinstance(F, BasisSubspace):
        doc = {"variant": "basis", "matrix": _matrix_doc(F.basis)}
    else:
        doc = {"variant": "sum", "parts": [subspace_doc(p) for p in F.parts]}
    if F.label:
        doc["label"] = F.label
    return doc


# --------------------------------------------------------------------------
# invariance and the induced operators


def subspace_basis(F, n):
    """Full-column-rank basis matrix of a finite-dimensional subspace."""
    if isinstance(F, CoordinateSubspace):
        if any(i >= n for i in F.indices):
            raise ShapeError(f"coordinate index out of range for dimension {n}")
        return np.eye(n, dtype=complex)[:, list(F.indices)]
    if isinstance(F, BasisSubspace):
        V = np.asarray(F.basis, complex)
        if V.shape[0] != n:
            raise ShapeError(f"basis has {V.shape[0]} rows, host dimension is {n}")
        if V.shape[1] > 0:
            s = np.linalg.svd(V, compute_uv=False)
            if s[-1] <= 1e-10 * s[0] or V.shape[1] > n:
                raise BasisError("basis matrix is numerically rank deficient")
        return V
    raise ShapeError(f"{type(F).__name__} does not describe a subspace of a finite space")


def complement_basis(F, V):
    """Orthonormal completion W so that [V | W] is a basis of the host space."""
    n, k = V.shape
    if isinstance(F, CoordinateSubspace):
        rest = [i for i in range(n) if i not in set(F.indices)]
        return np.eye(n, dtype=complex)[:, rest]
    Q, _ = np.linalg.qr(V, mode="complete")
    return Q[:, k:]


def _orthonormal(V):
    if V.shape[1] == 0:
        return V
    Q, _ = np.linalg.qr(V)
    return Q


def _norm2(M):
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def _toeplitz_corner_defect(a, start):
    """Norm of the block rows < start, cols >= start of T(a)."""
    if start == 0 or a.is_analytic:
        return 0.0
    lo = min(a.coeffs)
    B = np.zeros((start, -lo), complex)
    for j in range(start):
        for q in range(-lo):
            m = j - (start + q)
            B[j, q] = a.coefficient(m)
    return _norm2(B)


def invariance_defect(T, F):
    """``||Q_F T i_F||``: zero exactly when ``T`` maps ``F`` into itself."""
    if isinstance(F, SumSubspace):
        if not isinstance(T, DirectSum) or len(T.parts) != len(F.parts):
            raise ShapeError("a per-summand subspace needs a direct sum with matching parts")
        return max(invariance_defect(p, f) for p, f in zip(T.parts, F.parts))
    if isinstance(F, HalfLine):
        if isinstance(T, LaurentOperator):
            neg = [abs(c) for m, c in T.symbol.coeffs.items() if m < 0]
            return float(np.sqrt(np.sum(np.square(neg)))) if neg else 0.0
        if isinstance(T, ToeplitzOperator):
            return _toeplitz_corner_defect(T.symbol, F.start)
        if isinstance(T, DirectSum):
            return max(invariance_defect(p, F) for p in T.parts)
        if isinstance(T, BlockTriangular) and all(isinstance(p, SYMBOL_TYPES) for p in T.diag):
            # a coupling sits in the top-left corner, so only its entries from
            # columns >= start into rows < start leave the half line
            parts = [invariance_defect(p, F) for p in T.diag]
            parts += [_norm2(cp.matrix[:F.start, F.start:]) for cp in T.coupling]
            return max(parts)
        raise ShapeError(f"a half line is not a subspace of the host of {type(T).__name__}")
    M = dense_matrix(T)
    if M is None:
        raise ShapeError(f"{type(F).__name__} needs a finite-dimensional host")
    n = M.shape[0]
    if isinstance(F, CoordinateSubspace):
        subspace_basis(F, n)
        rest = [i for i in range(n) if i not in set(F.indices)]
        return _norm2(M[np.ix_(rest, list(F.indices))])
    Q = _orthonormal(subspace_basis(F, n))
    return _norm2(M @ Q - Q @ (Q.conj().T @ (M @ Q)))


def induce(T, F, tol=DEFAULT_TOL):
    """Restriction ``T|F`` and quotient ``T/F`` of an operator leaving ``F`` invariant."""
    defect = invariance_defect(T, F)
    if defect > tol:
        raise NotInvariantError(defect, tol)
    if isinstance(F, SumSubspace):
        pairs = [induce(p, f, tol) for p, f in zip(T.parts, F.parts)]
        return InducedPair(DirectSum(tuple(p.restriction for p in pairs)),
                           DirectSum(tuple(p.quotient for p in pairs)))
    if isinstance(F, HalfLine):
        if isinstance(T, DirectSum):
            return induce(T, SumSubspace(tuple(F for _ in T.parts)), tol)
        a = T.symbol
        if isinstance(T, LaurentOperator):
            # compression to indices < start, reindexed by m = start-1-j
            return InducedPair(ToeplitzOperator(a, "restriction"), ToeplitzOperator(a.reflect(), "quotient"))
        quotient = finite_section(T, F.start) if F.start > 0 else FiniteOperator(np.zeros((0, 0)))
        return InducedPair(ToeplitzOperator(a, "restriction"), quotient)
    M = dense_matrix(T)
    n = M.shape[0]
    V = subspace_basis(F, n)
    W = complement_basis(F, V)
    U = np.hstack([V, W])
    k = V.shape[1]
    if isinstance(F, CoordinateSubspace):
        A = U.conj().T @ M @ U  # U is a permutation matrix
    else:
        A = np.linalg.solve(U, M @ U)
    lower = _norm2(A[k:, :k])
    cond = np.linalg.cond(U) if n else 1.0
    if lower > 10 * tol * cond + 10 * np.finfo(float).eps * (1 + _norm2(M)) * cond:
        raise NotInvariantError(lower, tol)
    return InducedPair(FiniteOperator(A[:k, :k], "restriction"), FiniteOperator(A[k:, k:], "quotient"), U)


def finite_section(T, n):
    """The n x n section with entries ``c_{j-k}`` (tensored with the fiber identity)."""
    if not isinstance(T, SYMBOL_TYPES):
        raise UnsupportedError("finite sections are defined for Laurent and Toeplitz operators")
    a = T.symbol
    if n < 2 * a.bandwidth + 1:
        raise InvalidParameterError(f"section size {n} below 2*bandwidth+1 = {2 * a.bandwidth + 1}")
    j = np.arange(n)
    diff = j[:, None] - j[None, :]
    S = np.zeros((n, n), complex)
    for m, c in a.coeffs.items():
        S[diff == m] = c
    if a.multiplicity > 1:
        S = np.kron(S, np.eye(a.multiplicity))
    return FiniteOperator(S, f"section{n}")


@dataclass(frozen=True)
class SweepRow:
    multiplicity: int
    kernel_dim: int
    cokernel_defect: int


def _small_singular_count(M, rel=1e-8):
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return min(M.shape)
    return int(np.sum(s < rel * s[0]))


def defect_dimension_sweep(d_list, n=16, lam=0.0, symbol=None):
    """Kernel and cokernel dimensions of ``lam - T(a) ⊗ I_d`` seen through sections.

    The sections are rectangular: every column is a basis vector among the
    first ``n`` and every row that vector can reach is kept, so no
    truncation artifact enters.  Kernel vectors are read off ``lam - T``,
    cokernel vectors off the adjoint.
    """
    if n < 4:
        raise InvalidParameterError("section size must be at least 4")
    a = Symbol({1: 1.0}) if symbol is None else symbol
    b = a.bandwidth
    rows = np.arange(n + b)[:, None]
    cols = np.arange(n)[None, :]
    fwd = np.zeros((n + b, n), complex)
    adj = np.zeros((n + b, n), complex)
    for m, c in a.coeffs.items():
        fwd[rows - cols == m] += c
        adj[cols - rows == m] += np.conj(c)  # (T*)_{jk} = conj(c_{k-j})
    eye = np.eye(n + b, n)
    out = []
    for d in d_list:
        if int(d) != d or d < 1:
            raise InvalidParameterError(f"multiplicity {d!r} must be a positive integer")
        I = np.eye(int(d))
        ker = _small_singular_count(np.kron(lam * eye - fwd, I))
        coker = _small_singular_count(np.kron(np.conj(lam) * eye - adj, I))
        out.append(SweepRow(int(d), ker, coker))
    return out
