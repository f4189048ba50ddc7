"""Trigonometric-polynomial symbols on the unit circle.

A symbol ``a(w) = sum_m c_m w**m`` generates the Laurent operator with
matrix entries ``L[j, k] = c_{j-k}``, so ``a(w) = w`` is the forward shift
``e_k -> e_{k+1}``.  The compression of ``L(a)`` to the half line is the
Toeplitz operator ``T(a)``; it maps the half line into itself exactly when
``a`` has no negative Fourier coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import AliasingError, InvalidParameterError, OnCurveError, SingularResolventError

EPS_CURVE = 1e-9
MAX_NODES = 2**22


@dataclass(frozen=True, eq=False)
class Symbol:
    """Finitely supported coefficient map acting on ``multiplicity`` fibers."""

    coeffs: Mapping[int, complex]
    multiplicity: int = 1

    def __post_init__(self):
        clean = {}
        for m, c in dict(self.coeffs).items():
            if int(m) != m:
                raise InvalidParameterError(f"symbol index {m!r} is not an integer")
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise InvalidParameterError(f"coefficient at {m} is not finite")
            if c != 0:
                clean[int(m)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise InvalidParameterError("multiplicity must be a positive integer")
        object.__setattr__(self, "multiplicity", int(self.multiplicity))

    @classmethod
    def from_list(cls, values, start=0, multiplicity=1):
        """Coefficients ``values[k]`` placed at index ``start + k``."""
        return cls({start + k: v for k, v in enumerate(values)}, multiplicity)

    def __eq__(self, other):
        if not isinstance(other, Symbol):
            return NotImplemented
        return self.coeffs == other.coeffs and self.multiplicity == other.multiplicity

    def __hash__(self):
        return hash((tuple(self.coeffs.items()), self.multiplicity))

    def __repr__(self):
        terms = " + ".join(f"({c:.4g})w^{m}" for m, c in self.coeffs.items()) or "0"
        tail = f", multiplicity={self.multiplicity}" if self.multiplicity > 1 else ""
        return f"Symbol({terms}{tail})"

    @property
    def bandwidth(self):
        return max((abs(m) for m in self.coeffs), default=0)

    @property
    def is_analytic(self):
        return all(m >= 0 for m in self.coeffs)

    def coefficient(self, m):
        return self.coeffs.get(m, 0j)

    def l1_norm(self):
        return sum(abs(c) for c in self.coeffs.values())

    def derivative_bound(self):
        """Upper bound for |d/dθ a(e^{iθ})|."""
        return sum(abs(m) * abs(c) for m, c in self.coeffs.items())

    def reflect(self):
        """The symbol w -> a(1/w)."""
        return Symbol({-m: c for m, c in self.coeffs.items()}, self.multiplicity)

    def shifted(self, lam):
        """The symbol a - lam."""
        c = dict(self.coeffs)
        c[0] = c.get(0, 0j) - lam
        return Symbol(c, self.multiplicity)

    def with_multiplicity(self, d):
        return Symbol(self.coeffs, d)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros_like(w)
        for m, c in self.coeffs.items():
            out = out + c * w**m
        return out


@dataclass(frozen=True, eq=False)
class CircleSampling:
    """Values of a function at the N-th roots of unity ``exp(2πik/N)``."""

    node_count: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).reshape(-1)
        if vals.size != self.node_count:
            raise InvalidParameterError("values must have node_count entries")
        object.__setattr__(self, "values", vals)

    @property
    def nodes(self):
        return np.exp(2j * np.pi * np.arange(self.node_count) / self.node_count)


def _is_pow2(n):
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def next_pow2(n):
    return 1 << max(int(n) - 1, 0).bit_length()


def eval_symbol(a, N):
    """Sample ``a`` at the N-th roots of unity (N a power of two)."""
    if not _is_pow2(N):
        raise InvalidParameterError(f"node count must be a power of two, got {N}")
    if N < 2 * a.bandwidth + 2:
        raise AliasingError(f"{N} nodes cannot resolve bandwidth {a.bandwidth}")
    buf = np.zeros(N, complex)
    for m, c in a.coeffs.items():
        buf[m % N] += c
    return CircleSampling(N, N * np.fft.ifft(buf))


def fourier_coefficients(s, window):
    """Discrete Fourier coefficients ``c_m`` for ``m`` in the inclusive window."""
    lo, hi = window
    N = s.node_count
    if lo > hi:
        raise InvalidParameterError("empty window")
    if max(abs(lo), abs(hi)) > N // 2:
        raise AliasingError(f"window {window} exceeds the Nyquist range of {N} nodes")
    c = np.fft.fft(s.values) / N
    return {m: complex(c[m % N]) for m in range(lo, hi + 1)}


def winding_number(a, lam, eps=EPS_CURVE, min_nodes=64):
    """Number of counterclockwise turns of ``a(e^{iθ}) - lam``.

    The sampling is refined until every argument increment is below π/2,
    at which point the summed increments are exact.
    """
    lam = complex(lam)
    N = next_pow2(max(min_nodes, 2 * a.bandwidth + 2))
    while N <= MAX_NODES:
        vals = eval_symbol(a, N).values - lam
        if np.abs(vals).min() < eps:
            raise OnCurveError(f"{lam} lies within {eps:g} of the symbol curve")
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.abs(steps).max() < np.pi / 2:
            return int(round(steps.sum() / (2 * np.pi)))
        N *= 2
    raise OnCurveError(f"winding around {lam} not resolved with {MAX_NODES} nodes")


def resolvent_symbol(a, z, N, eps=EPS_CURVE):
    """Samples of ``1/(z - a)``, the symbol of the Laurent resolvent."""
    vals = z - eval_symbol(a, N).values
    gap = np.abs(vals).min()
    if gap < eps:
        raise SingularResolventError(f"z = {z} lies on the symbol curve", 1.0 / max(gap, 1e-300))
    return CircleSampling(N, 1.0 / vals)


def resolvent_coefficients(a, z, tol=1e-15, eps=EPS_CURVE, min_nodes=256):
    """Fourier coefficients of ``1/(z - a)`` over ``[-N/2+1, N/2-1]``.

    ``N`` is doubled until the coefficients near the Nyquist index have
    decayed below ``tol`` relative to the largest one, so aliasing does not
    leak into the returned window.
    """
    N = next_pow2(max(min_nodes, 4 * a.bandwidth + 4))
    while True:
        s = resolvent_symbol(a, z, N, eps)
        c = np.fft.fft(s.values) / N
        mag = np.abs(c)
        q = N // 8
        tail = mag[N // 2 - q:N // 2 + q + 1].max()
        if tail <= tol * max(mag.max(), 1e-300) or N >= MAX_NODES:
            break
        N *= 2
    return {m: complex(c[m % N]) for m in range(-N // 2 + 1, N // 2)}


def negative_part_norm(coeffs):
    """l2 norm of the coefficients at negative indices."""
    return math.sqrt(sum(abs(c) ** 2 for m, c in coeffs.items() if m < 0))
