import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essspec.errors import InvalidParameterError, ShapeError
from essspec.operators import (
    BlockTriangular,
    Coupling,
    DirectSum,
    FiniteOperator,
    LaurentOperator,
    ToeplitzOperator,
)
from essspec.spectra import (
    eigenvalues,
    essential_spectral_radius,
    essential_spectrum,
    pseudospectrum_grid,
    smallest_singular_value,
    spectral_report,
    spectrum,
    symbol_curve,
)
from essspec.symbols import Symbol, winding_number

W = Symbol({1: 1.0})


def test_diagonal_eigenvalues():
    ev = eigenvalues(np.diag([1.0, 2.0, 3.0j]))
    np.testing.assert_allclose(np.sort_complex(ev), np.sort_complex([1, 2, 3j]))


def test_jordan_block_repeated_eigenvalue():
    ev = eigenvalues(np.eye(3, k=1) + 2 * np.eye(3))
    assert np.abs(ev - 2).max() < 1e-5  # perturbation of a defective eigenvalue is cube-root sized


def test_companion_of_z3_minus_1():
    C = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], complex)
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    ev = eigenvalues(C)
    assert max(np.abs(roots - e).min() for e in ev) < 1e-12
    assert max(np.abs(ev - r).min() for r in roots) < 1e-12


def test_eigenvalues_shape_errors():
    with pytest.raises(ShapeError):
        eigenvalues(np.ones((2, 3)))
    assert eigenvalues(np.zeros((0, 0))).size == 0


@pytest.mark.parametrize("n", [5, 50, 200])
def test_backward_residual(n):
    rng = np.random.default_rng(n)
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    norm = np.linalg.norm(M, 2)
    ev = eigenvalues(M)
    assert ev.size == n
    worst = max(smallest_singular_value(M, z) for z in ev[:: max(1, n // 20)])
    assert worst <= 1e-8 * norm


def test_laurent_essential_equals_spectrum():
    T = LaurentOperator(Symbol({1: 1.0, -1: 0.5}))
    s, e = spectrum(T, nodes=256), essential_spectrum(T, nodes=256)
    np.testing.assert_array_equal(s.points, e.points)
    # ellipse with semi-axes 1.5 and 0.5
    theta = 2 * np.pi * np.arange(256) / 256
    np.testing.assert_allclose(e.points, 1.5 * np.cos(theta) + 0.5j * np.sin(theta), atol=1e-13)


def test_shift_curve_is_unit_circle():
    e = essential_spectrum(LaurentOperator(W), nodes=256)
    assert np.abs(np.abs(e.points) - 1).max() <= 1e-10
    assert e.kind == "exact-curve" and e.resolution == pytest.approx(math.pi / 256)


def test_toeplitz_shift_spectrum_is_disk():
    cs = 0.02
    S = spectrum(ToeplitzOperator(W), cell_size=cs)
    assert S.kind == "region-raster"
    # the filled cells plus the curve cover the disk: compare against the winding oracle
    rng = np.random.default_rng(0)
    probes = rng.uniform(-1.3, 1.3, 300) + 1j * rng.uniform(-1.3, 1.3, 300)
    probes = probes[np.abs(np.abs(probes) - 1) > 3 * cs]
    near = np.abs(probes[:, None] - S.points[None, :]).min(axis=1) <= cs
    oracle = np.array([winding_number(W, z) != 0 for z in probes])
    np.testing.assert_array_equal(near, oracle)


def test_toeplitz_region_follows_winding():
    a = Symbol({0: 3.0, 1: 1.0})
    S = spectrum(ToeplitzOperator(a))
    assert S.kind == "region-raster"  # the curve bounds the disk |z - 3| < 1
    assert np.abs(S.points - 3).max() <= 1 + 1e-9
    b = Symbol({1: 1.0, -1: 1.0})  # segment [-2, 2], winds nowhere
    assert spectrum(ToeplitzOperator(b)).kind == "exact-curve"


def test_direct_sum_radius():
    T = DirectSum((LaurentOperator(W), LaurentOperator(Symbol({1: 2.0}))))
    assert essential_spectral_radius(T) == pytest.approx(2.0, abs=1e-12)


def test_essential_radius_of_ellipse_symbol():
    assert essential_spectral_radius(LaurentOperator(Symbol({1: 1.0, -1: 0.5}))) == pytest.approx(1.5, abs=1e-12)


def test_finite_convention():
    rep = spectral_report(FiniteOperator(np.diag([1.0, 2.0])))
    assert rep.essential.is_empty and rep.essential_radius == 0.0
    assert rep.method == "eigensolver"


def test_block_triangular_with_symbol_blocks_is_upper_bound():
    T = BlockTriangular((LaurentOperator(W), FiniteOperator([[3.0]])), (Coupling(0, 1, np.ones((1, 1))),))
    assert not spectrum(T).exact and not essential_spectrum(T).exact
    uncoupled = BlockTriangular((LaurentOperator(W), FiniteOperator([[3.0]])))
    assert spectrum(uncoupled).exact


def test_pseudospectrum_of_normal_matrix_is_distance():
    M = np.diag([0.0, 1.0])
    xs, ys, smin = pseudospectrum_grid(M, -1 - 1j, 2 + 1j, 0.5)
    Z = xs[None, :] + 1j * ys[:, None]
    dist = np.minimum(np.abs(Z), np.abs(Z - 1))
    np.testing.assert_allclose(smin, dist, atol=1e-12)
    assert smin.shape == (5, 7)


def test_pseudospectrum_of_jordan_block_is_tiny_near_zero():
    J = np.eye(12, k=1)
    _, _, smin = pseudospectrum_grid(J, -0.5, 0.5, 0.5)
    assert smin[0, 1] == 0.0 or smin[0, 1] < 1e-15
    assert smin[0, 2] <= 0.5**12 * 1.1


def test_pseudospectrum_limits():
    with pytest.raises(InvalidParameterError):
        pseudospectrum_grid(np.eye(1), 0, 1, 0.0)
    with pytest.raises(InvalidParameterError):
        pseudospectrum_grid(np.eye(1), 0, 10 + 10j, 0.001)


symbols = st.dictionaries(
    st.integers(-5, 5), st.tuples(st.floats(-1, 1), st.floats(-1, 1)).map(lambda t: complex(*t)),
    min_size=1, max_size=5,
).map(Symbol)


@settings(max_examples=40, deadline=None)
@given(symbols)
def test_curve_resolution_bound_holds(a):
    # any point of the continuous curve lies within the declared resolution of a sample
    c = symbol_curve(a, resolution=0.01)
    theta = np.linspace(0, 2 * np.pi, 5001)
    dense = np.array([a(np.exp(1j * t)) for t in theta])
    gap = np.abs(dense[:, None] - c.points[None, :]).min(axis=1).max()
    assert gap <= c.resolution + 1e-12
