import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essspec.corpus import projection_case
from essspec.errors import (
    ContourCollisionError,
    InvalidParameterError,
    PrecisionError,
    SingularResolventError,
)
from essspec.operators import FiniteOperator
from essspec.projections import (
    cluster,
    contour_projection,
    default_radius,
    rank_vs_fredholm_check,
    resolvent_apply,
)


def test_resolvent_of_diagonal():
    R = resolvent_apply(np.diag([1.0, 2.0]), 3.0)
    np.testing.assert_allclose(R, np.diag([0.5, 1.0]))


def test_resolvent_at_eigenvalue():
    with pytest.raises(SingularResolventError) as err:
        resolvent_apply(np.diag([1.0, 2.0]), 1.0)
    assert err.value.condition > 1e12 or not np.isfinite(err.value.condition)


def test_diagonal_projection():
    rep = contour_projection(np.diag([0.0, 1.0]), 0.0, radius=0.5)
    np.testing.assert_allclose(rep.matrix, np.diag([1.0, 0.0]), atol=1e-14)
    assert rep.rank == 1 and rep.trace_gap < 1e-14


def test_oblique_eigenprojection_matches_oracle():
    # eigenvectors (1,0) for 0 and (1,1) for 1: projection along (1,1) onto (1,0)
    M = np.array([[0.0, 1.0], [0.0, 1.0]])
    rep = contour_projection(M, 0.0, radius=0.5)
    np.testing.assert_allclose(rep.matrix, [[1, -1], [0, 0]], atol=1e-14)


def test_jordan_block_projection_is_identity():
    J = 2 * np.eye(3) + np.eye(3, k=1)
    rep = contour_projection(J, 2.0, radius=0.5)
    np.testing.assert_allclose(rep.matrix, np.eye(3), atol=1e-12)
    assert rep.rank == 3
    fred = rank_vs_fredholm_check(J, 2.0, radius=0.5)
    assert fred.consistent and fred.multiplicity == 3 and fred.dimension_drop == 3


def test_collision_and_parameter_errors():
    M = np.diag([0.0, 1.0])
    with pytest.raises(ContourCollisionError):
        contour_projection(M, 0.0, radius=1.0)
    with pytest.raises(InvalidParameterError):
        contour_projection(M, 0.0, radius=0.5, nodes=8)
    with pytest.raises(InvalidParameterError):
        contour_projection(M, 0.0, radius=-1.0)


def test_default_radius_and_cluster():
    ev = np.array([0.0, 1e-9, 2.0])
    assert cluster(ev, 0.0).tolist() == [True, True, False]
    assert default_radius(np.diag([0.0, 2.0, 3.0]), 0.0) == 1.0
    assert default_radius(FiniteOperator(np.eye(2)), 1.0) == 1.0


def test_report_document():
    d = contour_projection(np.diag([1j, 2.0]), 1j, radius=0.4).to_dict()
    assert d["lambda"] == [0.0, 1.0] and d["dimension"] == 2 and "matrix" not in d


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_matches_eigenprojection_oracle(seed):
    M, lam, P = projection_case(np.random.default_rng(seed))
    rep = contour_projection(M, lam)
    assert np.linalg.norm(rep.matrix - P, 2) <= 1e-8
    assert rep.idempotency_residual <= 1e-9 and rep.commutation_residual <= 1e-8


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_projections_at_all_eigenvalues_sum_to_identity(seed):
    rng = np.random.default_rng(seed)
    M, _, _ = projection_case(rng, n_max=6)
    ev = np.linalg.eigvals(M)
    total = sum(contour_projection(M, lam).matrix for lam in ev)
    np.testing.assert_allclose(total, np.eye(M.shape[0]), atol=1e-8)
    # distinct eigenprojections annihilate each other
    P0, P1 = contour_projection(M, ev[0]).matrix, contour_projection(M, ev[1]).matrix
    assert np.linalg.norm(P0 @ P1, 2) <= 1e-8


def test_quadrature_converges():
    rng = np.random.default_rng(11)
    M, lam, P = projection_case(rng, n_max=8)
    errs = [np.linalg.norm(contour_projection(M, lam, nodes=n).matrix - P, 2) for n in (32, 40, 48)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-11


def test_coarse_quadrature_is_flagged():
    rng = np.random.default_rng(11)
    M, lam, _ = projection_case(rng, n_max=8)
    with pytest.raises(PrecisionError):
        contour_projection(M, lam, nodes=16)
