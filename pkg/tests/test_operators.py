import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essspec.errors import (
    BasisError,
    InvalidParameterError,
    NotInvariantError,
    ShapeError,
    UnsupportedError,
    ValidationError,
)
from essspec.operators import (
    BasisSubspace,
    BlockTriangular,
    CoordinateSubspace,
    Coupling,
    DirectSum,
    FiniteOperator,
    HalfLine,
    LaurentOperator,
    SumSubspace,
    ToeplitzOperator,
    build_operator,
    build_subspace,
    defect_dimension_sweep,
    dense_matrix,
    finite_section,
    induce,
    invariance_defect,
    operator_doc,
)
from essspec.symbols import Symbol

W = Symbol({1: 1.0})


def upper(n, k, rng):
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    M[k:, :k] = 0
    return M


def test_build_finite_from_pairs_and_numbers():
    T = build_operator({"variant": "finite", "matrix": [[[1, 2], 0], [0, [0, -1]]]})
    np.testing.assert_array_equal(T.matrix, [[1 + 2j, 0], [0, -1j]])


def test_build_laurent():
    T = build_operator({"variant": "laurent", "symbol": {"coeffs": {"1": [1, 0]}}, "label": "shift"})
    assert isinstance(T, LaurentOperator) and T.symbol.coeffs == {1: 1.0} and T.label == "shift"


@pytest.mark.parametrize("spec, path", [
    ({"variant": "nope"}, "operator.variant"),
    ({"variant": "finite"}, "operator.matrix"),
    ({"variant": "finite", "matrix": [[1, 2]]}, "operator.matrix"),
    ({"variant": "laurent"}, "operator.symbol"),
    ({"variant": "direct_sum", "parts": []}, "operator.parts"),
    ({"variant": "direct_sum", "parts": [{"variant": "x"}]}, "operator.parts[0].variant"),
    ({"variant": "block_triangular", "diag": [{"variant": "finite", "matrix": [[1]]}] * 2,
      "coupling": [{"row": 1, "col": 0, "matrix": [[1]]}]}, "operator.coupling[0]"),
])
def test_build_errors_carry_paths(spec, path):
    with pytest.raises(ValidationError) as err:
        build_operator(spec)
    assert err.value.path.startswith(path)


@pytest.mark.parametrize("spec", [
    {"variant": "coordinate", "indices": [0, 0]},
    {"variant": "coordinate", "indices": [-1]},
    {"variant": "halfline", "start": -2},
    {"variant": "cone"},
])
def test_build_subspace_errors(spec):
    with pytest.raises(ValidationError):
        build_subspace(spec)


def test_operator_doc_round_trip():
    spec = {"variant": "block_triangular",
            "diag": [{"variant": "finite", "matrix": [[1, 2], [0, 3]]}, {"variant": "finite", "matrix": [[4]]}],
            "coupling": [{"row": 0, "col": 1, "matrix": [[5], [6]]}]}
    T = build_operator(spec)
    np.testing.assert_array_equal(dense_matrix(build_operator(operator_doc(T))), dense_matrix(T))
    np.testing.assert_array_equal(dense_matrix(T), [[1, 2, 5], [0, 3, 6], [0, 0, 4]])


@pytest.mark.parametrize("T, F, expected", [
    (LaurentOperator(W), HalfLine(0), 0.0),
    (LaurentOperator(Symbol({-1: 1.0})), HalfLine(0), 1.0),
    (LaurentOperator(Symbol({1: 1.0, -1: 0.5})), HalfLine(0), 0.5),
    (FiniteOperator(np.diag([1.0, 2.0])), CoordinateSubspace((0,)), 0.0),
    (FiniteOperator([[0, 0], [1, 0]]), CoordinateSubspace((0,)), 1.0),
    (FiniteOperator([[0, 1], [0, 0]]), CoordinateSubspace((0,)), 0.0),
])
def test_invariance_defect_examples(T, F, expected):
    assert invariance_defect(T, F) == pytest.approx(expected, abs=1e-15)


def test_toeplitz_halfline_defect():
    assert invariance_defect(ToeplitzOperator(W), HalfLine(3)) == 0.0
    assert invariance_defect(ToeplitzOperator(Symbol({-1: 1.0})), HalfLine(3)) == pytest.approx(1.0)


def test_induce_laurent_shift():
    pair = induce(LaurentOperator(W), HalfLine(0))
    assert isinstance(pair.restriction, ToeplitzOperator) and pair.restriction.symbol.coeffs == {1: 1.0}
    assert isinstance(pair.quotient, ToeplitzOperator) and pair.quotient.symbol.coeffs == {-1: 1.0}


def test_induce_refuses_non_invariant():
    with pytest.raises(NotInvariantError):
        induce(LaurentOperator(Symbol({1: 1.0, -1: 0.5})), HalfLine(0))
    with pytest.raises(NotInvariantError):
        induce(FiniteOperator([[0, 0], [1, 0]]), CoordinateSubspace((0,)))


def test_induce_random_block_triangular():
    rng = np.random.default_rng(3)
    M = upper(6, 2, rng)
    pair = induce(FiniteOperator(M), CoordinateSubspace((0, 1)))
    np.testing.assert_allclose(pair.restriction.matrix, M[:2, :2])
    np.testing.assert_allclose(pair.quotient.matrix, M[2:, 2:])


def test_induce_basis_subspace_matches_coordinate_after_change_of_basis():
    rng = np.random.default_rng(5)
    M = upper(5, 2, rng)
    S = np.eye(5) + 0.3 * np.triu(rng.normal(size=(5, 5)), 1)  # keeps the flag
    N = S @ M @ np.linalg.inv(S)
    pair = induce(FiniteOperator(N), BasisSubspace(S[:, :2]))
    ev = np.sort_complex(np.linalg.eigvals(pair.restriction.matrix))
    np.testing.assert_allclose(ev, np.sort_complex(np.linalg.eigvals(M[:2, :2])), atol=1e-10)
    ev = np.sort_complex(np.linalg.eigvals(pair.quotient.matrix))
    np.testing.assert_allclose(ev, np.sort_complex(np.linalg.eigvals(M[2:, 2:])), atol=1e-10)


def test_degenerate_basis_refused():
    with pytest.raises(BasisError):
        induce(FiniteOperator(np.eye(3)), BasisSubspace(np.array([[1, 1], [0, 0], [0, 0]], float)))


def test_direct_sum_with_per_summand_subspace():
    T = DirectSum((FiniteOperator([[1, 1], [0, 2]]), LaurentOperator(W)))
    F = SumSubspace((CoordinateSubspace((0,)), HalfLine(0)))
    pair = induce(T, F)
    assert isinstance(pair.restriction, DirectSum) and len(pair.restriction.parts) == 2
    np.testing.assert_allclose(pair.quotient.parts[0].matrix, [[2]])
    with pytest.raises(ShapeError):
        invariance_defect(FiniteOperator(np.eye(2)), SumSubspace((HalfLine(0),)))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**31 - 1), st.data())
def test_induction_is_multiplicative(n, seed, data):
    k = data.draw(st.integers(1, n - 1))
    rng = np.random.default_rng(seed)
    A, B = upper(n, k, rng), upper(n, k, rng)
    F = CoordinateSubspace(tuple(range(k)))
    pa, pb = induce(FiniteOperator(A), F), induce(FiniteOperator(B), F)
    pab = induce(FiniteOperator(A @ B), F)
    np.testing.assert_allclose(pab.restriction.matrix, pa.restriction.matrix @ pb.restriction.matrix, atol=1e-12)
    np.testing.assert_allclose(pab.quotient.matrix, pa.quotient.matrix @ pb.quotient.matrix, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_flag_composition(seed):
    # F1 in F2 both invariant: (T|F2)|F1 equals T|F1
    rng = np.random.default_rng(seed)
    M = upper(6, 4, rng)
    M[2:4, :2] = 0
    inner = induce(induce(FiniteOperator(M), CoordinateSubspace((0, 1, 2, 3))).restriction, CoordinateSubspace((0, 1)))
    direct = induce(FiniteOperator(M), CoordinateSubspace((0, 1)))
    np.testing.assert_allclose(inner.restriction.matrix, direct.restriction.matrix)


def test_finite_section_examples():
    S = finite_section(ToeplitzOperator(W), 4).matrix
    np.testing.assert_array_equal(S, np.eye(4, k=-1))
    S2 = finite_section(LaurentOperator(Symbol({1: 1.0}, multiplicity=2)), 3).matrix
    np.testing.assert_array_equal(S2, np.kron(np.eye(3, k=-1), np.eye(2)))
    with pytest.raises(InvalidParameterError):
        finite_section(ToeplitzOperator(Symbol({3: 1.0})), 5)
    with pytest.raises(UnsupportedError):
        finite_section(FiniteOperator(np.eye(2)), 2)


def test_block_triangular_assembly_matches_coupling():
    T = BlockTriangular((FiniteOperator(np.eye(2)), FiniteOperator(2 * np.eye(2))),
                        (Coupling(0, 1, np.ones((1, 1))),))
    np.testing.assert_array_equal(dense_matrix(T), [[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])


def test_multiplicity_sweep():
    rows = defect_dimension_sweep([1, 2, 4, 8], n=16, lam=0.0)
    assert [r.cokernel_defect for r in rows] == [1, 2, 4, 8]
    assert all(r.kernel_dim == 0 for r in rows)
    assert [r.cokernel_defect for r in defect_dimension_sweep([1, 4], lam=2.0)] == [0, 0]
    with pytest.raises(InvalidParameterError):
        defect_dimension_sweep([0])


def test_sweep_for_a_wider_symbol():
    rows = defect_dimension_sweep([1, 3], n=20, symbol=Symbol({2: 1.0}))
    assert [r.cokernel_defect for r in rows] == [2, 6]
