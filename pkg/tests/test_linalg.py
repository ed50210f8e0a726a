import numpy as np
import numpy.testing as npt
import pytest

from src.errors import (
    DimensionMismatch,
    DimensionTooLarge,
    MatrixFormatError,
    NonFiniteValue,
    NotSquare,
    SingularSystem,
)
from src.linalg.eigen import eigenvalues, hessenberg
from src.linalg.lu import determinant, solve_linear
from src.linalg.matrix import EigenSet, Matrix, matrix_to_csv, parse_matrix_csv
from src.linalg.oracle import char_poly_roots_oracle, characteristic_polynomial, cofactor_determinant
from tests.conftest import PUBLISHED_MATRIX
from tests.helpers import gershgorin_contains, match_spectra


@pytest.fixture
def published():
    return Matrix.from_rows(PUBLISHED_MATRIX)


def random_matrix(rng, n):
    return Matrix(rng.standard_normal((n, n)) * 10 ** rng.uniform(-1, 2))


def test_matrix_rejects_non_finite_entries():
    with pytest.raises(NonFiniteValue):
        Matrix.from_rows([[1.0, float("inf")]])


def test_matrix_csv_round_trip(published):
    assert parse_matrix_csv(matrix_to_csv(published)) == published


@pytest.mark.parametrize("text", ["", "1,2\n3", "1,x\n2,3"])
def test_matrix_csv_errors(text):
    with pytest.raises(MatrixFormatError):
        parse_matrix_csv(text)


def test_published_eigenvalues(published):
    spectrum = eigenvalues(published)
    assert len(spectrum) == 3
    assert all(v.im == 0.0 for v in spectrum)
    reals = [v.re for v in spectrum]
    for got, expected in zip(reals, [10610, 7600, -810]):
        assert got == pytest.approx(expected, rel=1e-3)
    assert spectrum.total().real == pytest.approx(17400, rel=1e-9)
    assert spectrum.product().real == pytest.approx(determinant(published), rel=1e-6)


def test_published_characteristic_polynomial(published):
    coeffs = characteristic_polynomial(published)
    assert coeffs[0] == 1.0
    assert coeffs[1] == pytest.approx(-17400, rel=1e-12)
    assert coeffs[3] == pytest.approx(-determinant(published), rel=1e-9)


def test_rotation_has_conjugate_pair():
    spectrum = eigenvalues(Matrix.from_rows([[0, -1], [1, 0]])).as_complex()
    assert match_spectra(spectrum, [1j, -1j]) <= 1e-12
    assert spectrum[0] == spectrum[1].conjugate()
    assert spectrum[0].imag > 0


def test_canonical_order_is_descending_real_then_imaginary():
    spectrum = EigenSet.from_complex([1 - 2j, 3, 1 + 2j, -4])
    assert spectrum.as_complex() == [3, 1 + 2j, 1 - 2j, -4]


def test_eigen_shape_errors():
    with pytest.raises(NotSquare):
        eigenvalues(Matrix.from_rows([[1, 2, 3], [4, 5, 6]]))
    with pytest.raises(DimensionTooLarge):
        eigenvalues(Matrix(np.eye(65)))


def test_diagonal_and_triangular():
    spectrum = eigenvalues(Matrix.from_rows([[2, 5, 1], [0, -3, 4], [0, 0, 7]]))
    npt.assert_allclose([v.re for v in spectrum], [7, 2, -3], atol=1e-12)


def test_hessenberg_keeps_spectrum():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((6, 6))
    h = hessenberg(a)
    npt.assert_allclose(np.tril(h, -2), 0, atol=1e-12)
    npt.assert_allclose(np.trace(h), np.trace(a), rtol=1e-12, atol=1e-12)


def test_gershgorin_containment_and_transpose_invariance():
    rng = np.random.default_rng(2011)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        m = random_matrix(rng, n)
        a = m.to_array()
        scale = float(np.abs(a).sum(axis=1).max())
        spectrum = eigenvalues(m).as_complex()
        for z in spectrum:
            assert gershgorin_contains(a, z, 1e-9 * scale)
        transposed = eigenvalues(m.transpose()).as_complex()
        assert match_spectra(transposed, spectrum) <= 1e-9 * scale


def test_trace_and_determinant_identities():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        m = random_matrix(rng, n)
        a = m.to_array()
        spectrum = eigenvalues(m)
        scale = float(np.abs(a).sum(axis=1).max())
        assert abs(spectrum.total() - np.trace(a)) <= 1e-9 * n * scale
        assert abs(spectrum.product() - determinant(m)) <= 1e-8 * scale ** n


def test_oracle_agreement():
    rng = np.random.default_rng(404)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        m = random_matrix(rng, n)
        scale = float(np.abs(m.to_array()).sum(axis=1).max())
        got = eigenvalues(m).as_complex()
        expected = char_poly_roots_oracle(m).as_complex()
        assert match_spectra(got, expected) <= 1e-6 * (1 + scale)


def test_oracle_dimension_limit():
    with pytest.raises(DimensionTooLarge):
        char_poly_roots_oracle(Matrix(np.eye(5)))


def test_determinant_matches_cofactor_expansion():
    rng = np.random.default_rng(77)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        m = random_matrix(rng, n)
        scale = float(np.prod(np.abs(m.data).sum(axis=1)))
        assert determinant(m) == pytest.approx(cofactor_determinant(m), rel=1e-9, abs=1e-12 * scale)


def test_determinant_of_singular_matrix_is_zero():
    assert determinant(Matrix.from_rows([[1, 2], [2, 4]])) == 0.0
    with pytest.raises(NotSquare):
        determinant(Matrix.from_rows([[1, 2]]))


def test_solve_square_system():
    a = Matrix.from_rows([[4, 1], [2, 3]])
    solution = solve_linear(a, [1, 2])
    npt.assert_allclose(solution.x, [0.1, 0.6], rtol=1e-12)
    assert solution.consistent and not solution.overdetermined


def test_solve_overdetermined_consistent_and_inconsistent():
    a = Matrix.from_rows([[1, 0], [0, 1], [1, 1]])
    consistent = solve_linear(a, [2, 3, 5])
    npt.assert_allclose(consistent.x, [2, 3], rtol=1e-12)
    assert consistent.consistent and consistent.overdetermined
    assert not solve_linear(a, [2, 3, 7]).consistent


def test_solve_errors():
    with pytest.raises(SingularSystem):
        solve_linear(Matrix.from_rows([[1, 2], [2, 4]]), [1, 2])
    with pytest.raises(DimensionMismatch):
        solve_linear(Matrix.from_rows([[1, 2]]), [1])
    with pytest.raises(DimensionMismatch):
        solve_linear(Matrix.from_rows([[1, 0], [0, 1]]), [1, 2, 3])
