from fractions import Fraction

import numpy as np
import numpy.testing as npt
import pytest

from src.calculus import (
    LabeledMatrix,
    hessian_at,
    ift_invertibility_check,
    jacobian_at,
    select_square_submatrix,
)
from src.errors import DuplicateName, NotSquare, UnknownVariable, WrongCount
from src.funcfile.parser import parse_function_file
from src.funcfile.polynomial import VectorField
from src.linalg.eigen import eigenvalues
from src.linalg.matrix import Matrix
from tests.conftest import PUBLISHED_MATRIX
from tests.helpers import match_spectra, random_polynomial, random_quadratic_field, variable_names


def test_jacobian_orientation(university_field, record_2011):
    jac = jacobian_at(university_field, record_2011)
    assert jac.row_labels == ("f1", "f2", "f3")
    assert jac.col_labels == ("x1", "x2", "x3", "x4", "x5")
    assert jac.entry("f1", "x1") == 3600.0
    assert jac.entry("f2", "x1") == pytest.approx(5.82, rel=1e-12)
    assert jac.entry("f3", "x5") == 7500.0


def test_nine_published_partials(university_field, record_2011):
    square = select_square_submatrix(jacobian_at(university_field, record_2011), ["x1", "x2", "x3"])
    npt.assert_allclose(square.data.to_array().T, PUBLISHED_MATRIX, rtol=1e-12)


def test_transpose_flag_gives_variable_major_listing(university_field, record_2011):
    jac = jacobian_at(university_field, record_2011)
    listed = jacobian_at(university_field, record_2011, transpose=True)
    assert listed.row_labels == jac.col_labels
    assert listed == jac.transpose()


def test_submatrix_keeps_requested_order(university_field, record_2011):
    jac = jacobian_at(university_field, record_2011)
    square = select_square_submatrix(jac, ["x3", "x1", "x2"])
    assert square.col_labels == ("x3", "x1", "x2")
    assert square.entry("f1", "x3") == 6400.0


@pytest.mark.parametrize(
    "variables, error",
    [
        (["x1", "x2"], WrongCount),
        (["x1", "x1", "x2"], DuplicateName),
        (["x1", "x2", "x9"], UnknownVariable),
    ],
)
def test_submatrix_errors(university_field, record_2011, variables, error):
    with pytest.raises(error):
        select_square_submatrix(jacobian_at(university_field, record_2011), variables)


def test_invertibility_of_published_block(university_field, record_2011):
    square = select_square_submatrix(jacobian_at(university_field, record_2011), ["x1", "x2", "x3"])
    invertible, det = ift_invertibility_check(square)
    assert invertible
    assert det == pytest.approx(-65301150547.2, rel=1e-9)


def test_invertibility_singular_and_shape():
    singular = LabeledMatrix(("f", "g"), ("x", "y"), Matrix.from_rows([[1, 2], [2, 4]]))
    assert ift_invertibility_check(singular) == (False, 0.0)
    with pytest.raises(NotSquare):
        ift_invertibility_check(LabeledMatrix(("f",), ("x", "y"), Matrix.from_rows([[1, 2]])))


@pytest.mark.parametrize("gap, expected", [(2e-12, True), (5e-13, False)])
def test_invertibility_threshold_uses_largest_entry_per_row(gap, expected):
    square = LabeledMatrix(("f", "g"), ("x", "y"), Matrix.from_rows([[1, 1], [1, 1 + gap]]))
    invertible, det = ift_invertibility_check(square, tol=1e-12)
    assert invertible is expected
    assert det == pytest.approx(gap, rel=1e-3)


def test_constant_field_has_zero_jacobian():
    field = parse_function_file("vars: a b\nf = 3\ng = 7")
    jac = jacobian_at(field, field.point({"a": 1, "b": 2}))
    assert not jac.data.to_array().any()
    assert ift_invertibility_check(jac)[0] is False


def test_hessian_is_symmetric_and_exact(university_field, record_2011):
    h = hessian_at(university_field.function("f2"), record_2011).to_array()
    npt.assert_array_equal(h, h.T)
    assert h[1, 1] == 2.0
    assert h[1, 2] == 4.0
    assert h[0, 4] == 6.0


def test_hessian_matches_jacobian_differences():
    field = parse_function_file("vars: x y z\nf = x^3*y - 2*y*z^2 + x*z + 1")
    poly = field.function("f")
    rng = np.random.default_rng(3)
    h = 1e-6
    for _ in range(20):
        x = rng.uniform(-2, 2, size=3)
        hess = hessian_at(poly, field.point(dict(zip(field.variables, x)))).to_array()
        for k in range(3):
            up, down = x.copy(), x.copy()
            up[k] += h
            down[k] -= h
            grad_up = jacobian_at(field, field.point(dict(zip(field.variables, up)))).data.to_array()[0]
            grad_down = jacobian_at(field, field.point(dict(zip(field.variables, down)))).data.to_array()[0]
            npt.assert_allclose((grad_up - grad_down) / (2 * h), hess[:, k], rtol=1e-5, atol=1e-5)


def test_hessian_of_university_f1(university_field, record_2011):
    expected = np.zeros((5, 5))
    expected[0, 0] = 2.0
    expected[0, 1] = expected[1, 0] = 2.0
    expected[2, 3] = expected[3, 2] = 4.0
    npt.assert_array_equal(hessian_at(university_field.function("f1"), record_2011).to_array(), expected)


def test_hessian_of_cube_and_constant():
    field = parse_function_file("vars: x\nf = x^3\ng = 9")
    point = field.point({"x": 2.0})
    assert hessian_at(field.function("f"), point).to_array().tolist() == [[12.0]]
    assert hessian_at(field.function("g"), point).to_array().tolist() == [[0.0]]


def test_linear_field_has_constant_jacobian():
    rng = np.random.default_rng(41)
    for _ in range(20):
        variables = variable_names(int(rng.integers(1, 5)))
        functions = tuple((f"f{j}", random_polynomial(rng, variables, max_degree=1)) for j in range(1, 4))
        field = VectorField(variables, functions)
        first = jacobian_at(field, field.point(dict(zip(variables, rng.uniform(-100, 100, len(variables))))))
        second = jacobian_at(field, field.point(dict(zip(variables, rng.uniform(-100, 100, len(variables))))))
        assert first == second


@pytest.mark.parametrize("factor", [Fraction(4), Fraction(-5, 2), Fraction(1, 3)])
def test_scaling_coefficients_scales_jacobian_and_spectrum(factor):
    rng = np.random.default_rng(2011)
    c = float(factor)
    for _ in range(20):
        field = random_quadratic_field(rng, 3, nfuncs=3)
        scaled = VectorField(field.variables, tuple((name, poly.scale(factor)) for name, poly in field.functions))
        point = field.point(dict(zip(field.variables, rng.uniform(-3, 3, 3))))
        jac = jacobian_at(field, point).data.to_array()
        scaled_jac = jacobian_at(scaled, point).data.to_array()
        npt.assert_allclose(scaled_jac, c * jac, rtol=1e-9, atol=1e-9 * np.abs(c * jac).max())

        spectrum = eigenvalues(Matrix(jac)).as_complex()
        scaled_spectrum = eigenvalues(Matrix(scaled_jac)).as_complex()
        scale = float(np.abs(scaled_jac).sum(axis=1).max())
        assert match_spectra(scaled_spectrum, [c * z for z in spectrum]) <= 1e-9 * scale
