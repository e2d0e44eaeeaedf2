import random
from fractions import Fraction

import pytest
import sympy

from conftest import random_matrices
from zariski_chambers.exactalg import (AsymmetricMatrixError, IntSymMatrix, InvalidArgumentError, MatrixFormatError,
                                       SingularMatrixError, bareiss_determinant, block_diagonal, det_exact,
                                       format_matrix_text, is_negative_definite, is_positive_definite,
                                       leading_principal_minors, make_index_set, parse_matrix_text,
                                       principal_submatrix, solve_exact)

A2 = [[-1, 0, 1], [0, -1, 1], [1, 1, -1]]


def cofactor_det(rows):
    if not rows:
        return 1
    return sum((-1) ** j * rows[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in rows[1:]])
               for j in range(len(rows)))


def descartes_positive_definite(rows):
    """All eigenvalues positive iff det(xI - A) has n sign changes."""
    x = sympy.Symbol('x')
    coefficients = [c for c in sympy.Matrix(rows).charpoly(x).all_coeffs() if c != 0]
    changes = sum(1 for a, b in zip(coefficients, coefficients[1:]) if a * b < 0)
    return changes == len(rows)


def test_rejects_asymmetric_matrix():
    with pytest.raises(AsymmetricMatrixError) as err:
        IntSymMatrix([[1, 2], [3, 1]])
    assert (err.value.i, err.value.j) == (1, 2)


@pytest.mark.parametrize('rows', [[], [[1, 2]], [[1, 0], [0]], [[True]], [[1.5]]])
def test_rejects_malformed_entries(rows):
    with pytest.raises(InvalidArgumentError):
        IntSymMatrix(rows)


def test_large_entries_use_python_ints():
    A = IntSymMatrix([[10 ** 30, 1], [1, 10 ** 30]])
    assert A.array.dtype == object
    assert det_exact(A) == 10 ** 60 - 1


def test_matrix_is_read_only():
    A = IntSymMatrix(A2)
    with pytest.raises(ValueError):
        A.array[0, 0] = 5


def test_determinant_of_two_point_blow_up():
    assert det_exact(IntSymMatrix(A2)) == 1


def test_determinant_needs_row_swap():
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[0, 0], [0, 1]]) == 0


def test_determinant_matches_cofactor_expansion():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert bareiss_determinant(rows) == cofactor_det(rows)


def test_leading_principal_minors():
    assert leading_principal_minors(IntSymMatrix([[2, 1], [1, 2]])) == [2, 3]
    assert leading_principal_minors(IntSymMatrix(A2)) == [-1, 1, 1]


@pytest.mark.parametrize('rows, expected', [
    ([[2, 1], [1, 2]], True),
    ([[1, 2], [2, 1]], False),
    ([[0]], False),
    ([[1, 1], [1, 1]], False),
    ([[1, 0, 0], [0, 1, 0], [0, 0, -1]], False),
])
def test_positive_definite(rows, expected):
    assert is_positive_definite(IntSymMatrix(rows)) is expected


def test_negative_definite():
    assert is_negative_definite(IntSymMatrix([[-1, 0], [0, -1]]))
    assert not is_negative_definite(IntSymMatrix(A2))
    assert not is_negative_definite(IntSymMatrix([[-1, 1], [1, -1]]))


def test_sylvester_agrees_with_descartes_sign_count():
    for A in random_matrices(60, 5, seed=11):
        assert is_positive_definite(A) == descartes_positive_definite(A.tolist())


def test_solve_exact():
    assert solve_exact(IntSymMatrix([[2, 1], [1, 3]]), [1, 2]) == [Fraction(1, 5), Fraction(3, 5)]


def test_solve_exact_with_pivoting():
    assert solve_exact(IntSymMatrix([[0, 1], [1, 0]]), [2, 3]) == [3, 2]


def test_solve_singular():
    with pytest.raises(SingularMatrixError):
        solve_exact(IntSymMatrix([[1, 1], [1, 1]]), [1, 2])


def test_make_index_set():
    assert make_index_set([3, 1, 3], 3) == (1, 3)


@pytest.mark.parametrize('values', [[], [0], [4], [True], [1.0]])
def test_make_index_set_rejects(values):
    with pytest.raises(InvalidArgumentError):
        make_index_set(values, 3)


def test_principal_submatrix():
    assert principal_submatrix(IntSymMatrix(A2), [3, 1]).tolist() == [[-1, 1], [1, -1]]


def test_block_diagonal():
    A = block_diagonal([[1]], [[0, -1], [-1, 0]])
    assert A.tolist() == [[1, 0, 0], [0, 0, -1], [0, -1, 0]]


def test_parse_matrix_text_with_comments():
    A = parse_matrix_text('# identity\n2\n1 0   # first row\n0 1\n')
    assert A.tolist() == [[1, 0], [0, 1]]


def test_format_then_parse():
    A = IntSymMatrix(A2)
    text = format_matrix_text(A, ['labels: E1 E2 C1_12'])
    assert text.splitlines()[:2] == ['# labels: E1 E2 C1_12', '3']
    assert parse_matrix_text(text) == A


@pytest.mark.parametrize('text, line, column', [
    ('2\n1 2\n3 1\n', 2, 3),
    ('2\n1 x\n0 1\n', 2, 3),
    ('2\n1 0\n0 1 7\n', 3, 5),
    ('', 1, 1),
])
def test_parse_matrix_text_diagnostics(text, line, column):
    with pytest.raises(MatrixFormatError) as err:
        parse_matrix_text(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_parse_matrix_text_too_few_entries():
    with pytest.raises(MatrixFormatError, match='expected 4 entries'):
        parse_matrix_text('2\n1 0 0\n')
