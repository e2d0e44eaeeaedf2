"""Exact integer / rational linear algebra.

Nothing on a decision path goes through floating point: determinants use
fraction-free (Bareiss) elimination over Python integers and linear solves
use :class:`fractions.Fraction`.
"""
import logging
import re
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

logger = logging.getLogger('zariski_chambers')

IndexSet = Tuple[int, ...]

INT64_MAX = int(np.iinfo(np.int64).max)


class InvalidArgumentError(ValueError):
    pass


class AsymmetricMatrixError(InvalidArgumentError):
    def __init__(self, i: int, j: int, a_ij: int, a_ji: int):
        super().__init__(f'matrix is not symmetric: entry ({i}, {j}) = {a_ij} but ({j}, {i}) = {a_ji}')
        self.i = i
        self.j = j


class MatrixFormatError(InvalidArgumentError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f'line {line}, column {column}: {message}')
        self.line = line
        self.column = column


class SingularMatrixError(ArithmeticError):
    pass


def _as_int(value) -> int:
    if isinstance(value, (bool, np.bool_)):
        raise InvalidArgumentError(f'matrix entries must be integers, got {value!r}')
    if isinstance(value, (int, np.integer)):
        return int(value)
    raise InvalidArgumentError(f'matrix entries must be integers, got {value!r}')


class IntSymMatrix:
    """Square symmetric integer matrix.

    Entries are kept in a read-only numpy array, ``int64`` when every entry
    fits and ``object`` (Python ints) otherwise. Index sets are 1-based.
    """

    def __init__(self, entries):
        rows = [list(row) for row in entries]
        n = len(rows)
        if n < 1:
            raise InvalidArgumentError('matrix must have at least one row')
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InvalidArgumentError(f'row {i + 1} has {len(row)} entries, expected {n}')

        values = [[_as_int(value) for value in row] for row in rows]
        fits = all(abs(value) <= INT64_MAX for row in values for value in row)
        array = np.array(values, dtype=np.int64 if fits else object)

        mismatches = np.argwhere(array != array.T)
        if len(mismatches) > 0:
            i, j = (int(x) for x in mismatches[0])
            raise AsymmetricMatrixError(i + 1, j + 1, values[i][j], values[j][i])

        array.flags.writeable = False
        self._array = array

    @property
    def n(self) -> int:
        return self._array.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._array

    def tolist(self) -> List[List[int]]:
        return [[int(value) for value in row] for row in self._array.tolist()]

    def max_abs_entry(self) -> int:
        return max(abs(value) for row in self.tolist() for value in row)

    def __neg__(self) -> 'IntSymMatrix':
        return IntSymMatrix(-self._array)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntSymMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._array, other._array))

    __hash__ = None

    def __repr__(self) -> str:
        return f'IntSymMatrix({self.tolist()})'


def make_index_set(values: Iterable[int], n: int) -> IndexSet:
    """Validate 1-based indices against dimension ``n``; returns them sorted, without repeats."""
    indices = []
    for value in values:
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise InvalidArgumentError(f'index {value!r} is not an integer')
        if not 1 <= value <= n:
            raise InvalidArgumentError(f'index {value} out of range 1..{n}')
        indices.append(int(value))
    if not indices:
        raise InvalidArgumentError('index set must not be empty')
    return tuple(sorted(set(indices)))


def principal_submatrix(A: IntSymMatrix, S: Iterable[int]) -> IntSymMatrix:
    positions = [i - 1 for i in make_index_set(S, A.n)]
    return IntSymMatrix(A.array[np.ix_(positions, positions)])


def bareiss_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination with row swaps; every division is exact."""
    m = [list(row) for row in rows]
    n = len(m)
    sign = 1
    previous = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k, factor = m[i], m[k], m[i][k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
        previous = pivot
    return sign * m[n - 1][n - 1]


def det_exact(A: IntSymMatrix) -> int:
    return bareiss_determinant(A.tolist())


def leading_principal_minors(A: IntSymMatrix) -> List[int]:
    rows = A.tolist()
    return [bareiss_determinant([row[:k] for row in rows[:k]]) for k in range(1, A.n + 1)]


def rows_positive_definite(rows: Sequence[Sequence[int]]) -> bool:
    # without pivoting the k-th Bareiss pivot is the k-th leading minor
    m = [list(row) for row in rows]
    n = len(m)
    previous = 1
    for k in range(n):
        pivot = m[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, n):
            row_i, row_k, factor = m[i], m[k], m[i][k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
        previous = pivot
    return True


def is_positive_definite(A: IntSymMatrix) -> bool:
    """Sylvester's criterion; a zero minor counts as not definite."""
    return rows_positive_definite(A.tolist())


def is_negative_definite(A: IntSymMatrix) -> bool:
    return is_positive_definite(-A)


def solve_exact(S: IntSymMatrix, b: Sequence[int]) -> List[Fraction]:
    """Unique rational solution of ``S x = b`` by Gauss-Jordan over Fractions."""
    n = S.n
    if len(b) != n:
        raise InvalidArgumentError(f'right-hand side has {len(b)} entries, expected {n}')

    m = [[Fraction(value) for value in row] + [Fraction(rhs)] for row, rhs in zip(S.tolist(), b)]

    for col in range(n):
        pivot_row = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError('matrix is singular')
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]

        pivot = m[col][col]
        m[col] = [value / pivot for value in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [a - factor * p for a, p in zip(m[i], m[col])]

    return [row[n] for row in m]


def block_diagonal(*blocks: Sequence[Sequence[int]]) -> IntSymMatrix:
    size = sum(len(block) for block in blocks)
    rows = [[0] * size for _ in range(size)]
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            for j, value in enumerate(row):
                rows[offset + i][offset + j] = value
        offset += len(block)
    return IntSymMatrix(rows)


_TOKEN = re.compile(r'\S+')


def _tokens(text: str) -> Iterable[Tuple[str, int, int]]:
    for line_no, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0]
        for match in _TOKEN.finditer(content):
            yield match.group(), line_no, match.start() + 1


def parse_matrix_text(text: str) -> IntSymMatrix:
    """Read the shared matrix format: ``n`` followed by ``n*n`` integers, row-major.

    Whitespace separates tokens and ``#`` starts a comment running to the end
    of the line.
    """
    tokens = list(_tokens(text))
    if not tokens:
        raise MatrixFormatError('empty matrix file', 1, 1)

    def integer(token: Tuple[str, int, int]) -> int:
        value, line, column = token
        try:
            return int(value)
        except ValueError:
            raise MatrixFormatError(f'expected an integer, found {value!r}', line, column) from None

    n = integer(tokens[0])
    if n < 1:
        raise MatrixFormatError(f'dimension must be positive, found {n}', tokens[0][1], tokens[0][2])

    entries = tokens[1:]
    if len(entries) < n * n:
        last_line = text.count('\n') + 1
        raise MatrixFormatError(f'expected {n * n} entries, found {len(entries)}', last_line, 1)
    if len(entries) > n * n:
        _, line, column = entries[n * n]
        raise MatrixFormatError(f'unexpected extra entry after {n * n} entries', line, column)

    values = [integer(token) for token in entries]
    rows = [values[i * n:(i + 1) * n] for i in range(n)]
    try:
        return IntSymMatrix(rows)
    except AsymmetricMatrixError as err:
        _, line, column = entries[(err.i - 1) * n + (err.j - 1)]
        raise MatrixFormatError(str(err), line, column) from None


def format_matrix_text(A: IntSymMatrix, comments: Iterable[str] = ()) -> str:
    lines = [f'# {comment}' for comment in comments]
    lines.append(str(A.n))
    lines.extend(' '.join(str(value) for value in row) for row in A.tolist())
    return '\n'.join(lines) + '\n'
