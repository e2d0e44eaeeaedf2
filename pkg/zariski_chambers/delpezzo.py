"""Negative curves on the blow-up X_r of the plane in r <= 8 general points.

Classes are written in the basis (H, E_1, ..., E_r) as ``d H - sum m_i E_i``
and stored as the coordinates (d; m_1, ..., m_r). The intersection form is
H^2 = 1, E_i^2 = -1, everything else 0.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from .exactalg import IndexSet, IntSymMatrix, InvalidArgumentError, format_matrix_text

logger = logging.getLogger('zariski_chambers')

MAX_POINTS = 8
FAMILIES = ('E', 'C1', 'C2', 'C3', 'C4', 'C5', 'C6')
N_CURVES = {1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
DEGREE_BOUNDS = {1: 2, 2: 2, 3: 2, 4: 2, 5: 2, 6: 2, 7: 3, 8: 6}

Number = Union[int, Fraction]


class ModelConsistencyError(RuntimeError):
    pass


def check_r(r: int) -> int:
    if isinstance(r, bool) or not isinstance(r, int) or not 1 <= r <= MAX_POINTS:
        raise InvalidArgumentError(f'number of blown-up points must be in 1..{MAX_POINTS}, got {r!r}')
    return r


def _format_coefficient(value: Number) -> str:
    value = Fraction(value)
    if value == 1:
        return ''
    if value.denominator == 1:
        return str(value.numerator)
    return f'({value.numerator}/{value.denominator})'


@dataclass(frozen=True)
class DivisorClass:
    r: int
    d: Number
    m: Tuple[Number, ...]

    def __post_init__(self):
        if len(self.m) != self.r:
            raise InvalidArgumentError(f'expected {self.r} multiplicities, got {len(self.m)}')

    @property
    def coordinates(self) -> Tuple[Number, ...]:
        return (self.d, *self.m)

    def _check_same_surface(self, other: 'DivisorClass') -> None:
        if self.r != other.r:
            raise InvalidArgumentError(f'classes live on different surfaces (r = {self.r} and r = {other.r})')

    def __add__(self, other: 'DivisorClass') -> 'DivisorClass':
        self._check_same_surface(other)
        return DivisorClass(self.r, self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def scaled(self, factor: Number) -> 'DivisorClass':
        return DivisorClass(self.r, factor * self.d, tuple(factor * value for value in self.m))

    def __str__(self) -> str:
        terms = []
        if self.d != 0:
            terms.append(('-' if self.d < 0 else '+', f'{_format_coefficient(abs(self.d))}H'))
        for i, value in enumerate(self.m, start=1):
            if value != 0:
                # the class is d H - sum m_i E_i
                terms.append(('-' if value > 0 else '+', f'{_format_coefficient(abs(value))}E{i}'))
        if not terms:
            return '0'
        sign, first = terms[0]
        text = first if sign == '+' else f'-{first}'
        for sign, term in terms[1:]:
            text += f' {sign} {term}'
        return text


@dataclass(frozen=True)
class CurveClass(DivisorClass):
    family: str = 'E'
    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        super().__post_init__()
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f'unknown curve family {self.family!r}')
        if self.d * self.d - sum(value * value for value in self.m) != -1:
            raise InvalidArgumentError(f'{self.label} does not have self-intersection -1')
        if 3 * self.d - sum(self.m) != 1:
            raise InvalidArgumentError(f'{self.label} does not have anticanonical degree 1')
        if self.family == 'E':
            if self.d != 0 or sorted(self.m) != [-1] + [0] * (self.r - 1):
                raise InvalidArgumentError(f'{self.label} is not an exceptional class')
        elif self.d < 1 or min(self.m) < 0:
            raise InvalidArgumentError(f'{self.label} must have d >= 1 and nonnegative multiplicities')

    @property
    def label(self) -> str:
        if self.family == 'C3' and len(self.indices) == 2:
            return f'C3_{self.indices[0]}_{self.indices[1]}'
        if not self.indices:
            return self.family
        if self.family == 'E':
            return f'E{self.indices[0]}'
        return f'{self.family}_{"".join(str(i) for i in self.indices)}'

    def __str__(self) -> str:
        return self.label


def exceptional(r: int, i: int) -> CurveClass:
    return CurveClass(r, 0, tuple(-1 if k == i else 0 for k in range(1, r + 1)), 'E', (i,))


def _curve(r: int, d: int, m: Sequence[int], family: str, indices: Tuple[int, ...]) -> CurveClass:
    return CurveClass(r, d, tuple(m), family, indices)


def _with(r: int, base: int, changes: Dict[int, int]) -> List[int]:
    return [base + changes.get(k, 0) for k in range(1, r + 1)]


def generate_curves(r: int) -> List[CurveClass]:
    """The negative curves of X_r in listing order, indices lexicographic within a family."""
    check_r(r)
    points = range(1, r + 1)
    curves = [exceptional(r, i) for i in points]

    # lines through two points: H - E_i - E_j
    curves += [_curve(r, 1, _with(r, 0, {i: 1, j: 1}), 'C1', (i, j)) for i, j in combinations(points, 2)]

    if r >= 5:
        # conics through five points: 2H - E + sum of the r - 5 omitted E_i
        curves += [_curve(r, 2, _with(r, 1, {i: -1 for i in omitted}), 'C2', omitted)
                   for omitted in combinations(points, r - 5)]
    if r == 7:
        curves += [_curve(r, 3, _with(r, 1, {i: 1}), 'C3', (i,)) for i in points]
    if r == 8:
        curves += [_curve(r, 3, _with(r, 1, {i: 1, j: -1}), 'C3', (i, j)) for i, j in permutations(points, 2)]
        curves += [_curve(r, 4, _with(r, 1, {i: 1 for i in triple}), 'C4', triple)
                   for triple in combinations(points, 3)]
        curves += [_curve(r, 5, _with(r, 2, {i: -1 for i in pair_}), 'C5', pair_)
                   for pair_ in combinations(points, 2)]
        curves += [_curve(r, 6, _with(r, 2, {i: 1}), 'C6', (i,)) for i in points]

    return curves


def pair(c1: DivisorClass, c2: DivisorClass) -> Number:
    c1._check_same_surface(c2)
    return c1.d * c2.d - sum(a * b for a, b in zip(c1.m, c2.m))


def anticanonical(r: int) -> DivisorClass:
    check_r(r)
    return DivisorClass(r, 3, (1,) * r)


def star(a: Sequence[int], b: Sequence[int]) -> int:
    """Signed overlap of two index tuples: sum of sign(x) sign(y) over entries with |x| = |y|."""
    for value in (*a, *b):
        if value == 0:
            raise InvalidArgumentError('index tuples must not contain 0')
    return sum((1 if x > 0 else -1) * (1 if y > 0 else -1) for x in a for y in b if abs(x) == abs(y))


def _flip_second(t: Tuple[int, ...]) -> Tuple[int, ...]:
    return (t[0], -t[1])


def _flip_first(t: Tuple[int, ...]) -> Tuple[int, ...]:
    return (-t[0], t[1])


Formula = Callable[[Tuple[int, ...], Tuple[int, ...]], int]

# intersection numbers on X_8 in terms of the family indices
CLOSED_FORMS: Dict[Tuple[str, str], Formula] = {
    ('E', 'E'): lambda a, b: star((-a[0],), b),
    ('E', 'C1'): lambda a, b: star(a, b),
    ('E', 'C2'): lambda a, b: 1 - star(a, b),
    ('E', 'C3'): lambda a, b: 1 + star(a, _flip_second(b)),
    ('E', 'C4'): lambda a, b: 1 + star(a, b),
    ('E', 'C5'): lambda a, b: 2 - star(a, b),
    ('E', 'C6'): lambda a, b: 2 + star(a, b),
    ('C1', 'C1'): lambda a, b: 1 - star(a, b),
    ('C1', 'C2'): lambda a, b: star(a, b),
    ('C1', 'C3'): lambda a, b: 1 + star(a, _flip_first(b)),
    ('C1', 'C4'): lambda a, b: 2 - star(a, b),
    ('C1', 'C5'): lambda a, b: 1 + star(a, b),
    ('C1', 'C6'): lambda a, b: 2 - star(a, b),
    ('C2', 'C2'): lambda a, b: 2 - star(a, b),
    ('C2', 'C3'): lambda a, b: 1 + star(a, _flip_second(b)),
    ('C2', 'C4'): lambda a, b: star(a, b),
    ('C2', 'C5'): lambda a, b: 2 - star(a, b),
    ('C2', 'C6'): lambda a, b: 1 + star(a, b),
    ('C3', 'C3'): lambda a, b: 1 + star(_flip_first(a), _flip_second(b)),
    ('C3', 'C4'): lambda a, b: 1 + star(_flip_first(a), b),
    ('C3', 'C5'): lambda a, b: 1 + star(_flip_second(a), b),
    ('C3', 'C6'): lambda a, b: 1 + star(_flip_first(a), b),
    ('C4', 'C4'): lambda a, b: 2 - star(a, b),
    ('C4', 'C5'): lambda a, b: star(a, b),
    ('C4', 'C6'): lambda a, b: 1 - star(a, b),
    ('C5', 'C5'): lambda a, b: 1 - star(a, b),
    ('C5', 'C6'): lambda a, b: star(a, b),
    ('C6', 'C6'): lambda a, b: star((-a[0],), b),
}


def closed_form_entry(c1: CurveClass, c2: CurveClass) -> int:
    if c1.r != MAX_POINTS or c2.r != MAX_POINTS:
        raise InvalidArgumentError('closed forms are stated on X_8 only')
    formula = CLOSED_FORMS.get((c1.family, c2.family))
    if formula is not None:
        return formula(c1.indices, c2.indices)
    formula = CLOSED_FORMS.get((c2.family, c1.family))
    if formula is not None:
        return formula(c2.indices, c1.indices)
    raise RuntimeError(f'no closed form for {c1.family} . {c2.family}')


def degree_bound(r: int) -> int:
    return DEGREE_BOUNDS[check_r(r)]


def cauchy_schwarz_degree_bound(r: int) -> int:
    """Largest d with (3d - 1)^2 <= r (d^2 + 1); one above degree_bound for r = 8."""
    check_r(r)
    d = 0
    while (3 * (d + 1) - 1) ** 2 <= r * ((d + 1) ** 2 + 1):
        d += 1
    return d


def _multiplicities(slots: int, total: int, squares: int, cap: int) -> Iterator[Tuple[int, ...]]:
    if slots == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    if total < 0 or squares < 0 or total > slots * cap or total * total > slots * squares or squares > cap * total:
        return
    for value in range(min(cap, total) + 1):
        for rest in _multiplicities(slots - 1, total - value, squares - value * value, cap):
            yield (value,) + rest


def classify_class(r: int, d: int, m: Sequence[int]) -> CurveClass:
    """Family tag and indices of a (-1)-class vector."""
    m = tuple(m)
    where = lambda value: tuple(i for i, x in enumerate(m, start=1) if x == value)  # noqa: E731
    if d == 0:
        return CurveClass(r, 0, m, 'E', where(-1))
    if d == 1:
        return CurveClass(r, 1, m, 'C1', where(1))
    if d == 2:
        return CurveClass(r, 2, m, 'C2', where(0))
    if d == 3 and r == 7:
        return CurveClass(r, 3, m, 'C3', where(2))
    if d == 3 and r == 8:
        return CurveClass(r, 3, m, 'C3', where(2) + where(0))
    if d == 4:
        return CurveClass(r, 4, m, 'C4', where(2))
    if d == 5:
        return CurveClass(r, 5, m, 'C5', where(1))
    if d == 6:
        return CurveClass(r, 6, m, 'C6', where(3))
    raise InvalidArgumentError(f'no curve family of degree {d} on X_{r}')


def diophantine_solutions(r: int, d: int) -> List[Tuple[int, ...]]:
    """All 0 <= m_i <= d with d^2 - sum m_i^2 = -1 and 3d - sum m_i = 1."""
    return list(_multiplicities(r, 3 * d - 1, d * d + 1, d))


def diophantine_classes(r: int) -> List[CurveClass]:
    """Negative curves found by exhaustive search, independent of generate_curves."""
    check_r(r)
    classes = [exceptional(r, i) for i in range(1, r + 1)]
    for d in range(1, degree_bound(r) + 1):
        classes += [classify_class(r, d, m) for m in diophantine_solutions(r, d)]
    return classes


@dataclass(frozen=True)
class SurfaceModel:
    r: int
    curves: Tuple[CurveClass, ...]
    matrix: IntSymMatrix

    @property
    def labels(self) -> List[str]:
        return [curve.label for curve in self.curves]

    def index_of(self, label: str) -> int:
        for index, curve in enumerate(self.curves, start=1):
            if curve.label == label:
                return index
        raise InvalidArgumentError(f'no curve labelled {label!r} on X_{self.r}')

    def curve(self, index: int) -> CurveClass:
        if not 1 <= index <= len(self.curves):
            raise InvalidArgumentError(f'curve index {index} out of range 1..{len(self.curves)}')
        return self.curves[index - 1]

    def support_labels(self, support: IndexSet) -> List[str]:
        return [self.curves[i - 1].label for i in support]

    def to_text(self) -> str:
        comments = [f'X_{self.r}: intersection matrix of {len(self.curves)} negative curves',
                    'labels: ' + ' '.join(self.labels)]
        return format_matrix_text(self.matrix, comments)

    def sidecar_text(self) -> str:
        return '\n'.join(self.labels) + '\n'


def _pairing_matrix(r: int, curves: Sequence[DivisorClass]) -> np.ndarray:
    vectors = np.array([curve.coordinates for curve in curves], dtype=np.int64)
    form = np.diag([1] + [-1] * r)
    return vectors @ form @ vectors.T


def embedding_indices(r: int) -> IndexSet:
    """1-based rows of A_8 belonging to the curves of X_r, in X_r order."""
    check_r(r)
    positions = {curve.coordinates: i for i, curve in enumerate(generate_curves(MAX_POINTS), start=1)}
    padding = (0,) * (MAX_POINTS - r)
    try:
        return tuple(positions[curve.coordinates + padding] for curve in generate_curves(r))
    except KeyError as err:
        raise ModelConsistencyError(f'class {err} of X_{r} has no counterpart on X_8') from None


@lru_cache(maxsize=None)
def intersection_matrix(r: int) -> SurfaceModel:
    check_r(r)
    curves = tuple(generate_curves(r))
    matrix = IntSymMatrix(_pairing_matrix(r, curves))
    if len(curves) != N_CURVES[r]:
        raise ModelConsistencyError(f'X_{r} has {len(curves)} curves, expected {N_CURVES[r]}')

    if r < MAX_POINTS:
        positions = [i - 1 for i in embedding_indices(r)]
        big = intersection_matrix(MAX_POINTS).matrix.array
        if not np.array_equal(big[np.ix_(positions, positions)], matrix.array):
            raise ModelConsistencyError(f'A_{r} is not the principal submatrix of A_8 on the classes of X_{r}')

    logger.debug('Built intersection matrix of X_%s with %s curves', r, len(curves))
    return SurfaceModel(r, curves, matrix)
