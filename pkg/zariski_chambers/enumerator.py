"""Backtracking enumeration of positive definite principal submatrices.

The traversal visits index sets in the order ``<``: S < S' when both agree on
{1..l} and min(S minus {1..l}) < min(S' minus {1..l}) for some l, with
min of the empty set below everything. A candidate S is only tested when
S without its largest element is already known to be positive definite, so
one determinant sign decides each candidate.
"""
import asyncio
import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, NamedTuple, Optional, Set, Tuple

import numpy as np

from .enums import SearchEngine
from .exactalg import IndexSet, IntSymMatrix, InvalidArgumentError, bareiss_determinant, rows_positive_definite
from .helpers import chunks
from .ProgressBar import ProgressBar

logger = logging.getLogger('zariski_chambers')

BRUTE_FORCE_LIMIT = 20
INT64_SAFE_BITS = 62
SUBTREES_PER_WORKER = 4

Visitor = Callable[[IndexSet], None]


class MatrixTooLargeError(InvalidArgumentError):
    pass


@dataclass
class EnumerationStats:
    det_evaluations: int = 0
    sets_emitted: int = 0
    max_cardinality: int = 0
    # False when the counts were merged from independent subtrees
    ordered: bool = True


class PosdefCount(NamedTuple):
    count: int
    per_cardinality: Dict[int, int]
    stats: EnumerationStats


def int64_safe_depth(max_abs_entry: int, n: int) -> int:
    """Largest m such that a product of two m x m minors stays below 2**62.

    Minors are bounded with Hadamard's inequality, ``(alpha * sqrt(m)) ** m``.
    """
    alpha = max(max_abs_entry, 1)
    depth = 0
    while depth < n:
        m = depth + 1
        if 2 * m * math.log2(alpha * math.sqrt(m)) >= INT64_SAFE_BITS:
            break
        depth = m
    return depth


class PosdefEnumerator:
    """Depth-first search over index sets with exact fraction-free updates.

    For the current pivot sequence s_1 < ... < s_t (0-based) the buffers hold

      * ``_rows[k-1, c]`` = det A[{s_1..s_{k-1}, s_k}, {s_1..s_{k-1}, c}]
      * ``_diag[t, c]``   = det A[{s_1..s_t, c}, {s_1..s_t, c}]

    for columns c beyond the pivot that owns them. ``_diag[t, c]`` is the
    determinant tested for the candidate set {s_1..s_t, c}; pushing a new
    pivot costs one Bareiss step per earlier pivot, vectorised over columns.
    """

    def __init__(self, matrix: IntSymMatrix):
        self.matrix = matrix
        self.n = matrix.n
        wide = matrix.array.dtype == object
        self._safe_depth = 0 if wide else int64_safe_depth(matrix.max_abs_entry(), self.n)
        dtype = object if wide else np.int64
        self._entries = np.array(matrix.array, dtype=dtype)
        self._rows = np.zeros((self.n, self.n), dtype=dtype)
        self._diag = np.zeros((self.n + 1, self.n), dtype=dtype)
        self._reset(None)

    def _reset(self, visit: Optional[Visitor]) -> None:
        self._visit = visit
        self._pivots: List[int] = []
        self._minors: List[int] = [1]
        self._histogram = [0] * (self.n + 1)
        self._stats = EnumerationStats()
        self._diag[0] = self._entries.diagonal()

    def _widen(self) -> None:
        if self._rows.dtype != object:
            logger.debug('Pivot depth above %s, switching to unbounded integers', self._safe_depth)
            self._entries = self._entries.astype(object)
            self._rows = self._rows.astype(object)
            self._diag = self._diag.astype(object)

    def _emit(self) -> None:
        self._histogram[len(self._pivots)] += 1
        self._stats.sets_emitted += 1
        if self._visit is not None:
            self._visit(tuple(p + 1 for p in self._pivots))

    def _candidates(self, depth: int) -> List[int]:
        start = self._pivots[-1] + 1 if self._pivots else 0
        self._stats.det_evaluations += self.n - start
        if start >= self.n:
            return []
        positive = np.flatnonzero(self._diag[depth, start:] > 0)
        return (positive + start).tolist()

    def _push(self, depth: int, s: int) -> None:
        if depth + 1 > self._safe_depth:
            self._widen()
        tail = slice(s + 1, self.n)
        minors = self._minors

        row = self._rows[depth]
        row[tail] = self._entries[s, tail]
        for k in range(1, depth + 1):
            pivot_row = self._rows[k - 1]
            row[tail] = (minors[k] * row[tail] - pivot_row[s] * pivot_row[tail]) // minors[k - 1]

        new_minor = self._diag[depth, s]
        self._diag[depth + 1, tail] = (new_minor * self._diag[depth, tail] - row[tail] * row[tail]) // minors[depth]
        minors.append(int(new_minor))

    def _walk(self, base_depth: int) -> None:
        stack = [iter(self._candidates(base_depth))]
        while stack:
            depth = base_depth + len(stack) - 1
            j = next(stack[-1], None)
            if j is None:
                stack.pop()
                if stack:
                    self._pivots.pop()
                    self._minors.pop()
                continue

            self._pivots.append(j)
            self._emit()
            if j + 1 < self.n:
                self._push(depth, j)
                stack.append(iter(self._candidates(depth + 1)))
            else:
                self._pivots.pop()

    def _subtree(self, first: int) -> None:
        self._pivots.append(first)
        self._emit()
        if first + 1 < self.n:
            self._push(0, first)
            self._walk(1)
            self._minors.pop()
        self._pivots.pop()

    def _finish(self) -> EnumerationStats:
        self._stats.max_cardinality = max((size for size, count in enumerate(self._histogram) if count), default=0)
        return self._stats

    def histogram(self) -> Dict[int, int]:
        return {size: count for size, count in enumerate(self._histogram) if count}

    def first_elements(self) -> List[int]:
        """0-based indices i with a_ii > 0; ticks the n top-level determinant tests."""
        self._reset(None)
        return self._candidates(0)

    def run(self, visit: Optional[Visitor] = None, pbar: ProgressBar = None) -> EnumerationStats:
        self._reset(visit)
        firsts = self._candidates(0)
        pbar = pbar or ProgressBar()
        pbar.reset(max_value=len(firsts), message='Enumerating')
        with pbar:
            for first in firsts:
                self._subtree(first)
                pbar.increment()
                pbar.set_counts(emitted=self._stats.sets_emitted)
        return self._finish()

    def count_subtree(self, first: int) -> Tuple[Dict[int, int], EnumerationStats]:
        """Counts the sets whose smallest element is ``first`` (0-based)."""
        self._reset(None)
        if self._diag[0, first] > 0:
            self._subtree(first)
        return self.histogram(), self._finish()

    def run_literal(self, visit: Optional[Visitor] = None) -> EnumerationStats:
        """The backtracking loop statement by statement, determinants from scratch."""
        self._reset(visit)
        rows = self.matrix.tolist()
        n = self.n

        def submatrix(S: List[int]) -> List[List[int]]:
            return [[rows[i - 1][j - 1] for j in S] for i in S]

        k = 1
        S = [1]
        while S:
            assert k == S[-1] and rows_positive_definite(submatrix(S[:-1]))
            self._stats.det_evaluations += 1
            if bareiss_determinant(submatrix(S)) > 0:
                self._pivots = [i - 1 for i in S]
                self._emit()
            else:
                S.pop()
            assert (not S or k >= S[-1]) and rows_positive_definite(submatrix(S))
            if k < n:
                k += 1
                S.append(k)
            else:
                if S and S[-1] == k:
                    S.pop()
                if S:
                    k = S.pop() + 1
                    S.append(k)

        self._pivots = []
        return self._finish()


def enumerate_posdef(A: IntSymMatrix, visit: Optional[Visitor],
                     engine: SearchEngine = SearchEngine.INCREMENTAL,
                     pbar: ProgressBar = None) -> EnumerationStats:
    logger.debug('Enumerating positive definite principal submatrices of a %sx%s matrix (%s)',
                 A.n, A.n, engine.value)
    started = time.perf_counter()
    enumerator = PosdefEnumerator(A)
    if engine == SearchEngine.LITERAL:
        stats = enumerator.run_literal(visit)
    else:
        stats = enumerator.run(visit, pbar)
    logger.debug('Emitted %s sets after %s determinant tests in %.3fs',
                 stats.sets_emitted, stats.det_evaluations, time.perf_counter() - started)
    return stats


def _count_subtree(rows: List[List[int]], first: int) -> Tuple[Dict[int, int], EnumerationStats]:
    return PosdefEnumerator(IntSymMatrix(rows)).count_subtree(first)


async def _count_parallel(A: IntSymMatrix, threads: int,
                          pbar: ProgressBar) -> Tuple[Dict[int, int], EnumerationStats]:
    loop = asyncio.get_running_loop()
    firsts = PosdefEnumerator(A).first_elements()
    stats = EnumerationStats(det_evaluations=A.n, ordered=False)
    histogram = Counter()
    rows = A.tolist()

    logger.debug('Counting %s subtrees on %s worker processes', len(firsts), threads)
    pbar = pbar or ProgressBar()
    pbar.reset(max_value=len(firsts), message='Counting subtrees')
    with ProcessPoolExecutor(max_workers=threads) as pool, pbar:
        for chunk in chunks(firsts, threads * SUBTREES_PER_WORKER):
            tasks = [loop.run_in_executor(pool, _count_subtree, rows, first) for first in chunk]
            for task in tasks:
                sub_histogram, sub_stats = await task
                histogram.update(sub_histogram)
                stats.det_evaluations += sub_stats.det_evaluations
                stats.sets_emitted += sub_stats.sets_emitted
                pbar.increment()

    stats.max_cardinality = max(histogram, default=0)
    return dict(sorted(histogram.items())), stats


def count_posdef(A: IntSymMatrix, threads: int = 1,
                 engine: SearchEngine = SearchEngine.INCREMENTAL,
                 pbar: ProgressBar = None) -> PosdefCount:
    if threads > 1 and engine == SearchEngine.INCREMENTAL:
        per_cardinality, stats = asyncio.run(_count_parallel(A, threads, pbar))
    else:
        enumerator = PosdefEnumerator(A)
        stats = enumerator.run_literal() if engine == SearchEngine.LITERAL else enumerator.run(pbar=pbar)
        per_cardinality = enumerator.histogram()
    return PosdefCount(sum(per_cardinality.values()), per_cardinality, stats)


def brute_force_posdef(A: IntSymMatrix, limit: int = BRUTE_FORCE_LIMIT) -> Set[IndexSet]:
    """Tests every nonempty subset with Sylvester's criterion."""
    if A.n > limit:
        raise MatrixTooLargeError(f'brute force is limited to n <= {limit}, got n = {A.n}')
    rows = A.tolist()
    family = set()
    for size in range(1, A.n + 1):
        for subset in combinations(range(A.n), size):
            if rows_positive_definite([[rows[i][j] for j in subset] for i in subset]):
                family.add(tuple(i + 1 for i in subset))
    return family


def max_posdef_cardinality(A: IntSymMatrix) -> int:
    return count_posdef(A).stats.max_cardinality
