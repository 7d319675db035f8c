"""Consecutive pattern matching on fillings and minimal-overlap classification.

Patterns and texts are :class:`~minovl.fillings.Filling` objects at the API
boundary; the sweeps below work on flat sigma tuples, where the window of
``j`` columns starting at column ``i`` is ``sigma[i*k:(i+j)*k]``.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .fillings import (
    DEFAULT_MAX_CELLS,
    BudgetExceeded,
    Filling,
    PatternClass,
    first_column_shards,
    iter_sigmas,
    sigma_in_class,
)

__all__ = [
    "red",
    "reduce",
    "column_select",
    "MatchReport",
    "match_positions",
    "count_matches",
    "occurs",
    "OverlapProfile",
    "overlap_profile",
    "is_minimal",
    "is_minimal_oracle",
    "oracle_classification",
    "fast_classification",
    "count_minimal",
    "proportion",
    "class_cardinality",
    "PackingCount",
    "packing_sigmas",
    "max_packing_count",
    "packing_counts_by_sweep",
    "match_distribution",
    "cwilf_compare",
    "overlap4_updown_count",
    "syt_case_counts",
    "skew_syt_count",
    "minimal_mask",
]


def red(seq: Sequence[int]) -> tuple[int, ...]:
    """Replace the i-th smallest entry by i."""
    order = sorted(range(len(seq)), key=seq.__getitem__)
    out = [0] * len(seq)
    for rank, i in enumerate(order, 1):
        out[i] = rank
    return tuple(out)


def reduce(F: Filling) -> Filling:
    return Filling.from_sigma(red(F.sigma), F.k)


def column_select(F: Filling, cols: Sequence[int]) -> Filling:
    """Sub-filling of the given 1-based, strictly increasing columns (not reduced)."""
    cols = list(cols)
    if not cols:
        raise ValueError("select at least one column")
    if any(b <= a for a, b in zip(cols, cols[1:])):
        raise ValueError(f"column indices must be strictly increasing: {cols}")
    if cols[0] < 1 or cols[-1] > F.n:
        raise IndexError(f"columns {cols} out of range 1..{F.n}")
    return Filling(tuple(F.columns[c - 1] for c in cols))


def _window(sigma: Sequence[int], k: int, start: int, width: int) -> tuple[int, ...]:
    return red(sigma[start * k : (start + width) * k])


def _match_starts(sigma: Sequence[int], k: int, psig: tuple[int, ...], j: int) -> list[int]:
    n = len(sigma) // k
    return [i for i in range(n - j + 1) if _window(sigma, k, i, j) == psig]


def _check_pattern(P: Filling) -> tuple[int, ...]:
    psig = P.sigma
    if red(psig) != psig:
        raise ValueError("pattern must be reduced")
    return psig


@dataclass(frozen=True)
class MatchReport:
    pattern: Filling
    text: Filling
    match_positions: tuple[int, ...]
    occurrence_exists: bool

    @property
    def matches(self) -> int:
        return len(self.match_positions)


def occurs(text: Filling, P: Filling) -> bool:
    """Some j columns of ``text``, not necessarily adjacent, reduce to ``P``."""
    psig = _check_pattern(P)
    for cols in itertools.combinations(text.columns, P.n):
        if red([v for c in cols for v in c]) == psig:
            return True
    return False


def match_positions(text: Filling, P: Filling) -> MatchReport:
    """All 1-based columns where a P-match starts, plus the occurrence flag."""
    psig = _check_pattern(P)
    if P.k != text.k:
        raise ValueError("pattern and text must have the same number of rows")
    if P.n > text.n:
        raise ValueError("pattern wider than text")
    starts = tuple(i + 1 for i in _match_starts(text.sigma, text.k, psig, P.n))
    return MatchReport(P, text, starts, bool(starts) or occurs(text, P))


def count_matches(text: Filling, P: Filling) -> int:
    return len(_match_starts(text.sigma, text.k, _check_pattern(P), P.n))


# --- self-overlap and minimality --------------------------------------------


def _scan_limit(j: int) -> int:
    # integers i with 2 <= i < j/2 + 1
    return (j + 1) // 2


@dataclass(frozen=True)
class OverlapProfile:
    pattern: Filling
    self_overlap_positions: frozenset[int]
    is_minimal: bool


def _self_overlaps(psig: tuple[int, ...], k: int, j: int, upto: int) -> list[int]:
    return [
        i for i in range(2, upto + 1) if red(psig[: i * k]) == red(psig[(j - i) * k :])
    ]


def _require_member(P: Filling, cls: PatternClass) -> tuple[int, ...]:
    psig = _check_pattern(P)
    if P.n < 2:
        raise ValueError("patterns of width 1 are degenerate")
    if not sigma_in_class(psig, P.k, cls):
        raise ValueError(f"pattern {P} is not a member of class {cls.value}")
    return psig


def overlap_profile(P: Filling, cls: PatternClass = PatternClass.COLUMN_STRICT) -> OverlapProfile:
    psig = _require_member(P, cls)
    j, k = P.n, P.k
    overlaps = _self_overlaps(psig, k, j, j - 1)
    limit = _scan_limit(j)
    return OverlapProfile(P, frozenset(overlaps), not any(i <= limit for i in overlaps))


def is_minimal(P: Filling, cls: PatternClass = PatternClass.COLUMN_STRICT) -> bool:
    return overlap_profile(P, cls).is_minimal


def _sigma_is_minimal(psig: tuple[int, ...], k: int) -> bool:
    j = len(psig) // k
    for i in range(2, _scan_limit(j) + 1):
        if red(psig[: i * k]) == red(psig[(j - i) * k :]):
            return False
    return True


def oracle_classification(
    j: int, k: int, cls: PatternClass, max_cells: int = DEFAULT_MAX_CELLS
) -> dict[tuple[int, ...], bool]:
    """Minimality of every class pattern of width j, straight from the definition.

    A pattern is non-minimal exactly when some class member of width
    j+1..2j-2 carries two of its matches. One sweep over those texts settles
    every pattern at once.
    """
    if j < 2:
        raise ValueError("patterns of width 1 are degenerate")
    patterns = list(iter_sigmas(j, k, cls, max_cells))
    overlapping: set[tuple[int, ...]] = set()
    for w in range(j + 1, 2 * j - 1):
        for text in iter_sigmas(w, k, cls, max_cells):
            seen = Counter(_window(text, k, i, j) for i in range(w - j + 1))
            overlapping.update(p for p, c in seen.items() if c >= 2)
    return {p: p not in overlapping for p in patterns}


def is_minimal_oracle(
    P: Filling, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = DEFAULT_MAX_CELLS
) -> bool:
    psig = _require_member(P, cls)
    j, k = P.n, P.k
    for w in range(j + 1, 2 * j - 1):
        for text in iter_sigmas(w, k, cls, max_cells):
            if len(_match_starts(text, k, psig, j)) >= 2:
                return False
    return True


def fast_classification(
    j: int, k: int, cls: PatternClass, max_cells: int = DEFAULT_MAX_CELLS
) -> dict[tuple[int, ...], bool]:
    if j < 2:
        raise ValueError("patterns of width 1 are degenerate")
    return {p: _sigma_is_minimal(p, k) for p in iter_sigmas(j, k, cls, max_cells)}


def count_minimal(
    n: int,
    k: int,
    cls: PatternClass = PatternClass.COLUMN_STRICT,
    max_cells: int = DEFAULT_MAX_CELLS,
    workers: int = 1,
) -> int:
    """M_{n,k}, STM_{n,k} or CM_{n,k} by classifying every class member.

    With ``workers > 1`` the members are split by first column across processes.
    """
    if n < 2:
        raise ValueError("patterns of width 1 are degenerate")
    if workers > 1:
        shards = first_column_shards(n, k, cls)
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_count_minimal_shard, *zip(*[(n, k, cls, max_cells, s) for s in shards]))
            return sum(parts)
    return sum(1 for s in iter_sigmas(n, k, cls, max_cells) if _sigma_is_minimal(s, k))


def _count_minimal_shard(n, k, cls, max_cells, first) -> int:
    return sum(
        1 for s in iter_sigmas(n, k, cls, max_cells, first_column=first) if _sigma_is_minimal(s, k)
    )


def class_cardinality(n: int, k: int, cls: PatternClass) -> int:
    from . import formulas

    if cls is PatternClass.COLUMN_STRICT:
        return formulas.count_F(n, k)
    if cls is PatternClass.STANDARD_RECT:
        return formulas.count_syt_rect(n, k)
    return formulas.count_kupdown(k, n)


def proportion(
    n: int, k: int, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = DEFAULT_MAX_CELLS
):
    """a_{n,k}, b_{n,k} or c_{n,k} as an exact fraction."""
    return Fraction(count_minimal(n, k, cls, max_cells), class_cardinality(n, k, cls))


def minimal_mask(sigmas: np.ndarray, k: int) -> np.ndarray:
    """Vectorized minimality test for a (samples, n*k) array of sigmas.

    Two blocks reduce to the same filling exactly when their rank vectors agree.
    """
    size, m = sigmas.shape
    j = m // k
    overlapping = np.zeros(size, dtype=bool)
    for i in range(2, _scan_limit(j) + 1):
        head = np.argsort(np.argsort(sigmas[:, : i * k], axis=1), axis=1)
        tail = np.argsort(np.argsort(sigmas[:, (j - i) * k :], axis=1), axis=1)
        overlapping |= (head == tail).all(axis=1)
    return ~overlapping


# --- maximum packings ---------------------------------------------------------


@dataclass(frozen=True)
class PackingCount:
    pattern: Filling
    n_matches: int
    cls: PatternClass
    width: int
    count: int


def packing_sigmas(
    P: Filling, n_matches: int, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = 24
) -> Iterator[tuple[int, ...]]:
    """Maximum packings of a minimal pattern: class members of width
    n(j-1)+1 with P-matches at columns 1, j, 2j-1, ...

    Built column by column; each window is checked as soon as its last
    column is placed.
    """
    psig = _require_member(P, cls)
    j, k = P.n, P.k
    if n_matches < 1:
        raise ValueError("n_matches must be positive")
    width = n_matches * (j - 1) + 1
    if width * k > max_cells:
        raise BudgetExceeded(f"packing width {width} x {k} exceeds budget {max_cells}")
    # window m covers columns m(j-1) .. m(j-1)+j-1, so it completes at column (m+1)(j-1)
    checkpoints = {(m + 1) * (j - 1): m * (j - 1) for m in range(n_matches)}

    def grow(cols: list[tuple[int, ...]], remaining: tuple[int, ...]):
        c = len(cols)
        if c == width:
            yield tuple(v for col in cols for v in col)
            return
        for col in itertools.combinations(remaining, k):
            if cols and not _adjacent_ok(cols[-1], col, cls):
                continue
            cols.append(col)
            start = checkpoints.get(c)
            if start is None or red([v for cc in cols[start:] for v in cc]) == psig:
                rest = tuple(v for v in remaining if v not in col)
                yield from grow(cols, rest)
            cols.pop()

    yield from grow([], tuple(range(1, width * k + 1)))


def _adjacent_ok(prev, col, cls: PatternClass) -> bool:
    if cls is PatternClass.KUPDOWN:
        return prev[-1] > col[0]
    if cls is PatternClass.STANDARD_RECT:
        return all(a < b for a, b in zip(prev, col))
    return True


def max_packing_count(
    P: Filling, n_matches: int, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = 24
) -> PackingCount:
    if not is_minimal(P, cls):
        raise ValueError(f"pattern {P} is not minimal overlapping")
    width = n_matches * (P.n - 1) + 1
    count = sum(1 for _ in packing_sigmas(P, n_matches, cls, max_cells))
    return PackingCount(P, n_matches, cls, width, count)


def packing_counts_by_sweep(
    j: int, k: int, n_matches: int, cls: PatternClass = PatternClass.COLUMN_STRICT,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> dict[tuple[int, ...], int]:
    """Oracle: for every minimal class pattern of width j, the number of class
    members of width n(j-1)+1 with exactly n_matches of its matches."""
    width = n_matches * (j - 1) + 1
    minimal = {p for p, ok in fast_classification(j, k, cls, max_cells).items() if ok}
    counts = dict.fromkeys(minimal, 0)
    for text in iter_sigmas(width, k, cls, max_cells):
        first = _window(text, k, 0, j)
        if first in counts and len(_match_starts(text, k, first, j)) == n_matches:
            counts[first] += 1
    return counts


# --- distributions and c-Wilf comparison ----------------------------------------


def match_distribution(
    P: Filling, n: int, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = DEFAULT_MAX_CELLS
) -> list[int]:
    """Entry m counts class members of width n with exactly m P-matches."""
    psig = _check_pattern(P)
    k, j = P.k, P.n
    if n == 0:
        return [1]
    hist: Counter[int] = Counter()
    for text in iter_sigmas(n, k, cls, max_cells):
        hist[len(_match_starts(text, k, psig, j)) if n >= j else 0] += 1
    top = max(hist) if hist else 0
    return [hist.get(m, 0) for m in range(top + 1)]


def cwilf_compare(
    P: Filling,
    Q: Filling,
    cls: PatternClass = PatternClass.COLUMN_STRICT,
    max_n: int = 6,
    strong: bool = False,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> dict:
    """Compare avoidance counts (or whole match distributions) width by width."""
    if (P.k, P.n) != (Q.k, Q.n):
        raise ValueError("patterns must have the same shape")
    for n in range(1, max_n + 1):
        dp = match_distribution(P, n, cls, max_cells)
        dq = match_distribution(Q, n, cls, max_cells)
        if (dp != dq) if strong else (dp[0] != dq[0]):
            return {"verdict": "differs-at-n", "n": n, "P": dp, "Q": dq}
    return {"verdict": "equivalent-so-far", "n": max_n}


# --- upper-bound machinery ------------------------------------------------------


def overlap4_updown_count(n: int, max_cells: int = DEFAULT_MAX_CELLS) -> int:
    """Up-down permutations of length 2n whose first and last four entries
    reduce to the same pattern."""
    if n < 2:
        raise ValueError("need at least two columns")
    return sum(1 for s in iter_sigmas(n, 2, PatternClass.KUPDOWN, max_cells) if red(s[:4]) == red(s[-4:]))


_CASE1 = (1, 2, 3, 4)  # columns (1,2),(3,4)
_CASE2 = (1, 3, 2, 4)  # columns (1,3),(2,4)


def syt_case_counts(n: int, max_cells: int = 16) -> tuple[int, int]:
    """Split the two-row standard tableaux of width n+2 whose first two and
    last two columns reduce alike, by which 2x2 tableau that shared reduction is."""
    if n < 1:
        raise ValueError("n must be positive")
    case1 = case2 = 0
    for s in iter_sigmas(n + 2, 2, PatternClass.STANDARD_RECT, max_cells):
        head = red(s[:4])
        if head == red(s[-4:]):
            if head == _CASE1:
                case1 += 1
            else:
                case2 += 1
    return case1, case2


def skew_syt_count(top: int, bottom: int, removed: int) -> int:
    """Standard fillings of the two-row skew shape (top, bottom)/(removed) by
    direct enumeration.

    Rows use English convention here: the first row has ``top`` cells, of which
    the leftmost ``removed`` are deleted; the second row has ``bottom`` cells.
    Rows increase left to right and columns increase downward.
    """
    if not (top >= bottom >= 0 and 0 <= removed <= top):
        raise ValueError("invalid skew shape")
    size = top - removed + bottom

    # place 1..size one at a time; state is how many cells of each row are filled
    @functools.cache
    def ways(a: int, b: int) -> int:
        if a + b == size:
            return 1
        total = 0
        if removed + a < top:
            total += ways(a + 1, b)
        # cell (2, b+1) needs the cell above it, column b+1 of row 1, filled or removed
        if b < bottom and b + 1 <= removed + a:
            total += ways(a, b + 1)
        return total

    return ways(0, 0)

