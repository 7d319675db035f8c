"""Column-strict fillings, the three pattern classes, enumeration and sampling.

A filling with ``k`` rows and ``n`` columns is stored column by column, each
column listed bottom to top. Flattening the columns in that order gives the
linearization ``sigma``; most hot loops work on ``sigma`` tuples directly.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "PatternClass",
    "Filling",
    "BudgetExceeded",
    "DEFAULT_MAX_CELLS",
    "des_set",
    "sigma_of",
    "in_class",
    "sigma_in_class",
    "enumerate_fillings",
    "iter_sigmas",
    "iter_sigmas_bruteforce",
    "first_column_shards",
    "count_members",
    "make_rng",
    "spawn_rngs",
    "RNG_ID",
    "random_filling",
    "random_sigmas",
    "random_syt",
    "kupdown_permutations",
]

DEFAULT_MAX_CELLS = 12


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured cell budget."""


class PatternClass(enum.Enum):
    COLUMN_STRICT = "F"
    KUPDOWN = "C"
    STANDARD_RECT = "ST"

    @classmethod
    def parse(cls, text: str) -> "PatternClass":
        key = text.strip().upper()
        aliases = {
            "F": cls.COLUMN_STRICT,
            "COLUMNSTRICT": cls.COLUMN_STRICT,
            "COLUMN_STRICT": cls.COLUMN_STRICT,
            "C": cls.KUPDOWN,
            "KUPDOWN": cls.KUPDOWN,
            "ST": cls.STANDARD_RECT,
            "SYT": cls.STANDARD_RECT,
            "STANDARDRECT": cls.STANDARD_RECT,
            "STANDARD_RECT": cls.STANDARD_RECT,
        }
        if key not in aliases:
            raise ValueError(f"unknown pattern class {text!r}")
        return aliases[key]


@dataclass(frozen=True)
class Filling:
    """k x n array of distinct positive integers, increasing up each column.

    ``columns[c][r]`` is the entry in column ``c`` (left to right) and row ``r``
    (bottom to top), both 0-based here; the text format and docs use 1-based.
    """

    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cols = tuple(tuple(int(v) for v in col) for col in self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise ValueError("a filling needs at least one column")
        k = len(cols[0])
        if k < 1 or any(len(c) != k for c in cols):
            raise ValueError("all columns must have the same positive height")
        flat = [v for c in cols for v in c]
        if min(flat) < 1:
            raise ValueError("entries must be positive")
        if len(set(flat)) != len(flat):
            raise ValueError("entries must be pairwise distinct")
        for c in cols:
            if any(c[r] >= c[r + 1] for r in range(k - 1)):
                raise ValueError(f"column {c} is not increasing bottom to top")

    @classmethod
    def from_sigma(cls, sigma: Sequence[int], k: int) -> "Filling":
        if len(sigma) % k:
            raise ValueError(f"length {len(sigma)} is not a multiple of k={k}")
        return cls(tuple(tuple(sigma[i : i + k]) for i in range(0, len(sigma), k)))

    @classmethod
    def from_rows(cls, rows_top_first: Sequence[Sequence[int]]) -> "Filling":
        rows = list(reversed([list(r) for r in rows_top_first]))
        return cls(tuple(zip(*rows)))

    @property
    def k(self) -> int:
        return len(self.columns[0])

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def sigma(self) -> tuple[int, ...]:
        return tuple(v for c in self.columns for v in c)

    @property
    def is_reduced(self) -> bool:
        return sorted(self.sigma) == list(range(1, self.k * self.n + 1))

    def rows_top_first(self) -> list[list[int]]:
        return [[col[r] for col in self.columns] for r in reversed(range(self.k))]

    def to_text(self) -> str:
        lines = [f"{self.k} {self.n}"]
        lines += [" ".join(str(v) for v in row) for row in self.rows_top_first()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Filling":
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 2:
            raise ValueError("first line must be 'k n'")
        k, n = int(lines[0][0]), int(lines[0][1])
        rows = [[int(v) for v in ln] for ln in lines[1:]]
        if len(rows) != k or any(len(r) != n for r in rows):
            raise ValueError(f"expected {k} rows of {n} integers")
        return cls.from_rows(rows)

    def compact(self) -> str:
        """One-token serialization: columns joined by '|', entries by '.'."""
        return "|".join(".".join(str(v) for v in c) for c in self.columns)

    def __str__(self) -> str:
        return self.compact()


def sigma_of(F: Filling) -> tuple[int, ...]:
    return F.sigma


def des_set(sigma: Sequence[int]) -> set[int]:
    """1-based descent positions i with sigma_i > sigma_{i+1}."""
    return {i + 1 for i in range(len(sigma) - 1) if sigma[i] > sigma[i + 1]}


def sigma_in_class(sigma: Sequence[int], k: int, cls: PatternClass) -> bool:
    m = len(sigma)
    for i in range(m - 1):
        if (i + 1) % k:
            if sigma[i] >= sigma[i + 1]:
                return False
        elif cls is PatternClass.KUPDOWN and sigma[i] < sigma[i + 1]:
            return False
    if cls is PatternClass.STANDARD_RECT:
        for i in range(m - k):
            if sigma[i] >= sigma[i + k]:
                return False
    return True


def in_class(F: Filling, cls: PatternClass) -> bool:
    return sigma_in_class(F.sigma, F.k, cls)


def _check_budget(n: int, k: int, max_cells: int) -> None:
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if n * k > max_cells:
        raise BudgetExceeded(f"{k}x{n} has {n * k} cells, budget is {max_cells}")


def _compatible(prev: tuple[int, ...], col: tuple[int, ...], cls: PatternClass) -> bool:
    if cls is PatternClass.KUPDOWN:
        return prev[-1] > col[0]
    if cls is PatternClass.STANDARD_RECT:
        return all(a < b for a, b in zip(prev, col))
    return True


def _build(remaining: tuple[int, ...], k: int, cols_left: int, prev, cls: PatternClass):
    # combinations of a sorted pool come out sorted and in lex order, so the
    # resulting sigmas are produced in lexicographic order
    if cols_left == 1:
        if prev is None or _compatible(prev, remaining, cls):
            yield remaining
        return
    strict = cls is PatternClass.STANDARD_RECT
    for col in itertools.combinations(remaining, k):
        if prev is not None and not _compatible(prev, col, cls):
            continue
        if strict and col[0] != remaining[0]:
            # the smallest unused value of a standard tableau sits at the next column's bottom
            break
        rest = tuple(v for v in remaining if v not in col)
        for tail in _build(rest, k, cols_left - 1, col, cls):
            yield col + tail


def first_column_shards(n: int, k: int, cls: PatternClass) -> list[tuple[int, ...]]:
    """Possible first columns of reduced members; disjoint enumeration shards."""
    pool = tuple(range(1, n * k + 1))
    if n == 1:
        return [pool]
    return [
        col
        for col in itertools.combinations(pool, k)
        if not (cls is PatternClass.STANDARD_RECT and col[0] != 1)
    ]


def iter_sigmas(
    n: int,
    k: int,
    cls: PatternClass = PatternClass.COLUMN_STRICT,
    max_cells: int = DEFAULT_MAX_CELLS,
    first_column: tuple[int, ...] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Linearizations of every reduced class member, lexicographic by sigma."""
    _check_budget(n, k, max_cells)
    pool = tuple(range(1, n * k + 1))
    if first_column is None:
        yield from _build(pool, k, n, None, cls)
        return
    first = tuple(sorted(first_column))
    if n == 1:
        if first == pool:
            yield pool
        return
    if cls is PatternClass.STANDARD_RECT and first[0] != 1:
        return
    rest = tuple(v for v in pool if v not in first)
    for tail in _build(rest, k, n - 1, first, cls):
        yield first + tail


def iter_sigmas_bruteforce(
    n: int, k: int, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = 9
) -> Iterator[tuple[int, ...]]:
    """Oracle path: filter all (nk)! permutations by the class predicate."""
    _check_budget(n, k, max_cells)
    for sigma in itertools.permutations(range(1, n * k + 1)):
        if sigma_in_class(sigma, k, cls):
            yield sigma


def enumerate_fillings(
    n: int, k: int, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = DEFAULT_MAX_CELLS
) -> Iterator[Filling]:
    for sigma in iter_sigmas(n, k, cls, max_cells):
        yield Filling.from_sigma(sigma, k)


def count_members(
    n: int, k: int, cls: PatternClass = PatternClass.COLUMN_STRICT, max_cells: int = DEFAULT_MAX_CELLS
) -> int:
    return sum(1 for _ in iter_sigmas(n, k, cls, max_cells))


def kupdown_permutations(n: int, k: int, max_cells: int = DEFAULT_MAX_CELLS) -> Iterator[tuple[int, ...]]:
    """Permutations of length kn with descent set exactly {k, 2k, ..., (n-1)k}."""
    return iter_sigmas(n, k, PatternClass.KUPDOWN, max_cells)


# --- random generation -------------------------------------------------------

RNG_ID = "numpy.PCG64"


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(ss))


def spawn_rngs(seed: int, workers: int) -> list[np.random.Generator]:
    """Independent per-worker streams split from one seed."""
    if workers == 1:
        return [make_rng(seed)]
    return [make_rng(ss) for ss in np.random.SeedSequence(seed).spawn(workers)]


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else make_rng(seed)


def random_sigmas(n: int, k: int, size: int, seed) -> np.ndarray:
    """``size`` uniform members of F_{n,k} as a (size, nk) array of sigmas."""
    rng = _rng(seed)
    perms = rng.permuted(np.tile(np.arange(1, n * k + 1), (size, 1)), axis=1)
    return np.sort(perms.reshape(size, n, k), axis=2).reshape(size, n * k)


def random_filling(n: int, k: int, seed) -> Filling:
    """Uniform over F_{n,k}: cut a uniform permutation into blocks of k, sort each."""
    rng = _rng(seed)
    perm = rng.permutation(n * k) + 1
    return Filling(tuple(tuple(sorted(perm[c * k : (c + 1) * k].tolist())) for c in range(n)))


def random_syt(n: int, k: int, seed) -> Filling:
    """Uniform standard tableau of the k x n rectangle via the hook walk.

    Repeatedly: start at a uniform cell of the remaining shape, jump to a
    uniform cell of its hook until a corner is reached, and put the largest
    unused value there.
    """
    rng = _rng(seed)
    lengths = [n] * k  # row r (bottom = 0) holds columns 0..lengths[r]-1
    grid = [[0] * k for _ in range(n)]
    for value in range(n * k, 0, -1):
        cells = sum(lengths)
        idx = int(rng.integers(cells))
        r = 0
        while idx >= lengths[r]:
            idx -= lengths[r]
            r += 1
        c = idx
        while True:
            arm = lengths[r] - c - 1
            leg = 0
            while r + leg + 1 < k and lengths[r + leg + 1] > c:
                leg += 1
            if arm == 0 and leg == 0:
                break
            step = int(rng.integers(arm + leg)) + 1
            if step <= arm:
                c += step
            else:
                r += step - arm
        grid[c][r] = value
        lengths[r] -= 1
    return Filling(tuple(tuple(col) for col in grid))
