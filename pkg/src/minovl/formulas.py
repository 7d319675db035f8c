"""Closed-form counts, the even/odd recursions for a_{n,k}, and the lower and
upper bounds on minimal-overlap proportions."""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Mapping

from .constants import cosh_interval, e_interval, pi_interval, sqrt_interval
from .exact import (
    BoundResult,
    Interval,
    RationalSeries,
    certified_sum,
    multinomial,
    series_reciprocal,
)
from .fillings import DEFAULT_MAX_CELLS, PatternClass, iter_sigmas

# geometric cap used for every bound series; all consumed ratios are checked
RATIO_CAP = Fraction(1, 2)
US_LIMIT = Fraction(3, 8)


class FormulaDisagreement(ArithmeticError):
    """Two independent routes to the same count gave different answers."""


# --- counts -------------------------------------------------------------------


def count_F(n: int, k: int) -> int:
    """|F_{n,k}| = (nk)! / (k!)^n."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    return multinomial(n * k, [k] * n)


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


@functools.lru_cache(maxsize=None)
def _zigzag_table(size: int) -> tuple[int, ...]:
    # boustrophedon: each row is the running sum of the previous row read backwards
    out = [1]
    row = [1]
    for _ in range(size):
        new = [0]
        for v in reversed(row):
            new.append(new[-1] + v)
        row = new
        out.append(row[-1])
    return tuple(out)


def euler_number(n: int) -> int:
    """Zigzag number E(n): alternating permutations of length n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    size = 64
    while size < n:
        size *= 2
    return _zigzag_table(size)[n]


@functools.lru_cache(maxsize=None)
def _kupdown_table(k: int, nmax: int) -> tuple[int, ...]:
    order = k * nmax
    alt = RationalSeries.from_function(
        order, lambda i: Fraction((-1) ** (i // k), math.factorial(i)) if i % k == 0 else 0
    )
    inv = series_reciprocal(alt)
    out = []
    for n in range(nmax + 1):
        c = inv[k * n] * math.factorial(k * n)
        if c.denominator != 1:
            raise FormulaDisagreement(f"non-integral coefficient {c} at n={n}")
        out.append(int(c))
    return tuple(out)


def count_kupdown(k: int, n: int) -> int:
    """|C_{=k[n-1]}| read off the reciprocal of sum (-1)^n t^{kn}/(kn)!."""
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    size = 8
    while size < n:
        size *= 2
    return _kupdown_table(k, size)[n]


def hook_length_count(shape) -> int:
    """Standard Young tableaux of a partition shape (row lengths, weakly decreasing)."""
    shape = [int(r) for r in shape if r]
    if any(a < b for a, b in zip(shape, shape[1:])) or any(r < 0 for r in shape):
        raise ValueError(f"invalid shape {shape}")
    conj = [sum(1 for r in shape if r > c) for c in range(shape[0])] if shape else []
    hooks = 1
    for i, r in enumerate(shape):
        for j in range(r):
            hooks *= (r - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(shape)) // hooks


def count_syt_rect(n: int, k: int) -> int:
    """Y_{n^k}: standard tableaux of the k-row, n-column rectangle."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    return hook_length_count([n] * k)


def count_two_row(a: int, b: int) -> int:
    if not a >= b >= 0:
        raise ValueError("two-row shape needs a >= b >= 0")
    return hook_length_count([a, b])


def skew_count(n: int) -> int:
    """|ST((n+2, n)/(2))| by the difference of two-row counts and by the closed form."""
    if n < 1:
        raise ValueError("n must be positive")
    diff = count_two_row(n + 2, n) - count_two_row(n + 1, n - 1)
    closed = Fraction(9 * n * n + 9 * n + 6, (n + 3) * (n + 2) * (n + 1)) * math.comb(2 * n, n)
    if closed != diff:
        raise FormulaDisagreement(f"skew count at n={n}: difference {diff} vs closed form {closed}")
    return diff


# --- even/odd recursion -------------------------------------------------------


def overlap_weight(i: int, k: int) -> Fraction:
    """(k!)^i / (ik)!, the chance that the first and last i columns reduce alike."""
    return Fraction(math.factorial(k) ** i, math.factorial(i * k))


def _recursion_sum(upto: int, k: int, table: Mapping[int, Fraction]) -> Fraction:
    missing = [i for i in range(2, upto + 1) if i not in table]
    if missing:
        raise KeyError(f"table lacks a_{{i,{k}}} for i in {missing}")
    return sum((Fraction(table[i]) * overlap_weight(i, k) for i in range(2, upto + 1)), Fraction(0))


def a_even(n: int, k: int, table: Mapping[int, Fraction]) -> Fraction:
    if n < 2 or n % 2:
        raise ValueError("a_even needs an even n >= 2")
    return 1 - _recursion_sum(n // 2, k, table)


def odd_correction(n: int, k: int, max_cells: int = DEFAULT_MAX_CELLS) -> Fraction:
    """Sum over minimal patterns P of width (n+1)/2 of their two-match packing
    counts in F_{n,k}, divided by |F_{n,k}|. Computed by enumeration only."""
    from .patterns import fast_classification, packing_sigmas
    from .fillings import Filling

    if n < 3 or n % 2 == 0:
        raise ValueError("odd_correction needs an odd n >= 3")
    j = (n + 1) // 2
    total = 0
    for p, minimal in fast_classification(j, k, PatternClass.COLUMN_STRICT, max_cells).items():
        if minimal:
            P = Filling.from_sigma(p, k)
            total += sum(1 for _ in packing_sigmas(P, 2, PatternClass.COLUMN_STRICT, max_cells))
    return Fraction(total, count_F(n, k))


def a_odd(n: int, k: int, table: Mapping[int, Fraction], max_cells: int = DEFAULT_MAX_CELLS) -> Fraction:
    if n < 3 or n % 2 == 0:
        raise ValueError("a_odd needs an odd n >= 3")
    return 1 - _recursion_sum((n - 1) // 2, k, table) - odd_correction(n, k, max_cells)


# --- lower bounds -----------------------------------------------------------------


def lower_bound_L(k: int, digits: int = 12) -> BoundResult:
    """L_k = 1 - sum_{i>=2} (k!)^i/(ik)!."""
    if k < 1:
        raise ValueError("k must be positive")
    s = certified_sum(lambda i: overlap_weight(i, k), RATIO_CAP, digits + 1, start=2)
    return s.affine(-1, 1)


def lower_bound_LS(k: int, digits: int = 12) -> BoundResult:
    """L^S_k = 1 - sum_{i>=2} 1/Y_{i^k}."""
    if k < 2:
        raise ValueError("the tableau bound needs k >= 2")
    s = certified_sum(lambda i: Fraction(1, count_syt_rect(i, k)), RATIO_CAP, digits + 1, start=2)
    return s.affine(-1, 1)


def lower_bound_LE(k: int, digits: int = 12) -> BoundResult:
    """L^E_k = 1 - sum_{j>=2} 1/|C_{=k[j-1]}|."""
    if k < 2:
        raise ValueError("the k-up-down bound needs k >= 2")
    s = certified_sum(lambda j: Fraction(1, count_kupdown(k, j)), RATIO_CAP, digits + 1, start=2)
    return s.affine(-1, 1)


def lower_bound_terms(family: str, k: int, count: int) -> list[int]:
    """Denominators of the first ``count`` subtracted terms of a bound series."""
    family = family.upper()
    if family == "L":
        return [count_F(i, k) for i in range(2, 2 + count)]
    if family == "LS":
        return [count_syt_rect(i, k) for i in range(2, 2 + count)]
    if family == "LE":
        return [count_kupdown(k, j) for j in range(2, 2 + count)]
    raise ValueError(f"unknown family {family!r}")


def catalan_reciprocal_sum(digits: int = 12) -> BoundResult:
    """sum_{i>=1} 1/Cat(i)."""
    return certified_sum(lambda i: Fraction(1, catalan(i)), RATIO_CAP, digits, start=1)


def catalan_sum_reference(digits: int = 30) -> Interval:
    """1 + 4*sqrt(3)*pi/27 from independent pi and sqrt(3) enclosures."""
    return 1 + 4 * sqrt_interval(3, digits + 2) * pi_interval(digits + 2) / 27


def catalan_gf_partial(x, order: int) -> Fraction:
    """f_N(x) = sum_{i=1}^{N} x^i / Cat(i)."""
    x = Fraction(x)
    return sum((x**i / catalan(i) for i in range(1, order + 1)), Fraction(0))


def catalan_gf_check(x, order: int) -> Fraction:
    """Residual of f' + (2x+2)/(x^2-4x) f - 2/(4-x) for the order-N truncation,
    differentiating termwise."""
    x = Fraction(x)
    if not 0 < x < 4:
        raise ValueError("x must lie in (0, 4)")
    f = catalan_gf_partial(x, order)
    df = sum((i * x ** (i - 1) / catalan(i) for i in range(1, order + 1)), Fraction(0))
    return df + (2 * x + 2) / (x * x - 4 * x) * f - 2 / (4 - x)


# --- reference values for the bounds ----------------------------------------------


def reference_L1(digits: int = 30) -> Interval:
    return 3 - e_interval(digits)


def reference_L2(digits: int = 30) -> Interval:
    return 3 - cosh_interval(sqrt_interval(2, digits + 2), digits + 2)


def reference_LS2(digits: int = 30) -> Interval:
    return 2 - catalan_sum_reference(digits)


# --- upper bounds -----------------------------------------------------------------------


def upper_bound_US(n: int) -> Fraction:
    """U^S_{n+2,2} from tableau counts: 1 - (|ST(n^2)| + skew) / |ST((n+2)^2)|."""
    if n < 3:
        raise ValueError("the tableau upper bound is stated for n >= 3")
    return 1 - Fraction(count_syt_rect(n, 2) + skew_count(n), count_syt_rect(n + 2, 2))


def upper_bound_US_closed(n: int) -> Fraction:
    if n < 3:
        raise ValueError("the tableau upper bound is stated for n >= 3")
    return Fraction(3 * n * n + 9 * n, 8 * n * n + 16 * n + 6)


def overlap4_formula(n: int) -> int:
    E = euler_number
    return 13 * E(2 * n) - 32 * n * E(2 * n - 1) + 10 * n * (2 * n - 1) * E(2 * n - 2)


def upper_bound_UE(n: int) -> Fraction:
    """U^E_{n,2} = 1 - overlap4_formula(n) / E(2n)."""
    if n < 4:
        raise ValueError("the up-down upper bound formula needs n >= 4")
    return 1 - Fraction(overlap4_formula(n), euler_number(2 * n))


def ue_limit(digits: int = 20) -> BoundResult:
    """8*pi - 5*pi^2/4 - 12, certified."""
    pi = pi_interval(digits + 4)
    return BoundResult.from_interval(8 * pi - pi * pi * Fraction(5, 4) - 12, max_digits=digits)


def a_table_bruteforce(k: int, upto: int, max_cells: int = DEFAULT_MAX_CELLS) -> dict[int, Fraction]:
    """a_{i,k} for 2 <= i <= upto by classifying every member of F_{i,k}."""
    from .patterns import count_minimal

    return {
        i: Fraction(count_minimal(i, k, PatternClass.COLUMN_STRICT, max_cells), count_F(i, k))
        for i in range(2, upto + 1)
    }


def count_members_check(n: int, k: int, cls: PatternClass, max_cells: int = DEFAULT_MAX_CELLS) -> tuple[int, int]:
    """(enumerated count, closed-form count) for a class."""
    enumerated = sum(1 for _ in iter_sigmas(n, k, cls, max_cells))
    if cls is PatternClass.COLUMN_STRICT:
        closed = count_F(n, k)
    elif cls is PatternClass.STANDARD_RECT:
        closed = count_syt_rect(n, k)
    else:
        closed = count_kupdown(k, n)
    return enumerated, closed
