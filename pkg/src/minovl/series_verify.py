"""Coefficientwise checks of the maximum-packing generating function identities.

Both sides are computed independently: the left from full enumeration of
match counts, the right from the reciprocal of the packing series, whose
packing counts come from the pruned packing builder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import RationalSeries, XPoly, XPolySeries, series_reciprocal
from .fillings import DEFAULT_MAX_CELLS, Filling, PatternClass, iter_sigmas
from .patterns import _match_starts, is_minimal, match_distribution, packing_sigmas

DEFAULT_SAMPLES = (
    (Fraction(1), Fraction(1), Fraction(1)),
    (Fraction(2), Fraction(1), Fraction(1)),
    (Fraction(1), Fraction(2), Fraction(3)),
    (Fraction(1, 2), Fraction(3), Fraction(1, 5)),
)


@dataclass
class TheoremReport:
    theorem: str
    pattern: Filling
    cls: PatternClass
    order: int
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    first_mismatch: dict | None = None

    @property
    def verdict(self) -> str:
        return "verified" if self.first_mismatch is None else "mismatch"

    def to_json(self) -> dict:
        def fmt(v):
            if isinstance(v, XPoly):
                return [str(c) for c in v]
            if isinstance(v, (list, tuple)):
                return [fmt(x) for x in v]
            return str(v)

        return {
            "theorem": self.theorem,
            "pattern": self.pattern.compact(),
            "class": self.cls.value,
            "order": self.order,
            "samples": [[str(c) for c in s] for s in self.samples],
            "lhs": fmt(self.lhs),
            "rhs": fmt(self.rhs),
            "verdict": self.verdict,
            "first_mismatch": self.first_mismatch,
        }


def perm_stats(sigma: Sequence[int]) -> tuple[int, int]:
    """(inv, coinv) of a sequence of distinct values."""
    inv = coinv = 0
    m = len(sigma)
    for a in range(m):
        for b in range(a + 1, m):
            if sigma[a] > sigma[b]:
                inv += 1
            else:
                coinv += 1
    return inv, coinv


def pq_integer(n: int, p, q) -> Fraction:
    """[n]_{p,q} = p^{n-1} + p^{n-2} q + ... + q^{n-1}."""
    return sum((Fraction(p) ** (n - 1 - i) * Fraction(q) ** i for i in range(n)), Fraction(0))


def pq_factorial(n: int, p, q) -> Fraction:
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= pq_integer(i, p, q)
    return out


def _require_minimal(P: Filling, cls: PatternClass) -> None:
    if not is_minimal(P, cls):
        raise ValueError(f"pattern {P} is not minimal overlapping")


def main_lhs(P: Filling, order: int, max_cells: int = DEFAULT_MAX_CELLS) -> XPolySeries:
    """sum_n t^n/(kn)! sum_{F in F_{n,k}} x^{P-mch(F)} up to t^order."""
    k = P.k
    coeffs = []
    for n in range(order + 1):
        dist = match_distribution(P, n, PatternClass.COLUMN_STRICT, max_cells)
        coeffs.append(XPoly(Fraction(c, math.factorial(k * n)) for c in dist))
    return XPolySeries(tuple(coeffs))


def main_rhs(P: Filling, order: int, packing_cells: int = 24) -> XPolySeries:
    """1 / (1 - (t/k! + sum_n t^{n(j-1)+1}/(k(n(j-1)+1))! (x-1)^n mp_{P,n(j-1)+1}))."""
    k, j = P.k, P.n
    inner = [XPoly() for _ in range(order + 1)]
    if order >= 1:
        inner[1] = XPoly([Fraction(1, math.factorial(k))])
    x_minus_1 = XPoly([-1, 1])
    n = 1
    while n * (j - 1) + 1 <= order:
        w = n * (j - 1) + 1
        mp = sum(1 for _ in packing_sigmas(P, n, PatternClass.COLUMN_STRICT, packing_cells))
        inner[w] = inner[w] + x_minus_1**n * Fraction(mp, math.factorial(k * w))
        n += 1
    denom = [XPoly([1])] + [-c for c in inner[1:]]
    return XPolySeries(tuple(denom)).reciprocal()


def verify_thm_main(P: Filling, order: int, max_cells: int = DEFAULT_MAX_CELLS) -> TheoremReport:
    if P.k < 2:
        raise ValueError("this identity is stated for k >= 2; use verify_thm_DR for k = 1")
    _require_minimal(P, PatternClass.COLUMN_STRICT)
    lhs = main_lhs(P, order, max_cells)
    rhs = main_rhs(P, order)
    report = TheoremReport("main", P, PatternClass.COLUMN_STRICT, order, list(lhs.coeffs), list(rhs.coeffs))
    for n in range(order + 1):
        if lhs[n] != rhs[n]:
            report.first_mismatch = {"t_degree": n, "lhs": [str(c) for c in lhs[n]], "rhs": [str(c) for c in rhs[n]]}
            break
    return report


def dr_lhs(tau: Filling, order: int, x, p, q, max_cells: int = DEFAULT_MAX_CELLS) -> RationalSeries:
    """sum_n t^n/[n]_{p,q}! sum_{sigma in S_n} x^{mch} p^{coinv} q^{inv}, at one point."""
    x, p, q = Fraction(x), Fraction(p), Fraction(q)
    psig, j = tau.sigma, tau.n
    coeffs = [Fraction(1)]
    for n in range(1, order + 1):
        total = Fraction(0)
        for s in iter_sigmas(n, 1, PatternClass.COLUMN_STRICT, max_cells):
            m = len(_match_starts(s, 1, psig, j)) if n >= j else 0
            inv, coinv = perm_stats(s)
            total += x**m * p**coinv * q**inv
        coeffs.append(total / pq_factorial(n, p, q))
    return RationalSeries(tuple(coeffs))


def dr_rhs(tau: Filling, order: int, x, p, q, packing_cells: int = 24) -> RationalSeries:
    """1/(1 - (t + sum_n t^{n(j-1)+1}/[n(j-1)+1]_{p,q}! (x-1)^n mp(p,q))), at one point."""
    x, p, q = Fraction(x), Fraction(p), Fraction(q)
    j = tau.n
    inner = [Fraction(0)] * (order + 1)
    if order >= 1:
        inner[1] = Fraction(1)
    n = 1
    while n * (j - 1) + 1 <= order:
        w = n * (j - 1) + 1
        weight = Fraction(0)
        for s in packing_sigmas(tau, n, PatternClass.COLUMN_STRICT, packing_cells):
            inv, coinv = perm_stats(s)
            weight += p**coinv * q**inv
        inner[w] += (x - 1) ** n * weight / pq_factorial(w, p, q)
        n += 1
    denom = [Fraction(1)] + [-c for c in inner[1:]]
    return series_reciprocal(RationalSeries(tuple(denom)))


def verify_thm_DR(
    tau: Filling,
    order: int,
    samples: Sequence[tuple] = DEFAULT_SAMPLES,
    max_cells: int = DEFAULT_MAX_CELLS,
    require_minimal: bool = True,
) -> TheoremReport:
    """Compare both sides at each (x, p, q) sample up to t^order.

    ``require_minimal=False`` waives the hypothesis check so the comparison can
    be run on overlapping patterns too. Coefficients below the length of the
    shortest permutation holding two matches cannot tell the difference.
    """
    if tau.k != 1:
        raise ValueError("the permutation identity needs a one-row pattern")
    if require_minimal:
        _require_minimal(tau, PatternClass.COLUMN_STRICT)
    report = TheoremReport("DR", tau, PatternClass.COLUMN_STRICT, order)
    for sample in samples:
        x, p, q = (Fraction(v) for v in sample)
        if any(pq_integer(i, p, q) == 0 for i in range(1, order + 1)):
            raise ValueError(f"[n]_(p,q) vanishes at p={p}, q={q}")
        lhs = dr_lhs(tau, order, x, p, q, max_cells)
        rhs = dr_rhs(tau, order, x, p, q)
        report.samples.append((x, p, q))
        report.lhs.append(list(lhs.coeffs))
        report.rhs.append(list(rhs.coeffs))
        if report.first_mismatch is None:
            for n in range(order + 1):
                if lhs[n] != rhs[n]:
                    report.first_mismatch = {
                        "sample": [str(x), str(p), str(q)],
                        "t_degree": n,
                        "lhs": str(lhs[n]),
                        "rhs": str(rhs[n]),
                    }
                    break
    return report
