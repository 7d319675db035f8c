"""Exact integer/rational helpers, truncated power series and certified sums.

Integers are Python ``int`` and rationals are :class:`fractions.Fraction`;
both are already arbitrary precision and canonical, so no wrapper types are
introduced for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

__all__ = [
    "factorial",
    "multinomial",
    "RationalSeries",
    "XPoly",
    "XPolySeries",
    "Interval",
    "BoundResult",
    "RatioViolation",
    "NonConvergence",
    "certified_sum",
    "render_decimal",
    "series_mul",
    "series_reciprocal",
]


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return math.factorial(n)


def multinomial(total: int, parts: Sequence[int]) -> int:
    """total! / (prod(parts)! * (total - sum(parts))!).

    The remainder ``total - sum(parts)`` acts as one more implicit part.
    """
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {list(parts)}")
    rest = total - sum(parts)
    if rest < 0:
        raise ValueError("parts exceed total")
    result = 1
    used = 0
    for p in list(parts) + [rest]:
        used += p
        result *= math.comb(used, p)
    return result


def _as_fraction(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class RationalSeries:
    """Power series in t truncated at a fixed order (coefficients of t^0..t^order)."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(_as_fraction(c) for c in self.coeffs))

    @classmethod
    def from_function(cls, order: int, f: Callable[[int], object]) -> "RationalSeries":
        return cls(tuple(_as_fraction(f(i)) for i in range(order + 1)))

    @classmethod
    def one(cls, order: int) -> "RationalSeries":
        return cls((Fraction(1),) + (Fraction(0),) * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def _check(self, other: "RationalSeries") -> None:
        if not isinstance(other, RationalSeries):
            raise TypeError(f"expected RationalSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        return RationalSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        return RationalSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "RationalSeries":
        if isinstance(other, RationalSeries):
            return series_mul(self, other)
        c = _as_fraction(other)
        return RationalSeries(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalSeries":
        return series_reciprocal(self)

    def evaluate(self, t) -> Fraction:
        t = _as_fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


def series_mul(a: RationalSeries, b: RationalSeries) -> RationalSeries:
    """Cauchy product truncated to the common order."""
    a._check(b)
    n = a.order
    ac, bc = a.coeffs, b.coeffs
    out = []
    for m in range(n + 1):
        s = Fraction(0)
        for i in range(m + 1):
            if ac[i] and bc[m - i]:
                s += ac[i] * bc[m - i]
        out.append(s)
    return RationalSeries(tuple(out))


def series_reciprocal(a: RationalSeries) -> RationalSeries:
    c0 = a.coeffs[0]
    if c0 == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    ac = a.coeffs
    out = [1 / c0]
    for m in range(1, a.order + 1):
        s = Fraction(0)
        for i in range(1, m + 1):
            if ac[i]:
                s += ac[i] * out[m - i]
        out.append(-s / c0)
    return RationalSeries(tuple(out))


class XPoly(tuple):
    """Dense polynomial in x with rational coefficients, lowest degree first.

    Trailing zero coefficients are trimmed, so the zero polynomial is ``()``.
    """

    def __new__(cls, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return super().__new__(cls, cs)

    @property
    def degree(self) -> int:
        return len(self) - 1

    def __add__(self, other):
        other = other if isinstance(other, XPoly) else XPoly([other])
        m = max(len(self), len(other))
        return XPoly(
            (self[i] if i < len(self) else 0) + (other[i] if i < len(other) else 0)
            for i in range(m)
        )

    __radd__ = __add__

    def __neg__(self):
        return XPoly(-c for c in self)

    def __sub__(self, other):
        other = other if isinstance(other, XPoly) else XPoly([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, XPoly):
            c = _as_fraction(other)
            return XPoly(a * c for a in self)
        if not self or not other:
            return XPoly()
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self):
            if a:
                for j, b in enumerate(other):
                    out[i + j] += a * b
        return XPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = XPoly([1])
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, x) -> Fraction:
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"XPoly({[str(c) for c in self]})"


@dataclass(frozen=True)
class XPolySeries:
    """Truncated power series in t whose coefficients are polynomials in x."""

    coeffs: tuple[XPoly, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", tuple(c if isinstance(c, XPoly) else XPoly(c) for c in self.coeffs)
        )

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> XPoly:
        return self.coeffs[i]

    def _check(self, other: "XPolySeries") -> None:
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __sub__(self, other: "XPolySeries") -> "XPolySeries":
        self._check(other)
        return XPolySeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "XPolySeries") -> "XPolySeries":
        self._check(other)
        out = []
        for m in range(self.order + 1):
            s = XPoly()
            for i in range(m + 1):
                s = s + self.coeffs[i] * other.coeffs[m - i]
            out.append(s)
        return XPolySeries(tuple(out))

    def reciprocal(self) -> "XPolySeries":
        c0 = self.coeffs[0]
        if len(c0) != 1:
            raise ValueError("reciprocal needs a nonzero constant (x-free) leading term")
        inv = 1 / c0[0]
        out = [XPoly([inv])]
        for m in range(1, self.order + 1):
            s = XPoly()
            for i in range(1, m + 1):
                s = s + self.coeffs[i] * out[m - i]
            out.append(s * (-inv))
        return XPolySeries(tuple(out))

    def at(self, x) -> RationalSeries:
        return RationalSeries(tuple(c(x) for c in self.coeffs))


@dataclass(frozen=True)
class Interval:
    """Closed rational interval; just enough arithmetic for reference constants."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v) -> "Interval":
        return cls(v, v)

    @staticmethod
    def _lift(v) -> "Interval":
        return v if isinstance(v, Interval) else Interval.point(v)

    def __add__(self, other):
        o = self._lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __contains__(self, v) -> bool:
        v = _as_fraction(v)
        return self.lo <= v <= self.hi

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


def render_decimal(lo: Fraction, hi: Fraction, max_digits: int = 30) -> tuple[str, int]:
    """Longest decimal truncation shared by every value in ``[lo, hi]``.

    Returns the rendered string and the number of digits after the point.
    """
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    neg = hi < 0
    if neg:
        lo, hi = -hi, -lo
    elif lo < 0:
        return "?", 0
    best = None
    for d in range(max_digits + 1):
        scale = 10**d
        a = math.floor(lo * scale)
        b = math.floor(hi * scale)
        if a != b:
            break
        best = (a, d)
    if best is None:
        return "?", 0
    a, d = best
    s = str(a).rjust(d + 1, "0")
    text = s if d == 0 else f"{s[:-d]}.{s[-d:]}"
    return ("-" + text if neg else text), d


@dataclass(frozen=True)
class BoundResult:
    """Certified real value: it lies in [partial_sum - tail_bound, partial_sum + tail_bound]."""

    partial_sum: Fraction
    tail_bound: Fraction
    decimal: str
    terms_used: int

    @classmethod
    def from_interval(cls, iv: Interval, terms_used: int = 0, max_digits: int = 30) -> "BoundResult":
        text, _ = render_decimal(iv.lo, iv.hi, max_digits)
        return cls(iv.mid, iv.width / 2, text, terms_used)

    @property
    def low(self) -> Fraction:
        return self.partial_sum - self.tail_bound

    @property
    def high(self) -> Fraction:
        return self.partial_sum + self.tail_bound

    @property
    def interval(self) -> Interval:
        return Interval(self.low, self.high)

    @property
    def certified_digits(self) -> int:
        text = self.decimal.lstrip("-")
        return len(text.split(".")[1]) if "." in text else 0

    def affine(self, scale, shift) -> "BoundResult":
        """The certified value of ``scale * self + shift``."""
        scale, shift = _as_fraction(scale), _as_fraction(shift)
        iv = Interval(self.low, self.high) * scale + shift
        return BoundResult.from_interval(iv, self.terms_used, max(self.certified_digits + 2, 1))

    def rounded(self, places: int) -> str | None:
        """Value rounded half-up to ``places`` decimals, or None if the interval is ambiguous."""
        scale = 10**places
        r_lo = math.floor(self.low * scale + Fraction(1, 2))
        r_hi = math.floor(self.high * scale + Fraction(1, 2))
        if r_lo != r_hi:
            return None
        sign = "-" if r_lo < 0 else ""
        s = str(abs(r_lo)).rjust(places + 1, "0")
        return sign + (s if places == 0 else f"{s[:-places]}.{s[-places:]}")


class RatioViolation(ArithmeticError):
    """A consumed term ratio exceeded the declared geometric cap."""


class NonConvergence(ArithmeticError):
    pass


def certified_sum(
    term: Callable[[int], object],
    ratio_cap,
    target_digits: int,
    start: int = 0,
    max_terms: int = 10_000,
) -> BoundResult:
    """Sum ``term(start) + term(start+1) + ...`` with a verified geometric tail bound.

    Every consumed ratio ``term(i+1)/term(i)`` is checked against ``ratio_cap``,
    and the tail after the last term ``t`` is bounded by ``t*r/(1-r)``. A zero
    term ends the series (tail bound 0).
    """
    r = _as_fraction(ratio_cap)
    if not 0 <= r < 1:
        raise ValueError("ratio_cap must lie in [0, 1)")
    eps = Fraction(1, 10 ** (target_digits + 2))
    total = Fraction(0)
    prev = None
    tail = None
    used = 0
    for i in range(start, start + max_terms):
        t = _as_fraction(term(i))
        if t < 0:
            raise ValueError(f"term({i}) is negative")
        if t == 0:
            tail = Fraction(0)
            break
        if prev is not None and t > r * prev:
            raise RatioViolation(f"term({i})/term({i - 1}) = {t / prev} exceeds cap {r}")
        total += t
        used += 1
        prev = t
        tail = t * r / (1 - r)
        if tail < eps:
            break
    else:
        raise NonConvergence(f"tail still {float(tail):.3g} after {max_terms} terms")
    text, _ = render_decimal(total - tail, total + tail, target_digits + 2)
    return BoundResult(total, tail, text, used)
