"""Rigorous rational enclosures of the irrational reference constants.

Each constant is produced by a route that does not share code with the
bound series it is later compared against: e from its continued fraction,
pi from Machin's arctangent formula, square roots from integer square roots,
and cosh by Taylor-bounded exp at rational endpoints.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exact import Interval

__all__ = ["e_interval", "pi_interval", "sqrt_interval", "exp_interval", "cosh_interval"]


def _eps(digits: int) -> Fraction:
    return Fraction(1, 10**digits)


def e_interval(digits: int = 30) -> Interval:
    """Bracket e between consecutive convergents of [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]."""
    def partial_quotients():
        yield 2
        m = 2
        while True:
            yield 1
            yield m
            yield 1
            m += 2

    h_prev, h = 1, 0
    k_prev, k = 0, 1
    last = None
    for a in partial_quotients():
        h_prev, h = a * h_prev + h, h_prev
        k_prev, k = a * k_prev + k, k_prev
        cur = Fraction(h_prev, k_prev)
        if last is not None and abs(cur - last) < _eps(digits):
            return Interval(min(cur, last), max(cur, last))
        last = cur


def _arctan_inv(m: int, digits: int) -> Interval:
    """arctan(1/m) for integer m > 1 via its alternating series."""
    x = Fraction(1, m)
    total = Fraction(0)
    i = 0
    while True:
        t = x ** (2 * i + 1) / (2 * i + 1)
        nxt = x ** (2 * i + 3) / (2 * i + 3)
        total += -t if i % 2 else t
        if nxt < _eps(digits + 2):
            # alternating with decreasing terms: the next term brackets the tail
            other = total - nxt if i % 2 == 0 else total + nxt
            return Interval(min(total, other), max(total, other))
        i += 1


def pi_interval(digits: int = 30) -> Interval:
    return 16 * _arctan_inv(5, digits + 2) - 4 * _arctan_inv(239, digits + 2)


def sqrt_interval(n: int, digits: int = 30) -> Interval:
    scale = 10**digits
    r = math.isqrt(n * scale * scale)
    lo = Fraction(r, scale)
    hi = lo if r * r == n * scale * scale else Fraction(r + 1, scale)
    return Interval(lo, hi)


def _exp_rational(x: Fraction, digits: int) -> Interval:
    """exp(x) for rational x with |x| <= 2 by Taylor series and a geometric remainder."""
    if abs(x) > 2:
        raise ValueError("argument outside the supported range")
    ax = abs(x)
    total = Fraction(0)
    t = Fraction(1)
    i = 0
    while True:
        total += t
        i += 1
        t = t * ax / i
        # remaining terms ax^i/i! * (1 + ax/(i+1) + ...) <= t / (1 - ax/(i+1))
        if i + 1 > 2 * ax:
            rem = t / (1 - ax / (i + 1))
            if rem < _eps(digits + 2):
                break
    iv = Interval(total, total + rem)
    return iv if x >= 0 else Interval(1 / iv.hi, 1 / iv.lo)


def exp_interval(x: Interval, digits: int = 30) -> Interval:
    """exp over an interval, using monotonicity."""
    return Interval(_exp_rational(x.lo, digits).lo, _exp_rational(x.hi, digits).hi)


def cosh_interval(x: Interval, digits: int = 30) -> Interval:
    """cosh over a nonnegative interval (increasing there)."""
    if x.lo < 0:
        raise ValueError("cosh_interval expects a nonnegative interval")

    def at(v: Fraction, pick):
        ep = _exp_rational(v, digits)
        em = _exp_rational(-v, digits)
        return pick((ep.lo + em.lo) / 2, (ep.hi + em.hi) / 2)

    return Interval(at(x.lo, min), at(x.hi, max))
