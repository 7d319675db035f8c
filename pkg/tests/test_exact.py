from fractions import Fraction
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minovl import constants
from minovl.exact import (
    BoundResult,
    Interval,
    NonConvergence,
    RatioViolation,
    RationalSeries,
    XPoly,
    XPolySeries,
    certified_sum,
    multinomial,
    render_decimal,
    series_mul,
    series_reciprocal,
)

fracs = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def series(min_size=1, max_size=8, unit=False):
    head = fracs.filter(bool) if unit else fracs
    return st.tuples(head, st.lists(fracs, max_size=max_size - 1)).map(
        lambda ht: RationalSeries((ht[0], *ht[1]))
    )


class TestMultinomial:
    def test_small(self):
        assert multinomial(4, [2, 1]) == 12
        assert multinomial(6, [2, 2, 2]) == 90

    def test_remainder_is_a_part(self):
        assert multinomial(5, [2]) == math.comb(5, 2)

    @pytest.mark.parametrize("parts", [[-1, 2], [3, 3]])
    def test_rejects(self, parts):
        with pytest.raises(ValueError):
            multinomial(5, parts)

    @given(st.lists(st.integers(0, 5), max_size=4))
    def test_matches_factorials(self, parts):
        total = sum(parts) + 2
        want = math.factorial(total) // math.prod(math.factorial(p) for p in parts + [2])
        assert multinomial(total, parts) == want


class TestSeries:
    @given(series(unit=True))
    def test_reciprocal_identity(self, a):
        assert series_mul(a, series_reciprocal(a)) == RationalSeries.one(a.order)

    @given(series(), series())
    def test_mul_commutes(self, a, b):
        n = min(a.order, b.order)
        a = RationalSeries(a.coeffs[: n + 1])
        b = RationalSeries(b.coeffs[: n + 1])
        assert series_mul(a, b) == series_mul(b, a)

    def test_zero_constant_term(self):
        with pytest.raises(ZeroDivisionError):
            series_reciprocal(RationalSeries((Fraction(0), Fraction(1))))

    def test_geometric(self):
        one_minus_t = RationalSeries((Fraction(1), Fraction(-1), Fraction(0), Fraction(0)))
        assert series_reciprocal(one_minus_t).coeffs == (1, 1, 1, 1)

    def test_exp_times_exp_minus(self):
        e = RationalSeries.from_function(8, lambda n: Fraction(1, math.factorial(n)))
        em = RationalSeries.from_function(8, lambda n: Fraction((-1) ** n, math.factorial(n)))
        assert series_mul(e, em) == RationalSeries.one(8)
        assert series_reciprocal(e) == em


class TestXPoly:
    def test_trim(self):
        assert XPoly([1, 2, 0, 0]) == XPoly([1, 2])
        assert XPoly([0]) == XPoly()

    def test_arith(self):
        x1 = XPoly([-1, 1])
        assert x1**2 == XPoly([1, -2, 1])
        assert (x1 * x1)(3) == 4

    @given(st.lists(fracs, max_size=4), st.lists(fracs, max_size=4), fracs)
    def test_eval_is_ring_map(self, a, b, x):
        p, q = XPoly(a), XPoly(b)
        assert (p * q)(x) == p(x) * q(x)
        assert (p + q)(x) == p(x) + q(x)

    def test_series_reciprocal_and_specialization(self):
        # 1/(1 - x t) has coefficient x^n at t^n
        s = XPolySeries((XPoly([1]), XPoly([0, -1]), XPoly(), XPoly()))
        inv = s.reciprocal()
        assert inv[3] == XPoly([0, 0, 0, 1])
        assert inv.at(2).coeffs == (1, 2, 4, 8)


class TestDecimals:
    def test_shared_digits(self):
        text, d = render_decimal(Fraction(28171, 100000), Fraction(28179, 100000))
        assert text == "0.2817" and d == 4

    def test_straddle_zero(self):
        assert render_decimal(Fraction(-1, 10), Fraction(1, 10))[0] == "?"

    def test_rounded_ambiguous(self):
        b = BoundResult(Fraction(9495, 10000), Fraction(1, 10**6), "0.949", 1)
        assert b.rounded(3) is None
        assert b.rounded(2) == "0.95"

    @given(st.fractions(min_value=0, max_value=5), st.fractions(min_value=0, max_value=1))
    def test_rendered_prefix_is_inside(self, lo, w):
        hi = lo + w / 1000
        text, d = render_decimal(lo, hi)
        if text == "?":
            # no integer part is shared
            assert math.floor(lo) != math.floor(hi)
            return
        lead = Fraction(text)
        assert lead <= lo and hi < lead + Fraction(1, 10**d)


class TestCertifiedSum:
    def test_geometric_half(self):
        r = certified_sum(lambda i: Fraction(1, 2**i), Fraction(1, 2), 10, start=1)
        assert r.low <= 1 <= r.high
        assert r.tail_bound < Fraction(1, 10**12)

    def test_ratio_violation(self):
        with pytest.raises(RatioViolation):
            certified_sum(lambda i: Fraction(1, i + 1), Fraction(1, 2), 6, start=1)

    def test_nonconvergence(self):
        with pytest.raises(NonConvergence):
            certified_sum(lambda i: Fraction(9, 10) ** i, Fraction(95, 100), 30, max_terms=20)

    def test_finite_series(self):
        r = certified_sum(lambda i: Fraction(1, 3) if i == 0 else 0, Fraction(1, 2), 5)
        assert r.tail_bound == 0 and r.partial_sum == Fraction(1, 3)

    @given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(1, 2)))
    @settings(max_examples=30)
    def test_brackets_closed_form(self, q):
        r = certified_sum(lambda i: q**i, Fraction(1, 2), 8)
        assert r.low <= 1 / (1 - q) <= r.high


class TestInterval:
    def test_empty(self):
        with pytest.raises(ValueError):
            Interval(2, 1)

    @given(fracs, fracs, fracs, fracs)
    def test_mul_encloses(self, a, b, c, d):
        x, y = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
        z = x * y
        for u in (x.lo, x.hi):
            for v in (y.lo, y.hi):
                assert z.lo <= u * v <= z.hi


class TestConstants:
    @pytest.fixture(autouse=True)
    def _prec(self):
        with mpmath.workdps(40):
            yield

    @staticmethod
    def inside(iv, value):
        lo, hi = mpmath.mpf(iv.lo.numerator) / iv.lo.denominator, mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
        return lo <= value <= hi and hi - lo < mpmath.mpf(10) ** -25

    def test_e(self):
        assert self.inside(constants.e_interval(30), mpmath.e)

    def test_pi(self):
        assert self.inside(constants.pi_interval(30), mpmath.pi)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_sqrt(self, n):
        assert self.inside(constants.sqrt_interval(n, 30), mpmath.sqrt(n))

    def test_cosh_sqrt2(self):
        iv = constants.cosh_interval(constants.sqrt_interval(2, 32), 30)
        assert self.inside(iv, mpmath.cosh(mpmath.sqrt(2)))
