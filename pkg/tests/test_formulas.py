import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minovl import formulas, patterns
from minovl.fillings import PatternClass, count_members

F, C, ST = PatternClass.COLUMN_STRICT, PatternClass.KUPDOWN, PatternClass.STANDARD_RECT


class TestCounts:
    def test_F(self):
        assert formulas.count_F(6, 2) == 7_484_400
        assert formulas.count_F(0, 3) == 1

    def test_euler_numbers(self):
        assert [formulas.euler_number(n) for n in range(11)] == [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521]

    def test_euler_from_secant_tangent(self):
        with mpmath.workdps(60):
            series = mpmath.taylor(lambda x: mpmath.sec(x) + mpmath.tan(x), 0, 20)
        for n, c in enumerate(series):
            assert formulas.euler_number(n) == int(mpmath.nint(c * mpmath.factorial(n)))

    def test_kupdown_small(self):
        assert [formulas.count_kupdown(2, n) for n in range(2, 6)] == [5, 61, 1385, 50521]
        assert [formulas.count_kupdown(3, n) for n in range(2, 5)] == [19, 1513, 315523]
        assert formulas.count_kupdown(1, 7) == 1

    @pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3), (2, 4)])
    def test_kupdown_enumeration(self, n, k):
        assert formulas.count_kupdown(k, n) == count_members(n, k, C)

    def test_hook_length(self):
        assert formulas.hook_length_count([3, 2]) == 5
        assert formulas.hook_length_count([2, 2, 2]) == 5
        assert formulas.count_syt_rect(4, 2) == formulas.catalan(4)
        with pytest.raises(ValueError):
            formulas.hook_length_count([1, 2])

    @given(st.integers(1, 40))
    def test_two_row_rectangle_is_catalan(self, n):
        assert formulas.count_syt_rect(n, 2) == formulas.catalan(n)

    @given(st.integers(1, 300))
    def test_skew_forms_agree(self, n):
        assert formulas.skew_count(n) > 0

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_skew_enumeration(self, n):
        assert formulas.skew_count(n) == patterns.skew_syt_count(n + 2, n, 2)


class TestRecursion:
    def test_even_k1(self):
        table = formulas.a_table_bruteforce(1, 4)
        assert formulas.a_even(6, 1, table) == Fraction(7, 18)
        assert formulas.a_even(8, 1, table) == Fraction(53, 144)

    def test_odd_k1(self):
        table = formulas.a_table_bruteforce(1, 3)
        for n in (5, 7):
            assert formulas.a_odd(n, 1, table) == patterns.proportion(n, 1)

    def test_odd_correction_needs_odd(self):
        with pytest.raises(ValueError):
            formulas.odd_correction(4, 1)

    def test_overlap_weight(self):
        assert formulas.overlap_weight(2, 3) == Fraction(36, math.factorial(6))


class TestBounds:
    def test_L1_is_three_minus_e(self):
        L1 = formulas.lower_bound_L(1)
        assert L1.interval.contains(formulas.reference_L1())
        assert L1.decimal.startswith("0.28171817")

    def test_monotone_in_k(self):
        vals = [formulas.lower_bound_L(k).partial_sum for k in range(1, 7)]
        assert vals == sorted(vals)

    @pytest.mark.parametrize("k,want", [(3, "0.949"), (4, "0.986"), (5, "0.996")])
    def test_L_rounding(self, k, want):
        assert formulas.lower_bound_L(k).rounded(3) == want

    def test_L3_against_mpmath(self):
        with mpmath.workdps(30):
            ref = 1 - mpmath.nsum(lambda i: mpmath.factorial(3) ** i / mpmath.factorial(3 * i), [2, mpmath.inf])
        b = formulas.lower_bound_L(3)
        assert float(b.low) <= float(ref) <= float(b.high)

    def test_LS2_reference(self):
        assert formulas.lower_bound_LS(2).interval.overlaps(formulas.reference_LS2())

    def test_small_k_rejected(self):
        with pytest.raises(ValueError):
            formulas.lower_bound_LS(1)
        with pytest.raises(ValueError):
            formulas.lower_bound_LE(1)

    def test_terms(self):
        assert formulas.lower_bound_terms("L", 1, 3) == [2, 6, 24]
        assert formulas.lower_bound_terms("LS", 2, 3) == [2, 5, 14]
        with pytest.raises(ValueError):
            formulas.lower_bound_terms("X", 1, 1)

    def test_catalan_sum(self):
        cat = formulas.catalan_reciprocal_sum(14)
        assert cat.interval.contains(formulas.catalan_sum_reference())

    @given(st.fractions(min_value=Fraction(1, 10), max_value=Fraction(3, 1), max_denominator=20))
    @settings(max_examples=15, deadline=None)
    def test_ode_residual_shrinks(self, x):
        r = [abs(formulas.catalan_gf_check(x, N)) for N in (10, 20, 40)]
        assert r[0] > r[1] > r[2]

    def test_ode_domain(self):
        with pytest.raises(ValueError):
            formulas.catalan_gf_check(4, 5)


class TestUpperBounds:
    def test_US_small(self):
        assert formulas.upper_bound_US(3) == Fraction(3, 7)
        with pytest.raises(ValueError):
            formulas.upper_bound_US(2)

    @given(st.integers(3, 400))
    def test_US_counts_match_closed(self, n):
        assert formulas.upper_bound_US(n) == formulas.upper_bound_US_closed(n)

    def test_overlap4_at_three(self):
        assert formulas.overlap4_formula(3) == patterns.overlap4_updown_count(3) == 7

    def test_UE_limit(self):
        with mpmath.workdps(30):
            ref = 8 * mpmath.pi - 5 * mpmath.pi**2 / 4 - 12
        lim = formulas.ue_limit()
        assert float(lim.low) <= float(ref) <= float(lim.high)
        assert abs(float(formulas.upper_bound_UE(150)) - float(ref)) < 0.02
        with pytest.raises(ValueError):
            formulas.upper_bound_UE(3)

    def test_members_check(self):
        e, c = formulas.count_members_check(3, 3, ST)
        assert e == c == 42
