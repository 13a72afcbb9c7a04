import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfmix.series import (FLOAT, INF, FieldExtensionError,
                          InsufficientOrderError, ModeMismatchError,
                          PuiseuxSeries, ZeroDivisionSeriesError)
from conftest import random_rational, random_series

t = PuiseuxSeries.variable()
one = PuiseuxSeries.constant(1)


def S(d, trunc=INF):
    return PuiseuxSeries(d, trunc)


class TestAdd:
    def test_additive_inverse(self):
        a = S({-2: 1})
        assert (a + a.scale(-1)).is_zero

    def test_plain_sum(self):
        got = S({-1: 1, 1: 1}) + S({-1: 2})
        assert got == S({-1: 3, 1: 1})

    def test_lattice_merge(self):
        got = S({Q(-1, 2): 1}) + S({Q(3, 2): 1})
        assert got.ramification == 2
        assert got.coefficient(Q(-1, 2)) == 1
        assert got.coefficient(Q(3, 2)) == 1

    def test_truncation_is_min(self):
        got = S({0: 1}, 5) + S({1: 1}, 3)
        assert got.truncation_order == 3

    def test_mode_mismatch(self):
        with pytest.raises(ModeMismatchError):
            one + one.to_float()


class TestMul:
    def test_inverse_pair(self):
        assert (t.invert() * t) == one

    def test_plain_product(self):
        a = S({-2: 1, 0: Q(-1, 3)})          # 1/t^2 - 1/3
        b = S({3: Q(1, 5)})                  # t^3/5
        got = a * b
        assert got.coefficient(1) == Q(1, 5)
        assert got.coefficient(3) == Q(-1, 15)

    def test_square(self):
        a = S({-1: 1, 1: Q(1, 2)})
        sq = a * a
        assert sq == S({-2: 1, 0: 1, 2: Q(1, 4)})

    def test_truncation_rule(self):
        a = S({1: 1}, 4)     # known through t^3
        b = S({-1: 1}, 10)
        assert (a * b).truncation_order == 3


class TestInvert:
    def test_monomial(self):
        assert (t * t).invert() == S({-2: 1})

    def test_geometric(self):
        inv = (one + t).invert()
        for k in range(6):
            assert inv.coefficient(k) == (-1) ** k

    def test_pole_plus_constant(self):
        a = S({-2: 1, 0: Q(2, 3)}, 16)
        inv = a.invert()
        assert inv.coefficient(2) == 1
        assert inv.coefficient(4) == Q(-2, 3)
        assert inv.coefficient(6) == Q(4, 9)
        prod = a * inv
        assert prod.coefficient(0) == 1
        assert all(c == 0 for e, c in prod.terms() if e != 0)

    def test_zero_series_raises(self):
        with pytest.raises(ZeroDivisionSeriesError):
            PuiseuxSeries.zero(trunc=4).invert()


class TestSqrt:
    def test_monomial(self):
        assert (t * t).sqrt() == t

    def test_constant(self):
        assert PuiseuxSeries.constant(4).sqrt() == PuiseuxSeries.constant(2)

    def test_elliptic_branch(self):
        # 1/t^2 + 2/3 + (g2/20) t^2 + (g3/28) t^4 at w0 = 1, g2 = 16/3
        g2 = Q(16, 3)
        a = S({-2: 1, 0: Q(2, 3), 2: g2 / 20, 4: Q(1, 7)}, 6)
        r = a.sqrt()
        assert r.coefficient(-1) == 1
        assert r.coefficient(1) == Q(1, 3)
        assert r.coefficient(3) == Q(7, 90)      # g2/40 - w0^2/18
        assert not (r * r - a)

    def test_nonsquare_leading_raises(self):
        with pytest.raises(FieldExtensionError):
            S({0: 2}).sqrt()

    def test_odd_exponent_ramifies(self):
        r = t.sqrt()
        assert r.base_exponent == Q(1, 2)
        assert not (r * r - t)

    def test_float_branch_positive_real(self):
        r = PuiseuxSeries.constant(4, FLOAT).sqrt()
        assert abs(r.coefficient(0) - 2) < 1e-15


class TestCalculus:
    def test_differentiate(self):
        assert S({3: Q(1, 5)}).differentiate() == S({2: Q(3, 5)})
        assert S({-2: 1}).differentiate() == S({-3: -2})
        assert one.differentiate().is_zero

    def test_residue_read_off(self):
        bj, g2 = Q(2), Q(16, 3)
        mu = S({-7: 12, -5: -4 * bj, -1: bj * (g2 - bj * bj / 3)}, 1)
        assert mu.residue() == 8

    def test_residue_missing_lattice_point(self):
        assert S({Q(-3, 2): 1, Q(1, 2): 1}).residue() == 0

    def test_residue_needs_order(self):
        with pytest.raises(InsufficientOrderError):
            S({-3: 1}, -2).residue()

    def test_antiderivative_log(self):
        ls = t.invert().antiderivative()
        assert ls.log_coefficient == 1
        assert ls.regular.is_zero

    def test_antiderivative_power(self):
        assert S({2: 3}).antiderivative().regular == S({3: 1})

    def test_antiderivative_mixed(self):
        ls = S({-2: 2, -1: 5}).antiderivative()
        assert ls.log_coefficient == 5
        assert ls.regular == S({-1: -2})


class TestRingAxioms:
    def test_thousand_randomized_cases(self):
        rng = random.Random(1234)
        for k in range(1000):
            a = random_series(rng, trunc=7)
            b = random_series(rng, trunc=6)
            c = random_series(rng, trunc=8)
            assert ((a + b) + c).agrees_with(a + (b + c))
            assert (a * (b + c)).agrees_with(a * b + a * c)
            assert (a * b).agrees_with(b * a)

    def test_derivative_kills_residue(self, rng):
        for _ in range(50):
            f = random_series(rng)
            assert f.differentiate().residue() == 0

    def test_residue_linearity(self, rng):
        for _ in range(50):
            a, b = random_series(rng), random_series(rng)
            al, be = random_rational(rng), random_rational(rng)
            assert (a.scale(al) + b.scale(be)).residue() == \
                al * a.residue() + be * b.residue()

    def test_antiderivative_roundtrip(self, rng):
        for _ in range(50):
            a = random_series(rng)
            ls = a.antiderivative()
            rebuilt = ls.regular.differentiate() + \
                PuiseuxSeries({-1: ls.log_coefficient}, INF)
            assert rebuilt.agrees_with(a)


@given(st.lists(st.fractions(max_denominator=6), min_size=1, max_size=5),
       st.integers(min_value=-3, max_value=2))
@settings(max_examples=200, deadline=None)
def test_mul_invert_roundtrip(coeffs, base):
    terms = {Q(base + i): c for i, c in enumerate(coeffs)}
    a = PuiseuxSeries(terms, Q(base + 8))
    if a.is_zero:
        return
    prod = a * a.invert()
    assert prod.coefficient(0) == 1
    assert all(c == 0 for e, c in prod.terms() if e != 0)


@given(st.lists(st.fractions(max_denominator=5), min_size=0, max_size=4))
@settings(max_examples=200, deadline=None)
def test_sqrt_squares_back(tail):
    terms = {Q(-2): Q(1)}
    for i, c in enumerate(tail):
        terms[Q(-1 + i)] = c
    a = PuiseuxSeries(terms, Q(4))
    r = a.sqrt()
    assert not (r * r - a)


class TestSerialization:
    def test_exact_rows(self):
        rows = list(S({-2: Q(3, 4), 1: Q(-1, 2)}).to_csv_rows())
        assert rows == ["-2,3,4", "1,-1,2"]

    def test_float_rows(self):
        rows = list(S({0: 1}).to_float().to_csv_rows())
        assert rows[0].startswith("0,1.0,")

    def test_half_integer_exponent(self):
        rows = list(S({Q(-1, 2): Q(1, 3)}).to_csv_rows())
        assert rows == ["-1/2,1,3"]
