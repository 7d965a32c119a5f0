from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from voa_deq.arith.laurent import LaurentPoly
from voa_deq.arith.linalg import PolySpan, RationalSpan, nullspace, rank, rref, solve
from voa_deq.arith.ratfunc import RatFunc, poly_ring
from voa_deq.arith.ring import RingElem, pair_list
from voa_deq.arith.series import (ITERATE, PRODUCT, REVERSED, RegionSeries, Series1, binomial_series,
                                  local_series, power_prefactor, ring_expand)

rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)
expo = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@st.composite
def laurent(draw, nvars=2):
    terms = draw(st.dictionaries(expo, rat, max_size=4))
    return LaurentPoly(terms, nvars)


@st.composite
def ring_elem(draw):
    return RingElem(draw(laurent()), draw(st.integers(0, 3)))


def z1():
    return RingElem.var(0)


def z2():
    return RingElem.var(1)


class TestLaurent:
    def test_zero_coefficients_dropped(self):
        p = LaurentPoly({(1, 0): F(0), (0, 1): F(2)})
        assert p.terms == {(0, 1): F(2)}

    def test_string_form(self):
        p = LaurentPoly({(-1, 1): F(-3, 4), (0, 0): F(3, 2)})
        assert str(p) == "3/2 - 3/4*z1^(-1)*z2"

    def test_divide_by_difference(self):
        d = LaurentPoly({(1, 0): 1, (0, 1): -1})
        q = LaurentPoly({(2, 0): 1, (0, 0): 5})
        assert (d * q).divide_by_difference(0, 1) == q
        assert q.divide_by_difference(0, 1) is None

    @given(laurent(), laurent(), laurent())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a


class TestRing:
    def test_canonical_form_cancels_differences(self):
        num = LaurentPoly({(1, 0): 1, (0, 1): -1})
        a = RingElem(num, 2)
        assert a == RingElem.diff_power(0, 1, -1)
        assert a.dpow == 1

    def test_unit_inverse(self):
        u = z1() ** 2 * RingElem.diff_power(0, 1, 3) * F(-2, 3)
        assert u * u.unit_inverse() == RingElem.one()

    def test_non_unit_has_no_inverse(self):
        with pytest.raises(Exception):
            (z1() + z2()).unit_inverse()

    def test_evaluate_and_degree(self):
        a = (z1() + 1) * RingElem.diff_power(0, 1, -2)
        assert a.evaluate((3, 1)) == F(4, 4)
        with pytest.raises(ZeroDivisionError):
            a.evaluate((1, 1))
        # deg z_i = -1
        assert RingElem.diff_power(0, 1, -1).degree() == 1

    def test_derivative_of_difference_power(self):
        a = RingElem.diff_power(0, 1, -2)
        assert a.derivative(0) == RingElem.diff_power(0, 1, -3, c=-2)
        assert a.derivative(1) == RingElem.diff_power(0, 1, -3, c=2)

    def test_str_wraps_multiple_denominators(self):
        a = RingElem.diff_power(0, 1, -1, 3) * RingElem.diff_power(0, 2, -1, 3)
        assert str(a).endswith("/ ((z1 - z2)*(z1 - z3))")

    def test_pair_list(self):
        assert pair_list(3) == ((0, 1), (0, 2), (1, 2))

    @given(ring_elem(), ring_elem(), ring_elem())
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a - a == RingElem.zero()

    @given(ring_elem(), ring_elem())
    @settings(max_examples=60, deadline=None)
    def test_evaluation_is_a_homomorphism(self, a, b):
        pt = (F(3), F(-2))
        assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
        assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)

    @given(ring_elem())
    @settings(max_examples=60, deadline=None)
    def test_canonical_form_is_unique(self, a):
        # multiplying numerator and denominator by (z1 - z2) gives the same element
        b = RingElem(a.num * LaurentPoly({(1, 0): 1, (0, 1): -1}), a.dpow + 1)
        assert a == b and hash(a) == hash(b)


class TestRatFunc:
    def test_round_trip_and_membership(self):
        a = (z1() * 3 + z2()) * RingElem.diff_power(0, 1, -2) * RingElem.var(1, 2, -1)
        assert RatFunc.from_ring(a).to_ring() == a
        ring = poly_ring(2)
        x, y = ring.gens
        assert RatFunc(ring.one, x + y).to_ring() is None

    @given(ring_elem())
    @settings(max_examples=40, deadline=None)
    def test_from_ring_round_trip(self, a):
        assert RatFunc.from_ring(a).to_ring() == a


class TestLinalg:
    def test_rref_rank_nullspace(self):
        rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
        assert rank(rows) == 2
        ns = nullspace(rows, 3)
        assert len(ns) == 1
        assert all(sum(r * v for r, v in zip(row, ns[0])) == 0 for row in rows)
        red, piv = rref(rows, 3)
        assert piv == [0, 1]

    def test_solve(self):
        assert solve([[F(1), F(1)], [F(1), F(-1)]], [F(3), F(1)]) == [F(2), F(1)]
        assert solve([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)]) is None

    def test_rational_span(self):
        s = RationalSpan(2)
        assert s.add([F(1), F(1)])
        assert not s.add([F(2), F(2)])
        assert s.rank == 1

    def test_poly_span_exposes_dependence_in_tags(self):
        ring = poly_ring(2)
        x, y = ring.gens
        span = PolySpan(2)
        span.add([x, y, ring.one, ring.zero])
        ok, red = span.add([x * y, y * y, ring.zero, ring.one])
        assert not ok
        assert red[:2] == [ring.zero, ring.zero]
        # the tags give the dependence tag_old * (x, y) + tag_new * (xy, y^2) = 0
        assert red[3] != 0
        assert red[2] * x + red[3] * x * y == 0 and red[2] * y + red[3] * y * y == 0


class TestSeries:
    def test_binomial_series(self):
        assert binomial_series(F(1, 2), 4).coeffs == [1, F(1, 2), F(-1, 8), F(1, 16)]

    def test_power_is_inverse_of_power(self):
        s = Series1([1, 2, 3, 4, 5])
        assert (s.power(F(1, 3)).power(3)).coeffs == s.coeffs

    def test_local_series_of_pole(self):
        a = RingElem.diff_power(0, 1, -1)
        s = local_series(a, "z3=0", 3)
        assert s.offset == -1 and s.coeffs == [1, 0, 0]
        s = local_series(a, "z1=0", 3)
        assert s.offset == 0 and s.coeffs == [-1, -1, -1]

    @pytest.mark.parametrize("region", [PRODUCT, ITERATE, REVERSED])
    def test_ring_expand_is_multiplicative(self, region):
        a = RingElem.diff_power(0, 1, -2) * (z1() + 2)
        b = RingElem.diff_power(0, 1, -1) * z2()
        lhs = ring_expand(a * b, region, 10)
        rhs = ring_expand(a, region, 14) * ring_expand(b, region, 14)
        assert lhs.equals_through(rhs, 8)

    def test_ring_expand_matches_geometric_series(self):
        s = ring_expand(RingElem.diff_power(0, 1, -1), PRODUCT, 3)
        assert s.terms == {(F(-1 - k), F(k)): F(1) for k in range(4)}

    def test_power_prefactor_iterate(self):
        s = power_prefactor(ITERATE, 1, 0, F(1, 2), 3)
        # z1 (z1-z2)^(1/2) = (z2 + w) w^(1/2)
        assert s.terms == {(F(1), F(1, 2)): 1, (F(0), F(3, 2)): 1}

    def test_truncation_is_tracked(self):
        s = RegionSeries(PRODUCT, {(F(0), F(5)): F(1)}, 3)
        assert s.terms == {}
        with pytest.raises(ValueError):
            s.is_zero_through(4)
