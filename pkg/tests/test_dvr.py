import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncreduce import (FreeAlgebra, NotIntegralError, Valuation, normalize_content, p_local_smith,
                      reduce_poly, reduce_scalar, scaled_degree, vp)
from ncreduce.freealg import GF

import oracles

F = FreeAlgebra("xy")
x, y = F.gens()


def test_valuation_spec():
    assert Valuation(7).p == 7
    with pytest.raises(ValueError):
        Valuation(9)
    with pytest.raises(ValueError):
        Valuation(1)


def test_vp_examples():
    assert vp(12, 2) == 2
    assert vp(Fraction(3, 4), 2) == -2
    assert vp(0, 5) == math.inf


def test_reduce_scalar_examples():
    assert int(reduce_scalar(Fraction(3, 4), 5)) == 2
    assert int(reduce_scalar(10, 5)) == 0
    with pytest.raises(NotIntegralError):
        reduce_scalar(Fraction(1, 2), 2)


def test_normalize_content_examples():
    assert normalize_content(6 * x * y - 3 * y * x, 3) == 2 * x * y - y * x
    assert normalize_content(x * y - 2 * y * x, 3) == x * y - 2 * y * x
    assert normalize_content(Fraction(1, 5) * x * x, 5) == x * x
    with pytest.raises(ValueError):
        normalize_content(F.zero(), 3)


def test_reduce_poly_examples():
    F3, F5 = F.with_field(GF(3)), F.with_field(GF(5))
    assert reduce_poly(x * y - 3 * y * x, 3) == F3.word("xy")
    assert reduce_poly(x * y - 2 * y * x, 5) == F5.word("xy") + 3 * F5.word("yx")
    assert reduce_poly(5 * x * x - 10 * y * y, 5).is_zero()
    with pytest.raises(NotIntegralError):
        reduce_poly(Fraction(1, 5) * x, 5)


def test_p_local_smith_examples():
    s = p_local_smith([[3, 0], [0, 1]], 3)
    assert (s.rank, s.exponents) == (2, (0, 1))
    s = p_local_smith([[1, 0], [2, 0]], 3)
    assert (s.rank, s.exponents) == (1, (0,))
    s = p_local_smith([[1, 1], [1, 10]], 3)
    assert (s.rank, s.exponents) == (2, (0, 2))
    assert oracles.elementary_exponents([[1, 1], [1, 10]], 3) == [0, 2]
    with pytest.raises(NotIntegralError):
        p_local_smith([[Fraction(1, 3)]], 3)


def test_scaled_degree_examples():
    assert scaled_degree(3, 2) == 2
    assert scaled_degree(5, 1) == 5
    assert scaled_degree(-3, 2) == -1
    with pytest.raises(ValueError):
        scaled_degree(1, 0)


rationals = st.fractions(max_denominator=200).filter(lambda q: abs(q) < 10 ** 6)
primes = st.sampled_from([2, 3, 5, 7, 11])


@settings(max_examples=300, deadline=None)
@given(rationals, rationals, primes)
def test_vp_is_a_valuation(q, r, p):
    assert vp(q * r, p) == vp(q, p) + vp(r, p)
    assert vp(q + r, p) >= min(vp(q, p), vp(r, p))


@settings(max_examples=300, deadline=None)
@given(rationals, rationals, primes)
def test_reduce_scalar_is_a_morphism(q, r, p):
    if vp(q, p) < 0 or vp(r, p) < 0:
        return
    fp = GF(p)
    a, b = int(reduce_scalar(q, p)), int(reduce_scalar(r, p))
    assert int(reduce_scalar(q + r, p)) == fp.add(a, b)
    assert int(reduce_scalar(q * r, p)) == fp.mul(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 7))
def test_scaled_degree_monotone(m, e):
    assert scaled_degree(m, e) == -((-m) // e) == math.ceil(Fraction(m, e))
    assert scaled_degree(m + 1, e) >= scaled_degree(m, e)
    assert scaled_degree(m + e, e) == scaled_degree(m, e) + 1


small_matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(small_matrices, primes)
def test_smith_against_minors(m, p):
    s = p_local_smith(m, p)
    assert list(s.exponents) == oracles.elementary_exponents(m, p)
    assert s.rank == oracles.dense_rank(m)
    assert s.unit_count == oracles.dense_rank(m, p)
    assert s.unit_count <= s.rank
    assert list(s.exponents) == sorted(s.exponents)
