from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncreduce import (GF, QQ, FreeAlgebra, NcPolynomial, Residue, StructureError, homogeneous_part,
                      homogenize, is_prime, leading_part, parse_rational, specialize)
from ncreduce.freealg import count_words, words_of_degree, words_up_to

F = FreeAlgebra("xy")
x, y = F.gens()
FT = FreeAlgebra("xyT")
X, Y, T = FT.gens()


def test_multiply_examples():
    assert x * y == F.word("xy")
    assert F.one() * (x * y - 2 * y * x) == x * y - 2 * y * x
    assert (x * y - 2 * y * x) * x == x * y * x - 2 * y * x * x


def test_mismatched_rings_rejected():
    with pytest.raises(StructureError):
        x * FreeAlgebra("xz").gen(0)
    with pytest.raises(StructureError):
        x + F.with_field(GF(5)).gen(0)


def test_homogeneous_part_examples():
    w = x * y - y * x - 1
    assert homogeneous_part(w, 2) == x * y - y * x
    assert homogeneous_part(w, 0) == F.scalar(-1)
    assert homogeneous_part(x, 5).is_zero()


def test_leading_part_examples():
    assert leading_part(x * y - y * x - 1) == x * y - y * x
    assert leading_part(x + x * x) == x * x
    assert leading_part(F.scalar(7)) == F.scalar(7)
    with pytest.raises(ValueError):
        leading_part(F.zero())


def test_homogenize_examples():
    t = 2
    assert homogenize(X * Y - Y * X - 1, t) == X * Y - Y * X - T * T
    assert homogenize(X * X - Y * Y, t) == X * X - Y * Y
    assert homogenize(X + 1, t) == X + T


def test_specialize_examples():
    f = X * Y - Y * X - T * T
    assert specialize(f, 2, 1) == X * Y - Y * X - 1
    assert specialize(f, 2, 0) == X * Y - Y * X
    assert specialize(T ** 3, 2, 0).is_zero()


def test_canonical_form_and_repr():
    f = x * y - 2 * y * x
    assert (f - f).terms == {}
    assert repr(f) == "x*y - 2*y*x"
    assert repr(F.zero()) == "0"
    assert F.scalar(0).terms == {}


def test_weighted_words():
    degs = (1, 2)
    assert words_of_degree(degs, 2) == ((0, 0), (1,))
    assert len(words_up_to(degs, 3)) == sum(count_words(degs, n) for n in range(4))
    assert [count_words((1, 1), n) for n in range(5)] == [1, 2, 4, 8, 16]
    # deglex: degree first, then letters
    ws = words_up_to((1, 1), 2)
    assert ws[:3] == ((), (0,), (1,))


def test_scalars():
    assert parse_rational("6/4") == Fraction(3, 2)
    assert parse_rational("-7") == -7
    for bad in ("1/0", "x", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)
    f5 = GF(5)
    assert f5.inv(3) == 2
    assert QQ("3/4") == Fraction(3, 4)
    with pytest.raises(ValueError):
        GF(6)
    r = Residue(3, 5)
    assert int(r * Residue(2, 5)) == 1
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2_147_483_647) and not is_prime(2_147_483_649)


# -- properties ---------------------------------------------------------------------

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
words = st.lists(st.integers(0, 1), max_size=4).map(tuple)


@st.composite
def polys(draw, ring=F, max_terms=6):
    terms = draw(st.dictionaries(words, coeffs, max_size=max_terms))
    return NcPolynomial(ring, terms)


@settings(max_examples=150, deadline=None)
@given(polys(), polys(), polys())
def test_associativity(f, g, h):
    assert (f * g) * h == f * (g * h)


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_grading(f, g):
    prod = f * g
    for n in range(9):
        expect = F.zero()
        for i in range(n + 1):
            expect = expect + homogeneous_part(f, i) * homogeneous_part(g, n - i)
        assert homogeneous_part(prod, n) == expect
    assert all(c != 0 for c in prod.terms.values())
    assert all(c != 0 for c in (f - g).terms.values())


@settings(max_examples=150, deadline=None)
@given(polys(FT))
def test_homogenization_round_trip(f):
    f = specialize(f, 2, 0)  # drop T from the random input
    if f.is_zero():
        return
    h = homogenize(f, 2)
    assert h.is_homogeneous()
    assert specialize(h, 2, 1) == f
    assert specialize(h, 2, 0) == leading_part(f)


@settings(max_examples=100, deadline=None)
@given(polys(F.with_field(GF(7))), polys(F.with_field(GF(7))), polys(F.with_field(GF(7))))
def test_associativity_mod_p(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert (f + g) * h == f * h + g * h
