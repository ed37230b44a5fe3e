from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iwasawa import (ContextMismatch, DivisionByZero, InvalidGenerator, PadicContext,
                     PadicNumber, SchemaError, arith, cyclotomic_u, valuation)
from oracles import reduce_frac, vp


def num(ctx, q):
    return PadicNumber.from_fraction(ctx, Fraction(q))


C4 = PadicContext(3, 4)


def test_sum_gains_valuation():
    r = arith(num(C4, 3), num(C4, 6), "add")
    assert (r.e, r.unit) == (2, 1)


def test_cancellation_is_zero_flag():
    assert arith(num(C4, 1), num(C4, 1), "sub").is_zero()


def test_product_with_negative_valuation():
    r = arith(num(C4, Fraction(1, 3)), num(C4, 6), "mul")
    assert (r.e, r.unit) == (0, 2)


@pytest.mark.parametrize("q,v", [(9, 2), (2, 0), (Fraction(2, 9), -2)])
def test_valuation(q, v):
    assert valuation(num(PadicContext(3, 8), q)) == v


def test_valuation_of_zero_is_infinite():
    assert valuation(PadicNumber.zero(C4)) == float("inf")


def test_default_generator():
    assert cyclotomic_u(PadicContext(3, 6)).residue() == 4
    assert cyclotomic_u(PadicContext(5, 6)).residue() == 6


def test_generator_override():
    assert cyclotomic_u(PadicContext(3, 6, 7)).residue() == 7
    # 10 = 1 + 9 is 1 mod p^2, so it generates only 1 + 9Z_3
    for bad in (1, 2, 10, 19):
        with pytest.raises(InvalidGenerator):
            PadicContext(3, 6, bad)


@pytest.mark.parametrize("p,N", [(2, 5), (9, 5), (3, 0)])
def test_bad_context(p, N):
    with pytest.raises(ValueError):
        PadicContext(p, N)


def test_division_by_zero_and_context_mismatch():
    with pytest.raises(DivisionByZero):
        num(C4, 1) / PadicNumber.zero(C4)
    with pytest.raises(ContextMismatch):
        num(C4, 1) + num(PadicContext(5, 4), 1)


rationals = st.builds(Fraction, st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 4))


@given(st.sampled_from([3, 5, 7]), rationals, rationals, st.sampled_from(["add", "sub", "mul"]))
def test_matches_rational_arithmetic(p, a, b, kind):
    ctx = PadicContext(p, 8)
    r = arith(num(ctx, a), num(ctx, b), kind)
    exact = {"add": a + b, "sub": a - b, "mul": a * b}[kind]
    if r.is_zero():
        assert vp(exact, p) >= r.prec
        return
    # compare the unit parts at the certified relative precision
    rel = r.prec - r.e
    assert vp(exact, p) == r.e
    assert reduce_frac(exact / Fraction(p) ** r.e, p, rel) == r.unit % p ** rel


@given(st.sampled_from([3, 5, 7]), rationals, rationals)
def test_valuation_is_additive(p, a, b):
    ctx = PadicContext(p, 8)
    x, y = num(ctx, a), num(ctx, b)
    if x.is_zero() or y.is_zero():
        return
    assert valuation(x * y) == valuation(x) + valuation(y)


@given(st.sampled_from([3, 5, 7]), rationals)
def test_division_inverts_multiplication(p, a):
    ctx = PadicContext(p, 8)
    x = num(ctx, a)
    if x.is_zero():
        return
    y = num(ctx, 7 * p + 1)
    assert ((x * y) / y).equals(x)


@given(st.sampled_from([3, 5, 7]), rationals)
def test_renormalizing_is_identity(p, a):
    ctx = PadicContext(p, 8)
    x = num(ctx, a)
    again = PadicNumber(ctx, x.e, x.unit, x.prec)
    assert again == x


@given(st.sampled_from([3, 5, 7]), rationals)
def test_document_round_trip(p, a):
    ctx = PadicContext(p, 8)
    x = num(ctx, a)
    assert PadicNumber.from_dict(ctx, x.to_dict()) == x


@pytest.mark.parametrize("doc", [[], {"e": 0}, {"e": "x", "u": "1"}, {"e": 0, "u": "3"}])
def test_bad_documents(doc):
    with pytest.raises(SchemaError):
        PadicNumber.from_dict(C4, doc)
