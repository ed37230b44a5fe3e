import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iwasawa import (InvalidGenerator, IwasawaSeries, PadicContext, PadicNumber, associates,
                     divides, eval_at, from_linear_factors, mu_lambda)
from iwasawa.images import SignedImageSpec, contains, eta, eta_roots, quotient_invariants

CTX = PadicContext(3, 12)
X = IwasawaSeries.X(CTX)
U = PadicNumber.from_int(CTX, 4)
ZERO = X * 0


def const(q):
    return PadicNumber.from_fraction(CTX, Fraction(q))


def product_of_points(k):
    return from_linear_factors(CTX, [U ** j - 1 for j in range(k - 1)])


def random_constant(rng, p=3):
    pick = rng.random()
    if pick < 0.1:
        return None
    if pick < 0.2:
        return const(0)
    return const(Fraction(rng.randrange(1, p ** 3) * (1 if rng.random() < .5 else -1))
                 * Fraction(p) ** rng.randint(-3, 3))


def test_contains_examples():
    one = SignedImageSpec(2, 0, U, (const(1),))
    assert contains(one, X + 1, X + 1)
    assert not contains(one, X, X ** 0)
    spec = SignedImageSpec(3, 0, U, (const(1), const(2)))
    assert contains(spec, X * (X - 3), ZERO)


def test_spec_validation():
    with pytest.raises(ValueError):
        SignedImageSpec(3, 0, U, (const(1),))
    with pytest.raises(InvalidGenerator):
        SignedImageSpec(2, 0, PadicNumber.from_int(CTX, 10), (const(1),))


@pytest.mark.parametrize("c", [const(1), const(0), const(Fraction(1, 27)), None])
def test_weight_two_quotient(c):
    mu, lam, char = quotient_invariants(SignedImageSpec(2, 0, U, (c,)))
    assert (mu, lam) == (0, 1) and associates(char.value, X)


def test_weight_three_quotient():
    mu, lam, char = quotient_invariants(SignedImageSpec(3, 0, U, (const(1), const(2))))
    assert (mu, lam) == (0, 2) and associates(char.value, X * (X - 3))


@pytest.mark.parametrize("k", [2, 4, 6])
def test_split_case(k):
    spec = SignedImageSpec(k, 0, U, tuple(const(0) for _ in range(k - 1)))
    mu, lam, char = quotient_invariants(spec)
    assert (mu, lam) == (0, k - 1) and associates(char.value, product_of_points(k))


@given(st.integers(0, 10 ** 6), st.integers(2, 6))
def test_char_independent_of_constants(seed, k):
    rng = random.Random(seed)
    spec = SignedImageSpec(k, 0, U, tuple(random_constant(rng) for _ in range(k - 1)))
    mu, lam, char = quotient_invariants(spec)
    assert (mu, lam) == (0, k - 1)
    assert associates(char.value, product_of_points(k))


@given(st.integers(0, 10 ** 6))
def test_membership_is_a_submodule(seed):
    rng = random.Random(seed)
    k = rng.randint(2, 4)
    spec = SignedImageSpec(k, 0, U, tuple(random_constant(rng) for _ in range(k - 1)))
    P = product_of_points(k)

    def member():
        # (P*A, P*B) always lies in the image; so does any pair built from the evaluation rule
        return P * rng.randrange(50), P * (X + rng.randrange(50))

    (F1, G1), (F2, G2) = member(), member()
    S = 1 + X * rng.randrange(9)
    assert contains(spec, F1 + F2, G1 + G2)
    assert contains(spec, F1 * S, G1 * S)


def test_eta_examples():
    assert eta(2, 1, U).value == X
    assert associates(eta(2, 0, U).value, X - 3)
    assert associates(eta(3, 2, U).value, X * (X - 3))


@pytest.mark.parametrize("k,i", [(k, i) for k in range(2, 7) for i in (-3, 0, 2, 5)])
def test_eta_root_shift(k, i):
    e = eta(k, i, U)
    assert mu_lambda(e.value) == (0, k - 1)
    for r in eta_roots(k, i, U):
        assert eval_at(e.value, r).is_zero()
    assert not divides(X ** 0 * 3, e.value)


def test_eta_needs_weight_two():
    with pytest.raises(ValueError):
        eta(1, 0, U)
