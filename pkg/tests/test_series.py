import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iwasawa import (ContextMismatch, IwasawaSeries, OutOfDisk, PadicContext, PadicNumber,
                     PrecisionExhausted, associates, divides, eval_at, from_linear_factors, gcd,
                     iota, mu_lambda, normal_form, ring, twist, weierstrass_prep)
from gen import structured_series
from oracles import (first_unit_scan, horner_compose, horner_eval, iota_substitution,
                     newton_root, poly_divides_mod, poly_from_roots, poly_mul, reduce_frac,
                     twist_substitution)

CTX = PadicContext(3, 12)
X = IwasawaSeries.X(CTX)
ONE = IwasawaSeries(CTX, [1])


def S(*coeffs, ctx=CTX):
    return IwasawaSeries(ctx, list(coeffs))


# -- ring -----------------------------------------------------------------------


def test_ring_examples():
    assert ring(X, X, "mul") == S(0, 0, 1)
    geometric = S(*[(-1) ** n for n in range(48)])
    assert (1 + X) * geometric == ONE
    assert (X + 3) * (X + 6) == S(18, 9, 1)


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        X + IwasawaSeries.X(PadicContext(5, 12))
    with pytest.raises(ContextMismatch):
        X + IwasawaSeries.X(CTX, 40)


@given(st.lists(st.integers(0, 3 ** 12 - 1), min_size=1, max_size=30),
       st.lists(st.integers(0, 3 ** 12 - 1), min_size=1, max_size=30))
def test_product_matches_schoolbook(a, b):
    exact = poly_mul(a, b)[:48]
    got = S(*a) * S(*b)
    assert list(got.coeffs[:len(exact)]) == [c % 3 ** 12 for c in exact]


# -- preparation ----------------------------------------------------------------


def test_prepare_distinguished_input():
    w = weierstrass_prep(X + 3)
    assert (w.mu, w.P.as_list(), w.U) == (0, [3, 1], ONE)


def test_prepare_pure_power_of_p():
    w = weierstrass_prep(S(3, 3))
    assert (w.mu, w.lam) == (1, 0)
    assert w.U.prec == 11 and w.U.agrees_with(1 + X)


def test_prepare_round_trip_and_newton_root():
    F = S(3, 1, 1)
    w = weierstrass_prep(F)
    assert (w.mu, w.lam) == (0, 1)
    assert w.recompose().agrees_with(F, 36)
    root = newton_root([3, 1, 1], 3, 12)
    assert (-w.P.as_list()[0]) % 3 ** 12 == root


@pytest.mark.parametrize("F,expected", [
    (3 * X * X, (1, 2)),
    (1 + X, (0, 0)),
    (9 * (X + 3) * (X * X + 3), (2, 3)),
])
def test_mu_lambda_examples(F, expected):
    assert mu_lambda(F) == expected


def test_vanishing_series_exhausts_precision():
    with pytest.raises(PrecisionExhausted):
        mu_lambda(X * 0)
    with pytest.raises(PrecisionExhausted):
        mu_lambda(X ** 40)


@given(st.integers(0, 10 ** 6), st.sampled_from([3, 5, 7]))
def test_preparation_round_trip(seed, p):
    ctx = PadicContext(p, 12)
    F, mu, lam = structured_series(random.Random(seed), ctx)
    w = weierstrass_prep(F)
    assert (w.mu, w.lam) == (mu, lam) == first_unit_scan(F.coeffs, p)
    assert w.recompose().agrees_with(F, 36)
    assert w.U.coeffs[0] % p != 0


@given(st.integers(0, 10 ** 6))
def test_linear_factor_matches_newton(seed):
    rng = random.Random(seed)
    r = 3 * rng.randrange(3 ** 11)
    U = S(1 + 3 * rng.randrange(100), rng.randrange(100), rng.randrange(100))
    F = (X - r) * U
    P = weierstrass_prep(F).P.as_list()
    poly = [int(c) for c in F.coeffs]
    assert (-P[0]) % 3 ** 12 == newton_root(poly, 3, 12)


# -- iota and twists ---------------------------------------------------------------


def test_iota_examples():
    assert iota(X) == S(*[0] + [(-1) ** j for j in range(1, 48)])
    assert iota(ONE) == ONE
    assert iota(iota(X + 3)).agrees_with(X + 3, 36)


def test_twist_examples():
    assert twist(X, 1) == S(3, 4)
    F = S(5, 7, 3, 9)
    assert twist(F, 0) == F
    assert twist(twist(X + 3, 2), -2).agrees_with(X + 3, 36)


def _residues(fracs, N, p=3):
    return [reduce_frac(q, p, N) for q in fracs]


@given(st.lists(st.integers(0, 3 ** 12 - 1), min_size=1, max_size=20))
def test_iota_matches_horner(a):
    F = S(*a)
    expect = _residues(horner_compose(a, iota_substitution(48), 48), 12)
    assert list(iota(F).coeffs) == expect


@given(st.lists(st.integers(0, 3 ** 12 - 1), min_size=1, max_size=20), st.integers(-3, 3))
def test_twist_matches_horner(a, m):
    F = S(*a)
    expect = _residues(horner_compose(a, twist_substitution(4, m, 48), 48), 12)
    assert list(twist(F, m).coeffs) == expect


@given(st.lists(st.integers(0, 3 ** 12 - 1), min_size=1, max_size=48))
def test_iota_is_an_involution(a):
    F = S(*a)
    assert iota(iota(F)).agrees_with(F, 36)


@given(st.lists(st.integers(0, 3 ** 12 - 1), min_size=1, max_size=48),
       st.integers(-3, 3), st.integers(-3, 3))
def test_twists_compose(a, m, n):
    F = S(*a)
    assert twist(twist(F, m), n).agrees_with(twist(F, m + n), 36)


# -- evaluation -----------------------------------------------------------------


def test_eval_examples():
    three = PadicNumber.from_int(CTX, 3)
    assert eval_at(X, three).equals(three)
    assert eval_at(X - 3, three).is_zero()
    r = eval_at(twist(X, 1), three)
    assert r.equals(PadicNumber.from_int(CTX, 15)) and (r.e, r.unit) == (1, 5)


def test_eval_outside_disk():
    with pytest.raises(OutOfDisk):
        eval_at(X, PadicNumber.from_int(CTX, 1))


@given(st.lists(st.integers(0, 3 ** 12 - 1), min_size=1, max_size=48), st.integers(0, 20))
def test_eval_matches_rational_horner(a, t):
    x = 3 * t + 3
    got = eval_at(S(*a), PadicNumber.from_int(CTX, x))
    assert got.residue(got.prec) == horner_eval(a, x) % 3 ** got.prec


# -- divisibility, gcd, associates ------------------------------------------------


def test_divides_examples():
    assert divides(X, X * X + 3 * X)
    assert not divides(X, X + 3)
    assert divides(X + 3, (X + 3) * (X * X + 3))


def test_unit_divides_everything():
    assert divides(1 + X, X + 3)


def test_gcd_examples():
    g = gcd(X * (X + 3), X * (X + 6))
    assert g.agrees_with(X) and g.prec >= 10
    assert gcd(X, 1 + X) == ONE
    assert gcd(3 * X, S(9)) == S(3)


def test_associates_examples():
    assert associates(X, iota(X))
    assert not associates(X, 3 * X)
    assert not associates(X + 3, X + 6)


def test_from_linear_factors():
    assert from_linear_factors(CTX, [0]) == X
    assert from_linear_factors(CTX, [0, 3]) == X * X - 3 * X
    assert from_linear_factors(CTX, [], mu=2) == S(9)


def _roots(rng, n):
    # roots pairwise apart at valuation <= 2 so that divisibility is decided well above slack
    pool = [3 * t for t in range(9)]
    return rng.sample(pool, n)


@given(st.integers(0, 10 ** 6))
def test_divides_matches_long_division(seed):
    rng = random.Random(seed)
    roots = _roots(rng, 5)
    f_roots, g_roots = roots[:rng.randint(1, 2)], rng.sample(roots, rng.randint(1, 4))
    f, g = poly_from_roots(f_roots), poly_from_roots(g_roots)
    U = S(1 + 3 * rng.randrange(50), rng.randrange(50))
    got = divides(S(*[c % 3 ** 12 for c in f]), S(*[c % 3 ** 12 for c in g]) * U)
    assert got == poly_divides_mod(f, g, 3, 12)
    assert got == (set(f_roots) <= set(g_roots))


@given(st.integers(0, 10 ** 6))
def test_gcd_matches_common_roots(seed):
    # deciding coprimality needs the resultant (valuation up to 9 * 2 here) below precision
    ctx = PadicContext(3, 30)
    X30 = IwasawaSeries.X(ctx)
    rng = random.Random(seed)
    roots = _roots(rng, 6)
    a, b = rng.sample(roots, rng.randint(1, 3)), rng.sample(roots, rng.randint(1, 3))
    common = sorted(set(a) & set(b))
    mu_a, mu_b = rng.randint(0, 2), rng.randint(0, 2)
    F = from_linear_factors(ctx, a, mu_a) * (1 + 3 * X30)
    G = from_linear_factors(ctx, b, mu_b) * (2 + X30)
    g = gcd(F, G)
    assert associates(g, from_linear_factors(ctx, common, min(mu_a, mu_b)))


def test_gcd_refuses_undecidable_coprimality():
    # resultant of these distinguished parts has valuation 10 = certified precision
    F = from_linear_factors(CTX, [6, 12, 18, 0], 2)
    G = from_linear_factors(CTX, [3, 21], 1)
    with pytest.raises(PrecisionExhausted):
        gcd(F, G)


@given(st.integers(0, 10 ** 6))
def test_normal_form_is_idempotent(seed):
    F, _, _ = structured_series(random.Random(seed), CTX, max_lam=10)
    N1 = normal_form(F)
    assert normal_form(N1) == N1
    assert associates(N1, F)


def test_fraction_coefficients():
    F = IwasawaSeries(CTX, [Fraction(1, 2), 1])
    assert (F * 2).agrees_with(S(1, 2))
