"""Seeded generators of test inputs with known invariants."""

import random

from iwasawa import IwasawaSeries, PadicContext


def structured_series(rng: random.Random, ctx: PadicContext, M: int = 48, max_lam: int = 35,
                      max_mu: int = 5):
    """``p^mu * P * U`` with P distinguished of degree lam; returns (F, mu, lam)."""
    p, mod = ctx.p, ctx.modulus
    lam = rng.randint(0, max_lam)
    mu = rng.randint(0, min(max_mu, ctx.N - 1))
    coeffs = [p * rng.randrange(mod) % mod for _ in range(lam)] + [1]
    P = IwasawaSeries(ctx, coeffs, M)
    ulen = rng.randint(1, M)
    u = [rng.randrange(1, p) + p * rng.randrange(mod)] + [rng.randrange(mod)
                                                        for _ in range(ulen - 1)]
    U = IwasawaSeries(ctx, u, M)
    return P * U * p ** mu, mu, lam


def random_series(rng: random.Random, ctx: PadicContext, M: int = 48):
    return IwasawaSeries(ctx, [rng.randrange(ctx.modulus) for _ in range(M)], M)
