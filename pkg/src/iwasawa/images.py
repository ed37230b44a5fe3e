"""The image lattice cut out by the evaluation conditions at ``u^j - 1``.

A :class:`SignedImageSpec` fixes constants ``c_0, ..., c_{k-2}`` and describes
the submodule ``C`` of pairs ``(F, G)`` with ``F(u^j - 1) = c_j G(u^j - 1)``
(or ``G(u^j - 1) = 0`` for an infinite constant).  The quotient ``Lambda^2 / C``
is computed through the evaluation map into ``Q_p^(k-1)``, on whose j-th
coordinate X acts by multiplication with ``u^j - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidGenerator, PrecisionExhausted
from .modules import CharElement
from .padic import INF, PadicContext, PadicNumber
from .series import (DEFAULT_SLACK, DEFAULT_TRUNCATION, IwasawaSeries, eval_at,
                     from_linear_factors, mu_lambda, normal_form, twist)


@dataclass(frozen=True)
class SignedImageSpec:
    k: int
    i: int
    u: PadicNumber
    c: tuple  # PadicNumber, or None for the infinite constant

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("weight must be at least 2")
        if len(self.c) != self.k - 1:
            raise ValueError(f"need exactly k-1 = {self.k - 1} constants, got {len(self.c)}")
        object.__setattr__(self, "c", tuple(self.c))
        p = self.u.ctx.p
        if self.u.valuation() != 0 or (self.u - 1).valuation() != 1:
            raise InvalidGenerator(f"u must be 1 mod {p} and not 1 mod {p * p}")

    @property
    def ctx(self) -> PadicContext:
        return PadicContext(self.u.ctx.p, self.u.ctx.N, self.u.residue())

    def points(self) -> list:
        return [self.u ** j - 1 for j in range(self.k - 1)]


def _classify_zero(d: PadicNumber, slack: int) -> bool:
    if d.is_zero() or d.e >= d.prec - slack:
        return True
    if d.e < d.prec - 2 * slack:
        return False
    raise PrecisionExhausted(f"cannot decide whether {d!r} vanishes")


def contains(spec: SignedImageSpec, F: IwasawaSeries, G: IwasawaSeries,
             slack: int = DEFAULT_SLACK) -> bool:
    """Whether ``(F, G)`` satisfies every evaluation condition of ``spec``."""
    for x, c in zip(spec.points(), spec.c):
        Fx, Gx = eval_at(F, x), eval_at(G, x)
        diff = Gx if c is None else Fx - c * Gx
        if not _classify_zero(diff, slack):
            return False
    return True


# -- exact linear algebra over Z_(p) -------------------------------------------


def _val(q: Fraction, p: int) -> int | float:
    if q == 0:
        return INF
    v, n, d = 0, q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _column_echelon(cols: list, p: int) -> list:
    """Z_(p)-basis of the lattice spanned by ``cols`` (lower triangular)."""
    cols = [list(c) for c in cols]
    n = len(cols[0])
    basis = []
    for r in range(n):
        live = [c for c in cols if c[r] != 0]
        if not live:
            continue
        piv = min(live, key=lambda c: _val(c[r], p))
        rest = []
        for c in cols:
            if c is piv:
                continue
            if c[r] != 0:
                m = c[r] / piv[r]
                c = [x - m * y for x, y in zip(c, piv)]
            if any(c):
                rest.append(c)
        basis.append(piv)
        cols = rest
    return basis


def _solve(B: list, v: list) -> list:
    """Solve ``sum_t y_t * B[t] = v`` for lower-triangular basis columns B."""
    n = len(v)
    pivots = [next(r for r in range(n) if b[r] != 0) for b in B]
    y = [Fraction(0)] * len(B)
    rem = list(v)
    for t, b in enumerate(B):
        r = pivots[t]
        y[t] = rem[r] / b[r]
        rem = [x - y[t] * z for x, z in zip(rem, b)]
    if any(rem):
        raise ArithmeticError("vector outside the lattice span")
    return y


def _charpoly(T: list) -> list:
    """Characteristic polynomial ``det(X - T)``, low degree first (Faddeev-LeVerrier)."""
    n = len(T)
    coeffs = [Fraction(0)] * n + [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # M_k = T M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(T M_k) / k
        Mk = [[sum(T[i][t] * Mk[t][j] for t in range(n)) + (c if i == j else 0)
               for j in range(n)] for i in range(n)]
        TM = [[sum(T[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(TM[i][i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs


def evaluation_lattice(spec: SignedImageSpec) -> tuple:
    """Z_(p)-basis of the image of ``Lambda^2`` under the evaluation map, and the points."""
    p = spec.u.ctx.p
    uq = spec.u.to_fraction()
    xs = [uq ** j - 1 for j in range(spec.k - 1)]
    alphas, betas = [], []
    for c in spec.c:
        if c is None:
            alphas.append(Fraction(0))
            betas.append(Fraction(-1))
        else:
            alphas.append(Fraction(1))
            betas.append(c.to_fraction())
    n = spec.k - 1
    gens = []
    for d in range(n):
        gens.append([a * x ** d for a, x in zip(alphas, xs)])
        gens.append([-b * x ** d for b, x in zip(betas, xs)])
    return _column_echelon(gens, p), xs


def quotient_invariants(spec: SignedImageSpec, M: int = DEFAULT_TRUNCATION,
                        slack: int = DEFAULT_SLACK) -> tuple:
    """(mu, lambda, char) of ``Lambda^2 / C``.

    The quotient embeds into ``Q_p^(k-1)`` as the Z_p-lattice spanned by the
    images of ``(X^d, 0)`` and ``(0, X^d)``; X acts on it through an integral
    matrix whose characteristic polynomial is the characteristic element.
    """
    p = spec.u.ctx.p
    ctx = spec.ctx
    basis, xs = evaluation_lattice(spec)
    n = spec.k - 1
    if len(basis) != n:
        raise PrecisionExhausted(f"evaluation lattice has rank {len(basis)} < {n}")
    # matrix of X in the lattice basis: column t holds the coordinates of X * b_t
    cols = [_solve(basis, [x * v for x, v in zip(xs, b)]) for b in basis]
    T = [[cols[j][i] for j in range(n)] for i in range(n)]
    if any(_val(e, p) < 0 for row in T for e in row):
        raise PrecisionExhausted("lattice is not stable under X")
    char_series = IwasawaSeries(ctx, _charpoly(T), M)
    mu, lam = mu_lambda(char_series)
    if lam != n:
        raise PrecisionExhausted(f"characteristic polynomial has lambda {lam}, lattice rank {n}")
    _check_model(spec, char_series, xs, slack)
    return mu, lam, CharElement(normal_form(char_series))


def _check_model(spec, char_series, xs, slack):
    """Sample membership: multiples of the characteristic polynomial lie in C,
    and the monomial pairs lie in C exactly when their evaluation vector vanishes."""
    ctx = spec.ctx
    M = char_series.M
    X = IwasawaSeries.X(ctx, M)
    zero = IwasawaSeries(ctx, [], M)
    samples = [X ** d for d in range(spec.k - 1)] + [1 + X, X + ctx.p]
    for S in samples:
        if not (contains(spec, char_series * S, zero, slack)
                and contains(spec, zero, char_series * S, slack)):
            raise PrecisionExhausted("characteristic multiple outside the image model")
    for d in range(spec.k - 1):
        mono = X ** d
        expect_f = all(x ** d == 0 for x, c in zip(xs, spec.c) if c is not None)
        expect_g = all((c is not None and c.is_zero()) or x ** d == 0
                       for x, c in zip(xs, spec.c))
        for pair, expect in (((mono, zero), expect_f), ((zero, mono), expect_g)):
            try:
                got = contains(spec, *pair, slack)
            except PrecisionExhausted:
                continue  # an undecidable sample says nothing against the model
            if got != expect:
                raise PrecisionExhausted("membership sample disagrees with evaluation model")


def eta(k: int, i: int, u: PadicNumber, M: int = DEFAULT_TRUNCATION) -> CharElement:
    """Normal form of the twist by ``i - k + 1`` of ``prod_{j<k-1} (X - u^j + 1)``."""
    if k < 2:
        raise ValueError("weight must be at least 2")
    ctx = PadicContext(u.ctx.p, u.ctx.N, u.residue())
    uu = PadicNumber.from_int(ctx, u.residue())
    base = from_linear_factors(ctx, [uu ** j - 1 for j in range(k - 1)], 0, M)
    return CharElement(normal_form(twist(base, i - k + 1)))


def eta_roots(k: int, i: int, u: PadicNumber) -> list:
    """The roots ``u^(j+k-1-i) - 1`` predicted by the root-shift law."""
    return [u ** (j + k - 1 - i) - 1 for j in range(k - 1)]
