"""Elements of the Iwasawa algebra Z_p[[X]] truncated modulo (p^prec, X^M).

A truncated series is treated as its polynomial representative of degree < M.
Compositions and preparations are exact for that representative; claims about
the underlying power series are certified only below ``X^(M - guard)``, the
guard band defaulting to the context precision ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

from . import _poly
from .errors import ContextMismatch, OutOfDisk, PrecisionExhausted
from .padic import INF, PadicContext, PadicNumber, int_valuation

DEFAULT_TRUNCATION = 48
DEFAULT_SLACK = 2


class IwasawaSeries:
    """A power series ``sum a_n X^n`` with ``0 <= n < M``, coefficients mod ``p^prec``."""

    __slots__ = ("ctx", "M", "prec", "coeffs")

    def __init__(self, ctx: PadicContext, coeffs: Sequence = (), M: int = DEFAULT_TRUNCATION,
                 prec: int | None = None):
        if M < 1:
            raise ValueError("truncation length must be positive")
        prec = ctx.N if prec is None else max(0, min(prec, ctx.N))
        mod = ctx.p ** prec
        cs = []
        for c in list(coeffs)[:M]:
            if isinstance(c, PadicNumber):
                c = c.residue(prec)
            elif isinstance(c, Fraction):
                c = PadicNumber.from_fraction(ctx, c).residue(prec)
            cs.append(int(c) % mod)
        cs.extend([0] * (M - len(cs)))
        self.ctx = ctx
        self.M = M
        self.prec = prec
        self.coeffs = tuple(cs)

    # -- constructors -----------------------------------------------------

    @classmethod
    def X(cls, ctx: PadicContext, M: int = DEFAULT_TRUNCATION) -> "IwasawaSeries":
        return cls(ctx, [0, 1], M)

    @classmethod
    def constant(cls, ctx: PadicContext, c, M: int = DEFAULT_TRUNCATION) -> "IwasawaSeries":
        return cls(ctx, [c], M)

    def like(self, coeffs, prec: int | None = None) -> "IwasawaSeries":
        return IwasawaSeries(self.ctx, coeffs, self.M, self.prec if prec is None else prec)

    # -- inspection -------------------------------------------------------

    @property
    def modulus(self) -> int:
        return self.ctx.p ** self.prec

    def coeff(self, n: int) -> PadicNumber:
        return PadicNumber.from_int(self.ctx, self.coeffs[n], prec=self.prec)

    def content_valuation(self) -> int | float:
        """Minimum valuation over the stored coefficients (``inf`` if all vanish)."""
        v = INF
        for c in self.coeffs:
            if c:
                v = min(v, int_valuation(c, self.ctx.p))
                if v == 0:
                    break
        return v

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0] % self.ctx.p != 0

    def degree(self) -> int:
        """Degree of the polynomial representative (-1 for zero)."""
        for n in range(self.M - 1, -1, -1):
            if self.coeffs[n]:
                return n
        return -1

    def certified_length(self, guard: int | None = None) -> int:
        return self.M - (self.ctx.N if guard is None else guard)

    def agrees_with(self, other: "IwasawaSeries", upto: int | None = None) -> bool:
        """Coefficientwise equality modulo (p^min(prec), X^upto)."""
        self._check(other)
        upto = self.M if upto is None else upto
        mod = self.ctx.p ** min(self.prec, other.prec)
        return all((a - b) % mod == 0 for a, b in zip(self.coeffs[:upto], other.coeffs[:upto]))

    # -- ring structure ---------------------------------------------------

    def _check(self, other: "IwasawaSeries"):
        if not isinstance(other, IwasawaSeries):
            raise TypeError(f"expected IwasawaSeries, got {type(other).__name__}")
        if other.ctx != self.ctx or other.M != self.M:
            raise ContextMismatch("series from different contexts or truncations")

    def _lift(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            return IwasawaSeries(self.ctx, [other], self.M)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        prec = min(self.prec, other.prec)
        return self.like(_poly.add(self.coeffs, other.coeffs, self.ctx.p ** prec), prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        prec = min(self.prec, other.prec)
        return self.like(_poly.sub(self.coeffs, other.coeffs, self.ctx.p ** prec), prec)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return self.like([-c for c in self.coeffs])

    def __mul__(self, other):
        other = self._lift(other)
        va, vb = self.content_valuation(), other.content_valuation()
        prec = min(self.prec + min(vb, self.ctx.N), other.prec + min(va, self.ctx.N), self.ctx.N)
        prod = _poly.mul_trunc(list(self.coeffs), list(other.coeffs), self.M, self.ctx.p ** prec)
        return self.like(prod, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = IwasawaSeries(self.ctx, [1], self.M)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, IwasawaSeries):
            return NotImplemented
        return (self.ctx == other.ctx and self.M == other.M and self.prec == other.prec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ctx, self.M, self.prec, self.coeffs))

    def __repr__(self):
        terms = []
        for n, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if n == 0 else f"{c}*X^{n}")
            if len(terms) == 6:
                terms.append("...")
                break
        body = " + ".join(terms) or "0"
        return f"IwasawaSeries({body} mod ({self.ctx.p}^{self.prec}, X^{self.M}))"


def ring(a: IwasawaSeries, b: IwasawaSeries, kind: str) -> IwasawaSeries:
    a._check(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown ring operation {kind!r}")


# -- Weierstrass preparation --------------------------------------------------


@dataclass(frozen=True)
class DistinguishedPoly:
    """Monic ``X^lam + a_{lam-1} X^(lam-1) + ... + a_0`` with every ``a_n`` divisible by p."""

    ctx: PadicContext
    coeffs: tuple  # a_0 .. a_{lam-1}, residues mod p^prec
    prec: int

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def as_list(self) -> list:
        return list(self.coeffs) + [1]

    def coefficients(self) -> list:
        return [PadicNumber.from_int(self.ctx, c, prec=self.prec) for c in self.as_list()]

    def series(self, M: int = DEFAULT_TRUNCATION) -> IwasawaSeries:
        return IwasawaSeries(self.ctx, self.as_list(), M, self.prec)


@dataclass(frozen=True)
class WeierstrassData:
    """``F = p^mu * P * U`` with P distinguished and U a unit.

    P and U are known modulo ``p^prec`` where ``prec = F.prec - mu``.
    """

    mu: int
    P: DistinguishedPoly
    U: IwasawaSeries

    @property
    def lam(self) -> int:
        return self.P.degree

    @property
    def prec(self) -> int:
        return self.P.prec

    def normal_form(self) -> IwasawaSeries:
        """The associate-class representative ``p^mu * P``."""
        ctx = self.U.ctx
        scale = ctx.p ** self.mu
        return IwasawaSeries(ctx, [c * scale for c in self.P.as_list()], self.U.M,
                             self.prec + self.mu)

    def recompose(self) -> IwasawaSeries:
        return self.normal_form() * IwasawaSeries(self.U.ctx, self.U.coeffs, self.U.M,
                                                  self.prec + self.mu)


def _scan(F: IwasawaSeries, guard: int | None):
    mu = F.content_valuation()
    if mu == INF:
        raise PrecisionExhausted("series vanishes at working precision; mu undeterminable")
    p = F.ctx.p
    scale = p ** mu
    lam = next(n for n, c in enumerate(F.coeffs) if (c // scale) % p)
    limit = F.certified_length(guard)
    if lam >= limit:
        raise PrecisionExhausted(
            f"first unit coefficient at X^{lam} lies outside the certified range X^{limit}")
    return mu, lam


def mu_lambda(F: IwasawaSeries, guard: int | None = None) -> tuple:
    """(mu, lambda) of F from its first unit coefficient after removing the p-content."""
    return _scan(F, guard)


@lru_cache(maxsize=8192)
def _prepare(ctx: PadicContext, M: int, prec: int, coeffs: tuple, guard: int | None):
    F = IwasawaSeries(ctx, coeffs, M, prec)
    mu, lam = _scan(F, guard)
    p = ctx.p
    wprec = prec - mu
    mod = p ** wprec
    G = [(c // p ** mu) % mod for c in coeffs]
    if lam == 0:
        return WeierstrassData(mu, DistinguishedPoly(ctx, (), wprec), IwasawaSeries(ctx, G, M, wprec))

    # Weierstrass division of X^lam by G = A + X^lam * B.  Each pass gains at
    # least one p-adic digit and consumes lam degrees of X-adic precision.
    L = M + (wprec + 1) * lam
    G = G + [0] * (L - M)
    A = G[:lam]
    B_inv = _poly.inv_trunc(G[lam:], L, mod)
    B_inv_A = _poly.mul_trunc(B_inv, A, L, mod)
    H = [0] * L
    H[lam] = 1
    q = [0] * L
    r = [0] * lam
    length = L
    for _ in range(wprec + 2):
        r = _poly.add(r, H[:lam], mod)
        tau = H[lam:length]
        length -= lam
        q = _poly.add(q[:length], _poly.mul_trunc(tau, B_inv, length, mod), mod)
        H = [(-c) % mod for c in _poly.mul_trunc(tau, B_inv_A, length, mod)]
        if not any(H):
            break
    else:  # pragma: no cover - each pass gains a digit, so this cannot happen
        raise PrecisionExhausted("Weierstrass division did not converge")
    P = tuple((-c) % mod for c in r)
    if any(c % p for c in P):  # pragma: no cover - structural invariant
        raise PrecisionExhausted("prepared polynomial is not distinguished")
    U = _poly.inv_trunc(q[:M], M, mod)
    return WeierstrassData(mu, DistinguishedPoly(ctx, P, wprec), IwasawaSeries(ctx, U, M, wprec))


def weierstrass_prep(F: IwasawaSeries, guard: int | None = None) -> WeierstrassData:
    """Factor ``F = p^mu * P * U``.

    Raises PrecisionExhausted when F vanishes at precision or its first unit
    coefficient (after removing ``p^mu``) is not below ``X^(M - guard)``.
    """
    return _prepare(F.ctx, F.M, F.prec, F.coeffs, guard)


def normal_form(F: IwasawaSeries, guard: int | None = None) -> IwasawaSeries:
    return weierstrass_prep(F, guard).normal_form()


# -- operators ------------------------------------------------------------------


def iota(F: IwasawaSeries) -> IwasawaSeries:
    """``F(1/(1+X) - 1)``, exact modulo X^M since the substituted series has no constant term.

    Uses ``(-X/(1+X))^n = sum_j (-1)^j C(j-1, n-1) X^j``.
    """
    mod = F.modulus
    a = F.coeffs
    out = [a[0]]
    row = [1]  # C(j-1, 0..j-1)
    for j in range(1, F.M):
        s = sum(row[n - 1] * a[n] for n in range(1, j + 1))
        out.append((-s if j % 2 else s) % mod)
        row = [1] + [(row[t - 1] + row[t]) % mod for t in range(1, len(row))] + [1]
    return F.like(out)


def twist(F: IwasawaSeries, m: int) -> IwasawaSeries:
    """Substitute ``X -> u^m (1+X) - 1``.

    The constant ``u^m - 1`` is divisible by p, so the coefficient of X^j only
    sees source coefficients of degree below ``j + prec``.
    """
    if m == 0:
        return F
    mod = F.modulus
    if mod == 1:
        return F
    um = pow(F.ctx.u, m, mod)
    c = (um - 1) % mod
    cpow = [1]
    while len(cpow) < F.prec and cpow[-1]:
        cpow.append(cpow[-1] * c % mod)
    out = []
    dj = 1
    for j in range(F.M):
        s = 0
        for k, ck in enumerate(cpow):
            n = j + k
            if n >= F.M:
                break
            a = F.coeffs[n]
            if a and ck:
                s += math.comb(n, j) * ck * a
        out.append(dj * s % mod)
        dj = dj * um % mod
    return F.like(out)


def eval_at(F: IwasawaSeries, x: PadicNumber) -> PadicNumber:
    """Evaluate F at x with ``v(x) >= 1``.

    The result is certified modulo ``p^min(F.prec, x.prec, M*v(x))``.
    """
    if x.ctx.p != F.ctx.p:
        raise ContextMismatch("evaluation point from a different prime")
    v = x.valuation()
    if v < 1:
        raise OutOfDisk(f"evaluation point has valuation {v}; need >= 1")
    cert = min(F.prec, x.prec, F.M * v if v != INF else INF)
    cert = int(cert)
    if cert <= 0:
        return PadicNumber.zero(F.ctx, cert)
    mod = F.ctx.p ** cert
    xi = x.residue(cert)
    acc = 0
    for a in reversed(F.coeffs):
        acc = (acc * xi + a) % mod
    return PadicNumber.from_int(F.ctx, acc, prec=cert)


def from_linear_factors(ctx: PadicContext, roots: Sequence, mu: int = 0,
                        M: int = DEFAULT_TRUNCATION) -> IwasawaSeries:
    """``p^mu * prod (X - r)`` for roots of positive valuation."""
    mod = ctx.modulus
    poly = [1]
    for r in roots:
        if not isinstance(r, PadicNumber):
            r = PadicNumber.from_fraction(ctx, r)
        if r.valuation() < 1:
            raise OutOfDisk(f"root {r!r} has valuation < 1")
        poly = _poly.polymul(poly, [(-r.residue(ctx.N)) % mod, 1], mod)
    scale = ctx.p ** mu
    return IwasawaSeries(ctx, [c * scale for c in poly], M)


# -- divisibility ----------------------------------------------------------------


class DivisionCheck(NamedTuple):
    divides: bool
    remainder_valuation: int | float
    precision: int


def _is_trivial(w: WeierstrassData) -> bool:
    return w.mu == 0 and w.lam == 0


def divide_check(F: IwasawaSeries, G: IwasawaSeries, guard: int | None = None,
                 slack: int = DEFAULT_SLACK) -> DivisionCheck:
    """Divisibility of G by F together with the remainder's certified valuation."""
    F._check(G)
    wf = weierstrass_prep(F, guard)
    wg = weierstrass_prep(G, guard)
    if _is_trivial(wf):
        return DivisionCheck(True, INF, wg.prec)
    if wf.mu > wg.mu:
        return DivisionCheck(False, 0, wg.prec)
    if wf.lam == 0:
        return DivisionCheck(True, INF, wg.prec)
    prec = min(wf.prec, wg.prec)
    mod = F.ctx.p ** prec
    _, rem = _poly.divmod_monic(wg.P.as_list(), wf.P.as_list(), mod)
    v = min((int_valuation(c, F.ctx.p) for c in rem), default=INF)
    if v >= prec - slack:
        return DivisionCheck(True, v, prec)
    if v < prec - 2 * slack:
        return DivisionCheck(False, v, prec)
    raise PrecisionExhausted(
        f"division remainder has valuation {v}, ambiguous at precision {prec}")


def divides(F: IwasawaSeries, G: IwasawaSeries, guard: int | None = None,
            slack: int = DEFAULT_SLACK) -> bool:
    """Whether F divides G in the Iwasawa algebra."""
    return divide_check(F, G, guard, slack).divides


def associates(F: IwasawaSeries, G: IwasawaSeries, guard: int | None = None,
               slack: int = DEFAULT_SLACK) -> bool:
    """Equality of (mu, P) Weierstrass data, i.e. of the generated ideals."""
    F._check(G)
    wf = weierstrass_prep(F, guard)
    wg = weierstrass_prep(G, guard)
    if wf.mu != wg.mu or wf.lam != wg.lam:
        return False
    prec = min(wf.prec, wg.prec)
    diff = _poly.sub(wf.P.coeffs, wg.P.coeffs, F.ctx.p ** prec)
    v = min((int_valuation(c, F.ctx.p) for c in diff), default=INF)
    if v >= prec - slack:
        return True
    if v < prec - 2 * slack:
        return False
    raise PrecisionExhausted(f"distinguished parts differ at valuation {v}; ambiguous")


# -- gcd by Euclid inside Lambda --------------------------------------------------


def gcd(F: IwasawaSeries, G: IwasawaSeries, guard: int | None = None,
        slack: int = DEFAULT_SLACK) -> IwasawaSeries:
    """Normalized gcd ``p^min(mu_F, mu_G) * D`` with D the distinguished gcd.

    D comes from the Euclidean algorithm on the distinguished parts.  Each
    remainder is classified zero/nonzero against the tracked precision, then
    replaced by the distinguished part of ``remainder / p^v``: units of Lambda
    do not change the gcd, and this keeps every step integral, so a step
    costs only the v digits of the remainder's content.
    """
    F._check(G)
    wf = weierstrass_prep(F, guard)
    wg = weierstrass_prep(G, guard)
    ctx, p = F.ctx, F.ctx.p
    mu = min(wf.mu, wg.mu)
    prec = min(wf.prec, wg.prec)
    a, b = wf.P.as_list(), wg.P.as_list()
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        mod = p ** prec
        _, r = _poly.divmod_monic(a, b, mod)
        v = min((int_valuation(c, p) for c in r), default=INF)
        if v >= prec - slack:
            break
        if v >= prec - 2 * slack:
            raise PrecisionExhausted(
                f"Euclidean remainder has valuation {v}, ambiguous at precision {prec}")
        prec -= v
        w = weierstrass_prep(IwasawaSeries(ctx, [c // p ** v for c in r], F.M, prec), guard)
        prec = min(prec, w.prec)
        a, b = [c % p ** prec for c in b], [c % p ** prec for c in w.P.as_list()]
    if len(b) == 1:
        prec = ctx.N
    elif prec <= slack:
        raise PrecisionExhausted(f"gcd known only modulo p^{prec}")
    scale = p ** mu
    return IwasawaSeries(ctx, [c * scale for c in b], F.M, min(prec + mu, ctx.N))
