"""Divisibility criteria relating fine and signed characteristic elements.

A :class:`GateScenario` carries the characteristic elements of the two fine
Selmer groups, of the two signed Selmer groups and of ``eta``.  The checks
below evaluate both sides of the divisibility equivalences probe by probe;
:func:`oracle_check` re-derives the same answers from the factor multisets the
synthetic generator recorded, without any series division.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

from . import _poly
from .errors import HypothesisViolated
from .images import eta as eta_element
from .modules import CharElement
from .padic import PadicContext, PadicNumber, int_valuation
from .series import (DEFAULT_TRUNCATION, IwasawaSeries, divides, gcd, iota, mu_lambda,
                     weierstrass_prep)

DEFAULT_SCENARIO_PRECISION = 24
ROOT_SEPARATION = 3  # pool roots pairwise differ at valuation <= this
MAX_POOL_ATTEMPTS = 2000


@dataclass(frozen=True)
class Factor:
    """An irreducible of Lambda: p itself, or a monic distinguished polynomial.

    ``coeffs`` lists the monic polynomial low degree first, residues mod p^N.
    """

    p: int
    coeffs: tuple = ()

    @property
    def is_p(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    @classmethod
    def prime(cls, p: int) -> "Factor":
        return cls(p)

    @classmethod
    def linear(cls, ctx: PadicContext, root) -> "Factor":
        r = root if isinstance(root, PadicNumber) else PadicNumber.from_fraction(ctx, root)
        if r.valuation() < 1:
            raise ValueError("root must have positive valuation")
        return cls(ctx.p, ((-r.residue(ctx.N)) % ctx.modulus, 1))

    @classmethod
    def eisenstein(cls, ctx: PadicContext, a: int, b: int) -> "Factor":
        """``X^2 + p*a*X + p*b`` with p not dividing b."""
        if b % ctx.p == 0:
            raise ValueError("constant term must have valuation exactly 1")
        mod = ctx.modulus
        return cls(ctx.p, (ctx.p * b % mod, ctx.p * a % mod, 1))

    def series(self, ctx: PadicContext, M: int = DEFAULT_TRUNCATION) -> IwasawaSeries:
        return IwasawaSeries(ctx, [self.p] if self.is_p else self.coeffs, M)

    def iota_partner(self, ctx: PadicContext) -> "Factor":
        """Monic form of ``(1+X)^d P(-X/(1+X))``, computed on coefficients."""
        if self.is_p:
            return self
        mod = ctx.modulus
        d = self.degree
        acc = [0] * (d + 1)
        for n, a in enumerate(self.coeffs):
            term = [a * (-1) ** n % mod]
            term = _poly.polymul(term, [0] * n + [1], mod)
            for _ in range(d - n):
                term = _poly.polymul(term, [1, 1], mod)
            acc = _poly.add(acc, term, mod)
        inv = pow(acc[d], -1, mod)
        return Factor(self.p, tuple(c * inv % mod for c in acc))

    def root(self, ctx: PadicContext) -> int | None:
        if self.degree == 1:
            return (-self.coeffs[0]) % ctx.modulus
        return None

    def to_doc(self):
        return "p" if self.is_p else [str(c) for c in self.coeffs]

    @classmethod
    def from_doc(cls, ctx: PadicContext, doc) -> "Factor":
        if doc == "p":
            return cls(ctx.p)
        return cls(ctx.p, tuple(int(c) % ctx.modulus for c in doc))


@dataclass(frozen=True)
class IrreducibleProbe:
    F: IwasawaSeries
    asserted_irreducible: bool = True
    is_p: bool = False
    factor: Factor | None = None

    @classmethod
    def of(cls, f: Factor, ctx: PadicContext, M: int = DEFAULT_TRUNCATION) -> "IrreducibleProbe":
        return cls(f.series(ctx, M), True, f.is_p, f)


@dataclass
class Construction:
    """Factor multisets recorded by the generator."""

    fine_f: Counter
    fine_fbar: Counter
    g0: Counter
    r_sharp: Counter
    r_flat: Counter
    eta_support: frozenset
    extra_sharp: Counter = field(default_factory=Counter)
    extra_flat: Counter = field(default_factory=Counter)

    @property
    def sharp(self) -> Counter:
        return self.g0 + self.r_sharp + self.extra_sharp

    @property
    def flat(self) -> Counter:
        return self.g0 + self.r_flat + self.extra_flat

    @property
    def consistent(self) -> bool:
        """Whether the signed elements share exactly G0."""
        return (self.sharp & self.flat) == self.g0


@dataclass
class GateScenario:
    fine_f: CharElement
    fine_fbar: CharElement
    sharp: CharElement
    flat: CharElement
    eta: CharElement
    k: int
    i: int
    u: PadicNumber
    assumptions: dict = field(default_factory=lambda: {"h_imc": True, "h0": True})
    consistent: bool = False
    pool: list = field(default_factory=list)
    construction: Construction | None = None

    @property
    def ctx(self) -> PadicContext:
        return self.fine_f.value.ctx

    @cached_property
    def signed_gcd(self) -> IwasawaSeries:
        return gcd(self.sharp.value, self.flat.value)


class GateResult(NamedTuple):
    lhs: bool
    rhs: bool


class MuResult(NamedTuple):
    a: bool
    b: bool


def _iota_divides(F: IwasawaSeries, G: IwasawaSeries) -> bool:
    # iota preserves irreducibility but not monicity; divides works on the prepared form
    return divides(weierstrass_prep(iota(F)).normal_form(), G)


def gate_check(s: GateScenario, probe: IrreducibleProbe) -> GateResult:
    """Both sides of: F^iota and F avoid fine_f and fine_fbar  <=>  F avoids gcd(sharp, flat)."""
    F = probe.F
    if divides(F, s.eta.value):
        raise HypothesisViolated("probe divides eta")
    lhs = not _iota_divides(F, s.fine_f.value) and not divides(F, s.fine_fbar.value)
    rhs = not divides(F, s.signed_gcd)
    return GateResult(lhs, rhs)


def fine_gate_check(s: GateScenario, probe: IrreducibleProbe) -> GateResult:
    """Both sides of: F^iota avoids fine_f  <=>  F avoids gcd(sharp, flat), for F avoiding fine_fbar."""
    F = probe.F
    if divides(F, s.eta.value):
        raise HypothesisViolated("probe divides eta")
    if divides(F, s.fine_fbar.value):
        raise HypothesisViolated("probe divides the fine characteristic element of the conjugate")
    return GateResult(not _iota_divides(F, s.fine_f.value), not divides(F, s.signed_gcd))


def mu_corollary(s: GateScenario) -> MuResult:
    a = mu_lambda(s.fine_f.value)[0] == 0 and mu_lambda(s.fine_fbar.value)[0] == 0
    b = min(mu_lambda(s.sharp.value)[0], mu_lambda(s.flat.value)[0]) == 0
    return MuResult(a, b)


# -- synthetic scenarios ----------------------------------------------------------


@dataclass(frozen=True)
class SynthConfig:
    k: int = 2
    i: int = 0
    pool_size: int = 10
    mu_budget: int = 0
    p: int = 3
    precision: int = DEFAULT_SCENARIO_PRECISION
    truncation: int = DEFAULT_TRUNCATION
    eta_slack: bool | None = None  # None: decided by the seed


def _product(ctx, factors: Counter, M: int) -> IwasawaSeries:
    out = IwasawaSeries(ctx, [1], M)
    for f, n in sorted(factors.items(), key=lambda kv: (kv[0].is_p, kv[0].coeffs)):
        for _ in range(n):
            out = out * f.series(ctx, M)
    return out


def eta_support(ctx: PadicContext, k: int, i: int) -> list:
    """Linear factors of eta predicted by the root-shift law."""
    u = PadicNumber.from_int(ctx, ctx.u)
    return [Factor.linear(ctx, u ** s - 1) for s in range(k - 1 - i, 2 * k - 2 - i)]


def build_scenario(ctx: PadicContext, k: int, i: int, fine_f: Counter, fine_fbar: Counter,
                   r_sharp: Counter, r_flat: Counter, pool: Sequence[Factor],
                   slack: Counter | None = None, M: int = DEFAULT_TRUNCATION) -> GateScenario:
    """Assemble a scenario whose signed elements share exactly
    ``G0 = fine_fbar * iota(fine_f) * slack``."""
    g0 = Counter(fine_fbar)
    for f, n in fine_f.items():
        g0[f.iota_partner(ctx)] += n
    if slack:
        g0 += slack
    support = frozenset(eta_support(ctx, k, i)) | frozenset(slack or ())
    cons = Construction(Counter(fine_f), Counter(fine_fbar), g0, Counter(r_sharp),
                        Counter(r_flat), support)
    u = PadicNumber.from_int(ctx, ctx.u)
    return GateScenario(
        fine_f=CharElement(_product(ctx, cons.fine_f, M)),
        fine_fbar=CharElement(_product(ctx, cons.fine_fbar, M)),
        sharp=CharElement(_product(ctx, cons.sharp, M)),
        flat=CharElement(_product(ctx, cons.flat, M)),
        eta=eta_element(k, i, u, M),
        k=k, i=i, u=u,
        consistent=cons.consistent,
        pool=[IrreducibleProbe.of(f, ctx, M) for f in pool],
        construction=cons,
    )


def _separated(ctx: PadicContext, r: int, taken: Sequence[int]) -> bool:
    return all(int_valuation((r - t) % ctx.modulus, ctx.p) <= ROOT_SEPARATION for t in taken)


def factor_pool(ctx: PadicContext, k: int, i: int, size: int, rng: random.Random) -> list:
    """Asserted irreducibles coprime to eta, closed under iota, starting with p."""
    p, mod = ctx.p, ctx.modulus
    taken = [f.root(ctx) for f in eta_support(ctx, k, i)]
    eta_range = range(k - 1 - i, 2 * k - 2 - i)
    pool = [Factor.prime(p)]

    def add_pair(f: Factor) -> bool:
        g = f.iota_partner(ctx)
        roots = [h.root(ctx) for h in {f, g} if h.degree == 1]
        trial = list(taken)
        for r in roots:
            if not _separated(ctx, r, trial):
                return False
            trial.append(r)
        if f in pool or g in pool:
            return False
        taken[:] = trial
        pool.extend(dict.fromkeys([f, g]))
        return True

    shifts = [s for s in range(-9, 10) if s not in eta_range and -s not in eta_range]
    rng.shuffle(shifts)
    u = PadicNumber.from_int(ctx, ctx.u)
    n_cyc = max(1, (size - 1) // 4)
    for s in shifts:
        if n_cyc == 0:
            break
        if add_pair(Factor.linear(ctx, u ** s - 1)):
            n_cyc -= 1
    attempts = 0
    while len(pool) < size:
        attempts += 1
        if attempts > MAX_POOL_ATTEMPTS:
            raise ValueError(f"no room for {size} separated factors at p = {p}")
        if len(pool) < size - 2:
            r = p * rng.randrange(mod // p) % mod
            add_pair(Factor.linear(ctx, PadicNumber.from_int(ctx, r)))
        else:
            add_pair(Factor.eisenstein(ctx, rng.randrange(p), rng.randrange(1, p)))
    return pool


def synth_scenario(seed: int, config: SynthConfig) -> GateScenario:
    """Random scenario satisfying the multiplicativity constraints of the construction."""
    if config.k < 2:
        raise ValueError("weight must be at least 2")
    rng = random.Random(seed)
    ctx = PadicContext(config.p, config.precision)
    pool = factor_pool(ctx, config.k, config.i, config.pool_size, rng)
    polys = pool[1:]
    fine_f = Counter(rng.sample(polys, rng.randint(0, 2)))
    fine_fbar = Counter(rng.sample(polys, rng.randint(0, 2)))
    mu_f = rng.randint(0, config.mu_budget)
    prime = pool[0]
    if mu_f:
        fine_f[prime] = mu_f
    if config.mu_budget - mu_f:
        fine_fbar[prime] = config.mu_budget - mu_f
    chosen = rng.sample(pool, rng.randint(0, 4))
    cut = rng.randint(0, len(chosen))
    r_sharp, r_flat = Counter(chosen[:cut]), Counter(chosen[cut:])
    use_slack = rng.random() < 0.3 if config.eta_slack is None else config.eta_slack
    slack = Counter([rng.choice(eta_support(ctx, config.k, config.i))]) if use_slack else None
    return build_scenario(ctx, config.k, config.i, fine_f, fine_fbar, r_sharp, r_flat, pool,
                          slack, config.truncation)


def corrupt_scenario(s: GateScenario, f: Factor, sharp: bool = True,
                     flat: bool = True) -> GateScenario:
    """Multiply the chosen signed elements by ``f``, recording it in the construction.

    With both sides hit and ``f`` outside G0 this plants an inconsistency.
    """
    cons = s.construction
    extra_sharp, extra_flat = Counter(cons.extra_sharp), Counter(cons.extra_flat)
    M = s.sharp.value.M
    fs = f.series(s.ctx, M)
    new_sharp, new_flat = s.sharp, s.flat
    if sharp:
        extra_sharp[f] += 1
        new_sharp = CharElement(s.sharp.value * fs)
    if flat:
        extra_flat[f] += 1
        new_flat = CharElement(s.flat.value * fs)
    new_cons = Construction(cons.fine_f, cons.fine_fbar, cons.g0, cons.r_sharp, cons.r_flat,
                            cons.eta_support, extra_sharp, extra_flat)
    return GateScenario(s.fine_f, s.fine_fbar, new_sharp, new_flat, s.eta, s.k, s.i, s.u,
                        dict(s.assumptions), new_cons.consistent, list(s.pool), new_cons)


# -- bookkeeping oracle -----------------------------------------------------------


def _probe_factor(s: GateScenario, probe: IrreducibleProbe) -> Factor:
    if probe.factor is not None:
        return probe.factor
    if probe.is_p:
        return Factor.prime(s.ctx.p)
    w = weierstrass_prep(probe.F)
    return Factor(s.ctx.p, tuple(w.P.as_list()))


def oracle_findings(s: GateScenario, pool: Sequence[IrreducibleProbe] | None = None) -> list:
    """Probes at which the recorded factor multisets violate an equivalence."""
    if s.construction is None:
        raise ValueError("scenario carries no recorded construction")
    cons = s.construction
    ctx = s.ctx
    common = cons.sharp & cons.flat
    bad = []
    for probe in s.pool if pool is None else pool:
        f = _probe_factor(s, probe)
        if f in cons.eta_support:
            continue
        in_fine_f = cons.fine_f[f.iota_partner(ctx)] > 0
        in_fine_fbar = cons.fine_fbar[f] > 0
        rhs = common[f] == 0
        if (not in_fine_f and not in_fine_fbar) != rhs:
            bad.append((f, "gate"))
        elif not in_fine_fbar and (not in_fine_f) != rhs:
            bad.append((f, "fine"))
    return bad


def oracle_check(s: GateScenario, pool: Sequence[IrreducibleProbe] | None = None) -> bool:
    return not oracle_findings(s, pool)
