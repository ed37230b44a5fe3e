"""Fixed-precision p-adic numbers.

A :class:`PadicNumber` stores ``p^e * unit`` together with the absolute
precision ``prec``: the value is known modulo ``p^prec``.  Exact inputs are
created with ``N`` significant digits (``prec = e + N``); arithmetic tracks the
number of digits that remain certain.  A value whose certain digits all vanish
is the zero-flag element, which still remembers how far it is known to be zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContextMismatch, DivisionByZero, InvalidGenerator, SchemaError

INF = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def int_valuation(n: int, p: int) -> int | float:
    """p-adic valuation of an integer; ``inf`` for 0."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicContext:
    """Prime, working precision and the image ``u`` of the generator of Gamma.

    ``u`` defaults to ``1 + p``; any override must satisfy ``u = 1 mod p`` and
    ``u != 1 mod p^2``.
    """

    p: int
    N: int
    u: int | None = field(default=None)

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 3 or not _is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"precision must be a positive integer, got {self.N!r}")
        u = 1 + self.p if self.u is None else self.u
        if u % self.p != 1 or u % (self.p * self.p) == 1:
            raise InvalidGenerator(
                f"u={u} must satisfy u = 1 mod {self.p} and u != 1 mod {self.p ** 2}")
        object.__setattr__(self, "u", u % self.p ** self.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def with_precision(self, N: int) -> "PadicContext":
        return PadicContext(self.p, N, self.u)


class PadicNumber:
    """Element of Q_p known modulo ``p^prec``.

    Nonzero values satisfy ``gcd(unit, p) = 1`` and ``0 < unit < p^(prec - e)``
    with at most ``ctx.N`` significant digits.  Zero-flag values have
    ``unit == 0`` and ``e == prec``.
    """

    __slots__ = ("ctx", "e", "unit", "prec")

    def __init__(self, ctx: PadicContext, e: int, unit: int, prec: int):
        p = ctx.p
        if unit % p == 0 and unit != 0:
            v = int_valuation(unit, p)
            unit //= p ** v
            e += v
        if unit == 0 or e >= prec:
            self.ctx, self.e, self.unit, self.prec = ctx, prec, 0, prec
            return
        prec = min(prec, e + ctx.N)
        unit %= p ** (prec - e)
        self.ctx, self.e, self.unit, self.prec = ctx, e, unit, prec

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_int(cls, ctx: PadicContext, n: int, prec: int | None = None) -> "PadicNumber":
        """Integer ``n``; exact (N significant digits) unless ``prec`` is given."""
        if prec is None:
            if n == 0:
                return cls(ctx, ctx.N, 0, ctx.N)
            v = int_valuation(n, ctx.p)
            return cls(ctx, v, n // ctx.p ** v, v + ctx.N)
        return cls(ctx, 0, n % ctx.p ** prec if prec > 0 else 0, prec)

    @classmethod
    def from_fraction(cls, ctx: PadicContext, q) -> "PadicNumber":
        q = Fraction(q)
        if q == 0:
            return cls.zero(ctx)
        p = ctx.p
        vn = int_valuation(q.numerator, p)
        vd = int_valuation(q.denominator, p)
        num = q.numerator // p ** vn
        den = q.denominator // p ** vd
        e = vn - vd
        mod = p ** ctx.N
        return cls(ctx, e, num * pow(den, -1, mod) % mod, e + ctx.N)

    @classmethod
    def zero(cls, ctx: PadicContext, prec: int | None = None) -> "PadicNumber":
        prec = ctx.N if prec is None else prec
        return cls(ctx, prec, 0, prec)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    def valuation(self) -> int | float:
        return INF if self.unit == 0 else self.e

    @property
    def relative_precision(self) -> int:
        return 0 if self.unit == 0 else self.prec - self.e

    def to_fraction(self) -> Fraction:
        """The canonical rational representative ``p^e * unit``."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.ctx.p) ** self.e

    def residue(self, prec: int | None = None) -> int:
        """Integer representative modulo ``p^prec`` (defaults to ``self.prec``)."""
        prec = self.prec if prec is None else prec
        if self.unit == 0:
            return 0
        if self.e < 0:
            raise ValueError("value is not integral")
        if prec <= 0:
            return 0
        m = self.ctx.p ** prec
        return self.unit * pow(self.ctx.p, self.e, m) % m

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.ctx.p != self.ctx.p or other.ctx.N != self.ctx.N:
                raise ContextMismatch("p-adic numbers from different contexts")
            return other
        if isinstance(other, int):
            return PadicNumber.from_int(self.ctx, other)
        if isinstance(other, Fraction):
            return PadicNumber.from_fraction(self.ctx, other)
        return NotImplemented

    def _add(self, b: "PadicNumber", sign: int) -> "PadicNumber":
        p = self.ctx.p
        prec = min(self.prec, b.prec)
        m = min(self.e, b.e)
        if prec <= m:
            return PadicNumber(self.ctx, prec, 0, prec)
        val = self.unit * p ** (self.e - m) + sign * b.unit * p ** (b.e - m)
        return PadicNumber(self.ctx, m, val % p ** (prec - m), prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(self, -1)

    def __neg__(self):
        return PadicNumber(self.ctx, self.e, -self.unit, self.prec)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        a = self
        if a.unit == 0 or b.unit == 0:
            if a.unit == 0 and b.unit == 0:
                prec = a.prec + b.prec
            elif a.unit == 0:
                prec = a.prec + b.e
            else:
                prec = b.prec + a.e
            return PadicNumber.zero(a.ctx, prec)
        rel = min(a.relative_precision, b.relative_precision)
        e = a.e + b.e
        return PadicNumber(a.ctx, e, a.unit * b.unit % a.ctx.p ** rel, e + rel)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        if b.unit == 0:
            raise DivisionByZero("division by a p-adic zero")
        a = self
        if a.unit == 0:
            return PadicNumber.zero(a.ctx, a.prec - b.e)
        rel = min(a.relative_precision, b.relative_precision)
        m = a.ctx.p ** rel
        e = a.e - b.e
        return PadicNumber(a.ctx, e, a.unit * pow(b.unit, -1, m) % m, e + rel)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return PadicNumber.from_int(self.ctx, 1) / self ** (-n)
        if self.unit == 0:
            return PadicNumber.zero(self.ctx, self.prec * n) if n else PadicNumber.from_int(self.ctx, 1)
        rel = self.relative_precision
        m = self.ctx.p ** rel
        e = self.e * n
        return PadicNumber(self.ctx, e, pow(self.unit, n, m), e + rel)

    # -- comparison -------------------------------------------------------

    def equals(self, other) -> bool:
        """Equality at the certified precision of both operands."""
        return (self - other).is_zero()

    def __eq__(self, other):
        if isinstance(other, PadicNumber):
            return (self.ctx.p == other.ctx.p and self.e == other.e
                    and self.unit == other.unit and self.prec == other.prec)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.e, self.unit, self.prec))

    def __repr__(self):
        if self.unit == 0:
            return f"PadicNumber(0 + O({self.ctx.p}^{self.prec}))"
        return f"PadicNumber({self.ctx.p}^{self.e}*{self.unit} + O({self.ctx.p}^{self.prec}))"

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        if self.unit == 0:
            d = {"zero": True}
            if self.prec != self.ctx.N:
                d["prec"] = self.prec
            return d
        d = {"e": self.e, "u": str(self.unit)}
        if self.prec != self.e + self.ctx.N:
            d["prec"] = self.prec
        return d

    @classmethod
    def from_dict(cls, ctx: PadicContext, d) -> "PadicNumber":
        if not isinstance(d, dict):
            raise SchemaError(f"p-adic number must be an object, got {d!r}")
        try:
            if d.get("zero"):
                return cls.zero(ctx, int(d.get("prec", ctx.N)))
            e = int(d["e"])
            unit = int(d["u"])
            prec = int(d.get("prec", e + ctx.N))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad p-adic number document {d!r}") from exc
        if unit % ctx.p == 0:
            raise SchemaError(f"unit representative {unit} is divisible by p")
        return cls(ctx, e, unit, prec)


def arith(a: PadicNumber, b: PadicNumber, kind: str) -> PadicNumber:
    ops = {"add": PadicNumber.__add__, "sub": PadicNumber.__sub__,
           "mul": PadicNumber.__mul__, "div": PadicNumber.__truediv__}
    if a.ctx.p != b.ctx.p or a.ctx.N != b.ctx.N:
        raise ContextMismatch("p-adic numbers from different contexts")
    return ops[kind](a, b)


def valuation(a: PadicNumber) -> int | float:
    return a.valuation()


def cyclotomic_u(ctx: PadicContext) -> PadicNumber:
    return PadicNumber.from_int(ctx, ctx.u)
