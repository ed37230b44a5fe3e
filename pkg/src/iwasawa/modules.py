"""Characteristic elements of finitely presented torsion Lambda-modules.

The characteristic ideal of a torsion module presented as ``Lambda^r / (columns)``
is the gcd of its ``r x r`` minors (the divisorial hull of the zeroth Fitting
ideal), which is exact because Lambda is a two-dimensional regular UFD.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import ContextMismatch, NotTorsion
from .series import (DEFAULT_SLACK, IwasawaSeries, associates, divides, gcd, mu_lambda,
                     normal_form)

MAX_ROWS = 6
MAX_COLS = 8


@dataclass(frozen=True)
class CharElement:
    """A characteristic element in associate normal form ``p^mu * P``."""

    value: IwasawaSeries

    @classmethod
    def of(cls, F: IwasawaSeries) -> "CharElement":
        return cls(normal_form(F))

    @classmethod
    def one(cls, like: IwasawaSeries) -> "CharElement":
        return cls(IwasawaSeries(like.ctx, [1], like.M))

    @property
    def is_unit(self) -> bool:
        return self.value.is_unit()

    @property
    def mu(self) -> int:
        return mu_lambda(self.value)[0]

    @property
    def lam(self) -> int:
        return mu_lambda(self.value)[1]

    def __mul__(self, other: "CharElement") -> "CharElement":
        return CharElement.of(self.value * other.value)


@dataclass(frozen=True)
class LambdaMatrix:
    """Relation matrix: ``rows`` generators, one relation per column."""

    rows: int
    cols: int
    entries: tuple  # row-major tuple of rows

    def __post_init__(self):
        ents = tuple(tuple(r) for r in self.entries)
        if len(ents) != self.rows or any(len(r) != self.cols for r in ents):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} matrix")
        first = ents[0][0]
        for row in ents:
            for e in row:
                if e.ctx != first.ctx or e.M != first.M:
                    raise ContextMismatch("matrix entries from different contexts")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[IwasawaSeries]]) -> "LambdaMatrix":
        return cls(len(rows), len(rows[0]), tuple(tuple(r) for r in rows))

    @classmethod
    def diagonal(cls, entries: Sequence[IwasawaSeries]) -> "LambdaMatrix":
        z = entries[0] * 0
        n = len(entries)
        return cls.from_rows([[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def permuted(self, row_perm, col_perm) -> "LambdaMatrix":
        return LambdaMatrix.from_rows([[self.entries[i][j] for j in col_perm] for i in row_perm])


def block_diagonal(A: LambdaMatrix, B: LambdaMatrix) -> LambdaMatrix:
    z = A[0, 0] * 0
    rows = [list(r) + [z] * B.cols for r in A.entries]
    rows += [[z] * A.cols + list(r) for r in B.entries]
    return LambdaMatrix.from_rows(rows)


def maximal_minors(mat: LambdaMatrix) -> dict:
    """All ``rows x rows`` minors keyed by column subset, by Laplace expansion."""
    r = mat.rows
    memo = {(): mat[0, 0] * 0 + 1}

    def minor(cols: tuple) -> IwasawaSeries:
        if cols in memo:
            return memo[cols]
        t = len(cols) - 1  # expand along row t
        acc = None
        for idx, c in enumerate(cols):
            term = mat[t, c] * minor(cols[:idx] + cols[idx + 1:])
            if (t + idx) % 2:
                term = -term
            acc = term if acc is None else acc + term
        memo[cols] = acc
        return acc

    return {cols: minor(cols) for cols in combinations(range(mat.cols), r)}


def char_of_presentation(mat: LambdaMatrix, generators: int | None = None) -> CharElement:
    """Characteristic element of ``Lambda^r / (column span of mat)``."""
    r = mat.rows if generators is None else generators
    if r != mat.rows:
        raise ValueError(f"matrix has {mat.rows} rows but {r} generators were declared")
    if mat.rows > MAX_ROWS or mat.cols > MAX_COLS:
        raise ValueError(f"presentation exceeds the {MAX_ROWS}x{MAX_COLS} cap")
    if mat.cols < r:
        raise NotTorsion("fewer relations than generators")
    g = None
    for m in maximal_minors(mat).values():
        if m.is_zero():
            continue
        g = normal_form(m) if g is None else gcd(g, m)
        if g.is_unit():
            break
    if g is None:
        raise NotTorsion("every maximal minor vanishes at working precision")
    return CharElement(g)


def torsion_char_of_vector_quotient(a: IwasawaSeries, b: IwasawaSeries) -> CharElement:
    """Characteristic element of the torsion submodule of ``Lambda^2 / Lambda(a, b)``."""
    if a.is_zero() and b.is_zero():
        raise NotTorsion("(a, b) vanishes at working precision")
    if a.is_zero():
        return CharElement.of(b)
    if b.is_zero():
        return CharElement.of(a)
    return CharElement(gcd(a, b))


def exact_sequence_check(chars: Sequence[CharElement]) -> bool:
    """Multiplicativity along an exact sequence ``0 -> A_1 -> ... -> A_n -> 0``.

    Holds iff the product over odd positions is an associate of the product
    over even positions.
    """
    if len(chars) < 2:
        raise ValueError("an exact sequence needs at least two terms")
    one = chars[0].value * 0 + 1
    odd, even = one, one
    for n, c in enumerate(chars):
        if n % 2 == 0:
            odd = odd * c.value
        else:
            even = even * c.value
    return associates(odd, even)


def order_at(F: IwasawaSeries, G: IwasawaSeries) -> int:
    """Largest k with ``F^k | G`` for a non-unit F."""
    if F.is_unit():
        raise ValueError("order at a unit is undefined")
    mu, lam = mu_lambda(G)
    bound = mu + lam + 1
    k = 0
    power = F
    while k < bound and divides(power, G):
        k += 1
        power = power * F
    return k


def compare_outside_support(a: CharElement, b: CharElement, excluded: Sequence[IwasawaSeries],
                            pool: Sequence[IwasawaSeries], slack: int = DEFAULT_SLACK) -> bool:
    """Whether a and b have the same divisor away from the excluded factors.

    For every pool factor not associated to an excluded one the orders of
    vanishing must agree, and the mu-invariants must agree unless p is excluded.
    """
    p_excluded = any(not e.is_zero() and mu_lambda(e) == (1, 0) for e in excluded)
    if not p_excluded and a.mu != b.mu:
        return False
    for F in pool:
        if any(associates(F, e, slack=slack) for e in excluded):
            continue
        if order_at(F, a.value) != order_at(F, b.value):
            return False
    return True
