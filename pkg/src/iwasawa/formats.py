"""JSON documents for scalars, series, matrices, image specs and scenarios.

Every ``*_from_doc`` raises :class:`SchemaError` on malformed input, and every
``*_to_doc`` output re-parses to an equal value.  Context is read from the
document itself; :func:`doc_context` exposes it so a caller can reconcile
several inputs before parsing them.
"""

from __future__ import annotations

import ast
import json
from collections import Counter
from fractions import Fraction
from typing import Any

from .errors import SchemaError
from .gate import Construction, Factor, GateScenario, IrreducibleProbe
from .images import SignedImageSpec
from .modules import CharElement, LambdaMatrix
from .padic import PadicContext, PadicNumber
from .series import DEFAULT_TRUNCATION, IwasawaSeries

DEFAULT_P = 3
DEFAULT_PRECISION = 12
CONTEXT_KEYS = ("p", "precision", "truncation", "u")


def dumps(doc: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _int(doc: dict, key: str, where: str) -> int:
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{where}: '{key}' must be an integer, got {v!r}")
    return v


def _obj(doc, where: str) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object, got {type(doc).__name__}")
    return doc


def _decimal(s, where: str) -> int:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise SchemaError(f"{where}: expected a decimal string, got {s!r}")
    try:
        return int(s)
    except ValueError as exc:
        raise SchemaError(f"{where}: not a decimal integer: {s!r}") from exc


def make_context(p: int, precision: int, u: int | None = None) -> PadicContext:
    try:
        return PadicContext(p, precision, u)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# -- context ------------------------------------------------------------------------


def context_to_doc(ctx: PadicContext, M: int | None = None) -> dict:
    d = {"p": ctx.p, "precision": ctx.N}
    if M is not None:
        d["truncation"] = M
    if ctx.u != (1 + ctx.p) % ctx.modulus:
        d["u"] = str(ctx.u)
    return d


def doc_context(kind: str, doc) -> dict:
    """Context keys a document pins down (possibly none)."""
    if kind in ("series", "probe", "context"):
        src = doc
    elif kind == "matrix":
        try:
            src = doc["entries"][0][0]
        except (KeyError, IndexError, TypeError) as exc:
            raise SchemaError("matrix: missing entries") from exc
    elif kind == "scenario":
        src = _obj(doc, "scenario").get("meta", {})
    elif kind == "spec":
        src = doc
    else:
        return {}
    src = _obj(src, kind)
    out = {}
    for key in ("p", "precision", "truncation"):
        if key in src:
            out[key] = _int(src, key, kind)
    u = src.get("u")
    if isinstance(u, dict):
        if u.get("e") == 0 and "u" in u:
            out["u"] = _decimal(u["u"], kind)
    elif u is not None:
        out["u"] = _decimal(u, kind)
    return out


# -- scalars ------------------------------------------------------------------------


def padic_to_doc(x: PadicNumber) -> dict:
    return x.to_dict()


def padic_from_doc(doc, ctx: PadicContext) -> PadicNumber:
    return PadicNumber.from_dict(ctx, doc)


def scalar_from(obj, ctx: PadicContext) -> PadicNumber:
    """A p-adic scalar from a number document, an integer or a rational string."""
    if isinstance(obj, dict):
        return PadicNumber.from_dict(ctx, obj)
    if isinstance(obj, bool):
        raise SchemaError(f"not a scalar: {obj!r}")
    if isinstance(obj, int):
        return PadicNumber.from_int(ctx, obj)
    if isinstance(obj, str):
        try:
            q = Fraction(obj.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational scalar: {obj!r}") from exc
        return PadicNumber.from_fraction(ctx, q)
    raise SchemaError(f"not a scalar: {obj!r}")


# -- series -------------------------------------------------------------------------


def series_to_doc(F: IwasawaSeries) -> dict:
    coeffs = list(F.coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    d = context_to_doc(F.ctx, F.M)
    d["coeffs"] = [str(c) for c in coeffs]
    if F.prec != F.ctx.N:
        d["certified_precision"] = F.prec
    return d


def series_from_doc(doc, ctx: PadicContext | None = None) -> IwasawaSeries:
    doc = _obj(doc, "series")
    p = _int(doc, "p", "series")
    N = _int(doc, "precision", "series")
    M = _int(doc, "truncation", "series") if "truncation" in doc else DEFAULT_TRUNCATION
    u = _decimal(doc["u"], "series u") if "u" in doc else None
    own = make_context(p, N, u)
    if ctx is not None and ctx != own:
        raise SchemaError(f"series context {own} disagrees with {ctx}")
    if M < 1:
        raise SchemaError("truncation must be positive")
    raw = doc.get("coeffs")
    if not isinstance(raw, list):
        raise SchemaError("series: 'coeffs' must be a list")
    coeffs = [_decimal(c, "series coefficient") for c in raw]
    if len(coeffs) > M:
        raise SchemaError(f"series has {len(coeffs)} coefficients but truncation {M}")
    mod = own.modulus
    if any(not 0 <= c < mod for c in coeffs):
        raise SchemaError(f"series coefficients must lie in [0, {p}^{N})")
    prec = _int(doc, "certified_precision", "series") if "certified_precision" in doc else N
    if not 0 <= prec <= N:
        raise SchemaError("certified_precision out of range")
    return IwasawaSeries(own, coeffs, M, prec)


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_expression(text: str, ctx: PadicContext, M: int = DEFAULT_TRUNCATION) -> IwasawaSeries:
    """A series from a polynomial expression in X, e.g. ``'9*(X+3)*(X**2+3)'``.

    Integers, X, ``+ - * **`` and division by p-adic units are accepted; ``^`` is read as power.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SchemaError(f"cannot parse expression {text!r}") from exc
    X = IwasawaSeries.X(ctx, M)
    one = IwasawaSeries(ctx, [1], M)

    def const(node) -> int | None:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            c = const(node.operand)
            return None if c is None else -c
        return None

    def walk(node) -> IwasawaSeries:
        c = const(node)
        if c is not None:
            return one * c
        if isinstance(node, ast.Name) and node.id in ("X", "x"):
            return X
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            if isinstance(node.op, ast.Pow):
                e = const(node.right)
                if e is None or e < 0:
                    raise SchemaError("exponents must be non-negative integers")
                return walk(node.left) ** e
            if isinstance(node.op, ast.Div):
                d = const(node.right)
                if d is None or d % ctx.p == 0:
                    raise SchemaError("can only divide by integers prime to p")
                return walk(node.left) * pow(d, -1, ctx.modulus)
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            return a * b
        raise SchemaError(f"unsupported syntax in expression {text!r}")

    return walk(tree.body)


# -- matrices -----------------------------------------------------------------------


def matrix_to_doc(m: LambdaMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols,
            "entries": [[series_to_doc(e) for e in row] for row in m.entries]}


def matrix_from_doc(doc, ctx: PadicContext | None = None) -> LambdaMatrix:
    doc = _obj(doc, "matrix")
    r, c = _int(doc, "rows", "matrix"), _int(doc, "cols", "matrix")
    ents = doc.get("entries")
    if not isinstance(ents, list) or len(ents) != r or any(
            not isinstance(row, list) or len(row) != c for row in ents):
        raise SchemaError(f"matrix: entries do not form a {r}x{c} array")
    if r < 1 or c < 1:
        raise SchemaError("matrix must be non-empty")
    rows = [[series_from_doc(e, ctx) for e in row] for row in ents]
    M = {e.M for row in rows for e in row}
    ctxs = {e.ctx for row in rows for e in row}
    if len(M) > 1 or len(ctxs) > 1:
        raise SchemaError("matrix entries disagree on context or truncation")
    return LambdaMatrix.from_rows(rows)


# -- image specs --------------------------------------------------------------------


def spec_to_doc(spec: SignedImageSpec) -> dict:
    d = context_to_doc(spec.ctx)
    d.pop("u", None)
    d.update({"k": spec.k, "i": spec.i, "u": padic_to_doc(spec.u),
              "c": ["inf" if c is None else padic_to_doc(c) for c in spec.c]})
    return d


def spec_from_doc(doc, ctx: PadicContext) -> SignedImageSpec:
    doc = _obj(doc, "spec")
    k, i = _int(doc, "k", "spec"), _int(doc, "i", "spec")
    base = PadicContext(ctx.p, ctx.N)
    u = scalar_from(doc["u"], base) if "u" in doc else PadicNumber.from_int(base, ctx.u)
    raw = doc.get("c")
    if not isinstance(raw, list):
        raise SchemaError("spec: 'c' must be a list")
    c = tuple(None if x == "inf" else scalar_from(x, base) for x in raw)
    try:
        return SignedImageSpec(k, i, u, c)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# -- scenarios ----------------------------------------------------------------------


def _factor_key(f: Factor):
    return (f.is_p, f.coeffs)


def _multiset_to_doc(c: Counter) -> list:
    return [[f.to_doc(), n] for f, n in sorted(c.items(), key=lambda kv: _factor_key(kv[0]))
            if n]


def _multiset_from_doc(doc, ctx: PadicContext) -> Counter:
    if not isinstance(doc, list):
        raise SchemaError("factor multiset must be a list of [factor, multiplicity]")
    out = Counter()
    for item in doc:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], int):
            raise SchemaError(f"bad factor entry {item!r}")
        out[_factor_from_doc(item[0], ctx)] += item[1]
    return out


def _factor_from_doc(doc, ctx: PadicContext) -> Factor:
    if doc != "p" and not isinstance(doc, list):
        raise SchemaError(f"bad factor {doc!r}")
    if isinstance(doc, list):
        [_decimal(c, "factor coefficient") for c in doc]
    return Factor.from_doc(ctx, doc)


def probe_to_doc(probe: IrreducibleProbe) -> dict:
    d = series_to_doc(probe.F)
    d["is_p"] = probe.is_p
    d["asserted_irreducible"] = probe.asserted_irreducible
    return d


def probe_from_doc(doc, ctx: PadicContext | None = None) -> IrreducibleProbe:
    F = series_from_doc(doc, ctx)
    is_p = bool(doc.get("is_p", False))
    asserted = bool(doc.get("asserted_irreducible", True))
    return IrreducibleProbe(F, asserted, is_p, _factor_of_series(F, is_p))


def _factor_of_series(F: IwasawaSeries, is_p: bool) -> Factor | None:
    if is_p:
        return Factor.prime(F.ctx.p)
    coeffs = list(F.coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2 or coeffs[-1] != 1 or any(c % F.ctx.p for c in coeffs[:-1]):
        return None
    return Factor(F.ctx.p, tuple(coeffs))


def scenario_to_doc(s: GateScenario) -> dict:
    M = s.fine_f.value.M
    meta = context_to_doc(s.ctx, M)
    meta.pop("u", None)
    meta.update({"k": s.k, "i": s.i, "u": padic_to_doc(s.u)})
    d = {"meta": meta,
         "fine_f": series_to_doc(s.fine_f.value),
         "fine_fbar": series_to_doc(s.fine_fbar.value),
         "sharp": series_to_doc(s.sharp.value),
         "flat": series_to_doc(s.flat.value),
         "eta": series_to_doc(s.eta.value),
         "assumptions": dict(s.assumptions),
         "consistent": s.consistent,
         "pool": [probe_to_doc(pr) for pr in s.pool]}
    c = s.construction
    if c is not None:
        d["construction"] = {
            "fine_f": _multiset_to_doc(c.fine_f), "fine_fbar": _multiset_to_doc(c.fine_fbar),
            "g0": _multiset_to_doc(c.g0), "r_sharp": _multiset_to_doc(c.r_sharp),
            "r_flat": _multiset_to_doc(c.r_flat),
            "extra_sharp": _multiset_to_doc(c.extra_sharp),
            "extra_flat": _multiset_to_doc(c.extra_flat),
            "eta_support": sorted((f.to_doc() for f in c.eta_support),
                                  key=lambda x: (x == "p", x if x != "p" else ())),
        }
    return d


def scenario_from_doc(doc, ctx: PadicContext | None = None) -> GateScenario:
    doc = _obj(doc, "scenario")
    meta = _obj(doc.get("meta"), "scenario meta")
    k, i = _int(meta, "k", "scenario meta"), _int(meta, "i", "scenario meta")
    p, N = _int(meta, "p", "scenario meta"), _int(meta, "precision", "scenario meta")
    u = padic_from_doc(meta.get("u"), PadicContext(p, N)) if "u" in meta else None
    own = make_context(p, N, None if u is None else u.residue())
    if ctx is not None and ctx != own:
        raise SchemaError(f"scenario context {own} disagrees with {ctx}")
    if u is None:
        u = PadicNumber.from_int(own, own.u)
    else:
        u = PadicNumber.from_int(own, u.residue())

    def elem(key):
        if key not in doc:
            raise SchemaError(f"scenario: missing '{key}'")
        return CharElement(series_from_doc(doc[key], own))

    assumptions = _obj(doc.get("assumptions", {"h_imc": True, "h0": True}), "assumptions")
    pool = doc.get("pool", [])
    if not isinstance(pool, list):
        raise SchemaError("scenario: 'pool' must be a list")
    cons = None
    if "construction" in doc:
        c = _obj(doc["construction"], "construction")
        try:
            ms = {key: _multiset_from_doc(c.get(key, []), own)
                  for key in ("fine_f", "fine_fbar", "g0", "r_sharp", "r_flat",
                              "extra_sharp", "extra_flat")}
            support = frozenset(_factor_from_doc(f, own) for f in c.get("eta_support", []))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad construction: {exc}") from exc
        cons = Construction(ms["fine_f"], ms["fine_fbar"], ms["g0"], ms["r_sharp"],
                            ms["r_flat"], support, ms["extra_sharp"], ms["extra_flat"])
    consistent = doc.get("consistent", False)
    if not isinstance(consistent, bool):
        raise SchemaError("scenario: 'consistent' must be a boolean")
    return GateScenario(elem("fine_f"), elem("fine_fbar"), elem("sharp"), elem("flat"),
                        elem("eta"), k, i, u, dict(assumptions), consistent,
                        [probe_from_doc(pr, own) for pr in pool], cons)
