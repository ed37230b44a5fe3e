"""Command-line front end: ``iwasawa <command> [options]``.

Inputs are file paths, inline JSON documents, or (for series) polynomial
expressions in X.  Each run prints a single JSON document on stdout; errors go
to stderr and select the exit code (2 precision, 3 precondition, 4 schema).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import formats
from .errors import IwasawaError, PreconditionError, SchemaError
from .formats import dumps
from .gate import (IrreducibleProbe, SynthConfig, fine_gate_check, gate_check, mu_corollary,
                   oracle_check, synth_scenario)
from .images import eta, quotient_invariants
from .modules import CharElement, char_of_presentation, exact_sequence_check
from .padic import PadicNumber
from .series import (DEFAULT_SLACK, IwasawaSeries, divides, eval_at, gcd, iota, mu_lambda,
                     twist, weierstrass_prep)

CONTEXT_ENV = "IWASAWA_CONTEXT"
EXIT_PRECONDITION = PreconditionError.exit_code


# -- input handling -----------------------------------------------------------------


def _read_raw(text: str, kind: str):
    """('doc', parsed JSON) or ('expr', text)."""
    if os.path.isfile(text):
        try:
            with open(text, encoding="utf-8") as fh:
                return "doc", json.load(fh)
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise SchemaError(f"{text}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith(("{", "[")):
        try:
            return "doc", json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"inline JSON: {exc}") from exc
    if kind in ("series", "probe"):
        return "expr", text
    raise SchemaError(f"{text!r} is neither a readable file nor a JSON document")


def _env_defaults() -> dict:
    path = os.environ.get(CONTEXT_ENV)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return formats.doc_context("context", json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{CONTEXT_ENV}={path}: {exc}") from exc


class Inputs:
    """Collects raw inputs, reconciles their contexts, then parses them."""

    def __init__(self, args):
        self.args = args
        self.raw = {}
        self.flags = {k: v for k, v in (("p", args.p), ("precision", args.precision),
                                        ("truncation", args.truncation), ("u", args.u))
                      if v is not None}

    def add(self, name: str, text: str, kind: str):
        self.raw[name] = (kind, *_read_raw(text, kind))

    def resolve(self):
        pinned = dict(self.flags)
        source = {k: "--" + k for k in pinned}
        for name, (kind, form, doc) in self.raw.items():
            if form != "doc":
                continue
            for key, val in formats.doc_context(kind, doc).items():
                if key in pinned and pinned[key] != val:
                    raise SchemaError(f"{name}: {key}={val} disagrees with {source[key]}="
                                      f"{pinned[key]}")
                pinned.setdefault(key, val)
                source.setdefault(key, name)
        for key, val in _env_defaults().items():
            pinned.setdefault(key, val)
        p = pinned.get("p", formats.DEFAULT_P)
        N = pinned.get("precision", formats.DEFAULT_PRECISION)
        self.M = pinned.get("truncation", formats.DEFAULT_TRUNCATION)
        self.ctx = formats.make_context(p, N, pinned.get("u"))
        return self

    def series(self, name: str) -> IwasawaSeries:
        kind, form, doc = self.raw[name]
        if form == "expr":
            return formats.parse_expression(doc, self.ctx, self.M)
        F = formats.series_from_doc(doc, self.ctx)
        if F.M != self.M:
            raise SchemaError(f"{name}: truncation {F.M} disagrees with {self.M}")
        return F

    def probe(self, name: str) -> IrreducibleProbe:
        kind, form, doc = self.raw[name]
        if form == "doc":
            return formats.probe_from_doc(doc, self.ctx)
        F = self.series(name)
        is_p = F == IwasawaSeries(self.ctx, [self.ctx.p], self.M)
        return IrreducibleProbe(F, True, is_p, formats._factor_of_series(F, is_p))

    def doc(self, name: str):
        return self.raw[name][2]


def _inputs(args, **named) -> Inputs:
    inp = Inputs(args)
    for name, (text, kind) in named.items():
        inp.add(name, text, kind)
    return inp.resolve()


def _char_doc(c: CharElement) -> dict:
    return formats.series_to_doc(c.value)


# -- commands -----------------------------------------------------------------------


def cmd_prep(args):
    inp = _inputs(args, series=(args.series, "series"))
    w = weierstrass_prep(inp.series("series"), args.guard)
    return {"mu": w.mu, "lambda": w.lam, "P": [str(c) for c in w.P.as_list()],
            "U": formats.series_to_doc(w.U)}


def cmd_invariants(args):
    inp = _inputs(args, series=(args.series, "series"))
    mu, lam = mu_lambda(inp.series("series"), args.guard)
    return {"mu": mu, "lambda": lam}


def cmd_iota(args):
    inp = _inputs(args, series=(args.series, "series"))
    return formats.series_to_doc(iota(inp.series("series")))


def cmd_twist(args):
    inp = _inputs(args, series=(args.series, "series"))
    return formats.series_to_doc(twist(inp.series("series"), args.m))


def cmd_eval(args):
    inp = _inputs(args, series=(args.series, "series"))
    raw = args.x
    try:
        x = json.loads(raw) if raw.lstrip().startswith("{") else raw
    except json.JSONDecodeError as exc:
        raise SchemaError(f"bad point {raw!r}") from exc
    return formats.padic_to_doc(eval_at(inp.series("series"), formats.scalar_from(x, inp.ctx)))


def cmd_divides(args):
    inp = _inputs(args, f=(args.f, "series"), g=(args.g, "series"))
    return {"divides": divides(inp.series("f"), inp.series("g"), args.guard, args.slack)}


def cmd_gcd(args):
    inp = _inputs(args, f=(args.f, "series"), g=(args.g, "series"))
    return formats.series_to_doc(gcd(inp.series("f"), inp.series("g"), args.guard, args.slack))


def cmd_charideal(args):
    inp = _inputs(args, matrix=(args.matrix, "matrix"))
    mat = formats.matrix_from_doc(inp.doc("matrix"), inp.ctx)
    return _char_doc(char_of_presentation(mat, args.generators))


def cmd_exactcheck(args):
    named = {f"c{n}": (text, "series") for n, text in enumerate(args.chars)}
    inp = _inputs(args, **named)
    chars = [CharElement.of(inp.series(name)) for name in named]
    return {"exact": exact_sequence_check(chars)}


def cmd_eta(args):
    inp = _inputs(args)
    u = PadicNumber.from_int(inp.ctx, inp.ctx.u)
    return _char_doc(eta(args.k, args.i, u, inp.M))


def cmd_imagepair(args):
    inp = _inputs(args, spec=(args.spec, "spec"))
    spec = formats.spec_from_doc(inp.doc("spec"), inp.ctx)
    mu, lam, char = quotient_invariants(spec, inp.M, args.slack)
    return {"mu": mu, "lambda": lam, "char": _char_doc(char)}


def _scenario(args, with_probe: bool):
    named = {"scenario": (args.scenario, "scenario")}
    if with_probe:
        named["probe"] = (args.probe, "probe")
    inp = _inputs(args, **named)
    s = formats.scenario_from_doc(inp.doc("scenario"), inp.ctx)
    return s, (inp.probe("probe") if with_probe else None)


def cmd_gate(args):
    s, probe = _scenario(args, True)
    return gate_check(s, probe)._asdict()


def cmd_finegate(args):
    s, probe = _scenario(args, True)
    return fine_gate_check(s, probe)._asdict()


def cmd_mucheck(args):
    s, _ = _scenario(args, False)
    return mu_corollary(s)._asdict()


def _synth_config(args) -> SynthConfig:
    inp = _inputs(args)
    if inp.ctx.u != (1 + inp.ctx.p) % inp.ctx.modulus:
        raise SchemaError("synthetic scenarios use the default generator u = 1 + p")
    return SynthConfig(k=args.k, i=args.i, pool_size=args.pool_size, mu_budget=args.mu_budget,
                       p=inp.ctx.p,
                       precision=args.precision or SynthConfig.precision,
                       truncation=inp.M)


def cmd_synth(args):
    doc = formats.scenario_to_doc(synth_scenario(args.seed, _synth_config(args)))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc, args.pretty) + "\n")
        return {"written": args.output}
    return doc


def _batch_item(seed: int, config: SynthConfig) -> dict:
    s = synth_scenario(seed, config)
    agree = True
    for probe in s.pool:
        try:
            r = gate_check(s, probe)
        except IwasawaError:
            agree = False
            continue
        agree &= r.lhs == r.rhs
    return {"seed": seed, "consistent": oracle_check(s), "gate_agrees": agree}


def cmd_oracle(args):
    if args.batch is None:
        if args.scenario is None:
            raise SchemaError("oracle needs --scenario or --batch")
        s, _ = _scenario(args, False)
        return {"consistent": oracle_check(s)}
    config = _synth_config(args)
    seeds = range(args.seed, args.seed + args.batch)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_batch_item, seeds, [config] * len(seeds)))
    else:
        results = [_batch_item(s, config) for s in seeds]
    return {"results": results,
            "all_consistent": all(r["consistent"] and r["gate_agrees"] for r in results)}


# -- parser -------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--p", type=int, help="odd prime")
    c.add_argument("--precision", type=int, help="p-adic precision N")
    c.add_argument("--truncation", type=int, help="X-adic truncation M")
    c.add_argument("--u", type=int, help="topological generator image, 1 mod p")
    c.add_argument("--guard", type=int, help="guard band (default: precision)")
    c.add_argument("--slack", type=int, default=DEFAULT_SLACK, help="zero-classification slack")
    c.add_argument("--pretty", action="store_true", help="indented output")
    return c


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iwasawa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common()]

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=common, help=help_)
        sp.set_defaults(func=func)
        return sp

    for name, func, help_ in (("prep", cmd_prep, "Weierstrass preparation"),
                              ("invariants", cmd_invariants, "mu and lambda"),
                              ("iota", cmd_iota, "the involution X -> -X/(1+X)")):
        add(name, func, help_).add_argument("--series", required=True)
    sp = add("twist", cmd_twist, "twist by a power of u")
    sp.add_argument("--series", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp = add("eval", cmd_eval, "evaluate at a point of positive valuation")
    sp.add_argument("--series", required=True)
    sp.add_argument("--x", required=True, help="integer, rational or p-adic document")
    for name, func, help_ in (("divides", cmd_divides, "does F divide G"),
                              ("gcd", cmd_gcd, "normalized gcd")):
        sp = add(name, func, help_)
        sp.add_argument("--f", required=True)
        sp.add_argument("--g", required=True)
    sp = add("charideal", cmd_charideal, "characteristic element of a presentation")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--generators", type=int)
    sp = add("exactcheck", cmd_exactcheck, "multiplicativity along an exact sequence")
    sp.add_argument("--chars", nargs="+", required=True)
    sp = add("eta", cmd_eta, "the element eta_{k,i}")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--i", type=int, required=True)
    sp = add("imagepair", cmd_imagepair, "invariants of the image-lattice quotient")
    sp.add_argument("--spec", required=True)
    for name, func, help_ in (("gate", cmd_gate, "full divisibility criterion"),
                              ("finegate", cmd_finegate, "fine divisibility criterion")):
        sp = add(name, func, help_)
        sp.add_argument("--scenario", required=True)
        sp.add_argument("--probe", required=True)
    add("mucheck", cmd_mucheck, "mu-invariant corollary").add_argument("--scenario",
                                                                      required=True)
    for name, func, help_ in (("synth", cmd_synth, "generate a synthetic scenario"),
                              ("oracle", cmd_oracle, "factor-bookkeeping oracle")):
        sp = add(name, func, help_)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--k", type=int, default=2)
        sp.add_argument("--i", type=int, default=0)
        sp.add_argument("--pool-size", type=int, default=SynthConfig.pool_size)
        sp.add_argument("--mu-budget", type=int, default=SynthConfig.mu_budget)
    sub.choices["synth"].add_argument("--output")
    sub.choices["oracle"].add_argument("--scenario")
    sub.choices["oracle"].add_argument("--batch", type=int)
    sub.choices["oracle"].add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return SchemaError.exit_code if exc.code else 0
    try:
        doc = args.func(args)
    except IwasawaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"PreconditionError: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    sys.stdout.write(dumps(doc, args.pretty) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
