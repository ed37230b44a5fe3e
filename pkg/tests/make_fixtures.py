"""Regenerate tests/fixtures.  Run from the repository root."""

import json
import pathlib

from iwasawa import IwasawaSeries, PadicContext, PadicNumber
from iwasawa.formats import (dumps, matrix_to_doc, probe_to_doc, scenario_to_doc, series_to_doc,
                             spec_to_doc)
from iwasawa.gate import GateScenario, IrreducibleProbe, SynthConfig, synth_scenario
from iwasawa.images import SignedImageSpec, eta
from iwasawa.modules import CharElement, LambdaMatrix

OUT = pathlib.Path(__file__).parent / "fixtures"


def write(name, doc):
    (OUT / name).write_text(dumps(doc, pretty=True) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    ctx = PadicContext(3, 12)
    X = IwasawaSeries.X(ctx)
    u = PadicNumber.from_int(ctx, 4)
    C = CharElement.of
    write("series_cubic.json", series_to_doc(9 * (X + 3) * (X * X + 3)))
    write("series_3x2.json", series_to_doc(3 * X * X))
    write("series_x_plus_3.json", series_to_doc(X + 3))
    write("series_low_precision.json", series_to_doc(IwasawaSeries(ctx, [6, 1], 48, 7)))
    write("series_vanishing.json", series_to_doc(X * 0))
    write("matrix_diag.json", matrix_to_doc(LambdaMatrix.diagonal([X, X ** 0 * 3])))
    write("spec_k3.json", spec_to_doc(SignedImageSpec(
        3, 0, u, (PadicNumber.from_int(ctx, 1), PadicNumber.from_int(ctx, 2)))))
    write("spec_k4_inf.json", spec_to_doc(SignedImageSpec(
        4, 1, u, (None, PadicNumber.from_int(ctx, 0), PadicNumber.from_fraction(ctx, 1) / 27))))
    worked = GateScenario(C(X ** 0), C(X + 6), C((X + 6) * (X + 3)), C((X + 6) * (X * X + 3)),
                          eta(2, 0, u), 2, 0, u,
                          pool=[IrreducibleProbe(X + 3), IrreducibleProbe(X + 6)])
    write("scenario_worked.json", scenario_to_doc(worked))
    trivial = GateScenario(C(X ** 0), C(X ** 0), C(X ** 0), C(X ** 0), eta(2, 1, u), 2, 1, u)
    write("scenario_eta_x.json", scenario_to_doc(trivial))
    write("scenario_synth.json", scenario_to_doc(synth_scenario(7, SynthConfig(k=4, i=2,
                                                                              mu_budget=1))))
    write("probe_x_plus_3.json", probe_to_doc(IrreducibleProbe(X + 3)))
    write("probe_x.json", probe_to_doc(IrreducibleProbe(X)))
    write("context_p5.json", {"p": 5, "precision": 10, "truncation": 32})
    # malformed on purpose
    (OUT / "bad_series.json").write_text(json.dumps(
        {"p": 3, "precision": "twelve", "coeffs": ["1"]}) + "\n")


if __name__ == "__main__":
    main()
