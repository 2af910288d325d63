"""``sandwich`` command-line driver.

Exit status: 0 success, 1 internal error, 2 invalid input or failed
precondition, 3 the result is an obstruction.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import compactc, extension, insertion, semicont, stonew
from .checker import verify_document
from .errors import (InternalInvariantError, NotSemicontinuousError, ParameterError, SandwichError,
                     SeparationError)
from .funcspace import PLFunction, SeqFunction, as_rational, le_witness, sup_norm
from .render import to_csv, to_svg
from .serialize import (
    ProblemSpec,
    certificate_to_json,
    expr_to_json,
    function_to_json,
    parse_problem,
    pl_to_json,
    point_str,
    rat_str,
)

EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION, EXIT_OBSTRUCTION = 0, 1, 2, 3

COMMANDS = ("check", "envelope", "extract", "insert", "kt", "extend", "obstruct",
            "pipeline", "sw", "sample", "plot", "verify-cert")


@dataclass
class Outcome:
    status: int = EXIT_OK
    report: list[str] = field(default_factory=list)
    document: dict[str, Any] = field(default_factory=dict)
    plots: dict[str, PLFunction] = field(default_factory=dict)


def _param(spec: ProblemSpec, args, name: str, required=True):
    cli_value = getattr(args, name.replace("lambda", "lam"), None)
    if cli_value is not None:
        return as_rational(cli_value)
    if name in spec.params:
        return spec.params[name]
    if required:
        raise ParameterError(f"missing parameter {name!r} (give --{name} or params.{name})")
    return None


def _pl_functions(spec: ProblemSpec) -> dict[str, PLFunction]:
    return {n: f for n, f in spec.functions.items() if isinstance(f, PLFunction)}


# -- commands ----------------------------------------------------------------------


def cmd_check(spec, args) -> Outcome:
    out = Outcome(document={"command": "check", "functions": {}})
    for name, f in spec.functions.items():
        entry = {"sup_norm": rat_str(sup_norm(f))}
        line = f"{name}: ||{name}|| = {rat_str(sup_norm(f))}"
        if isinstance(f, PLFunction):
            u, l = semicont.usc_violation(f), semicont.lsc_violation(f)
            entry.update(usc=u is None, lsc=l is None, continuous=u is None and l is None)
            line += f", usc={u is None}, lsc={l is None}"
            if u is not None:
                line += f" (usc fails at {rat_str(u[0])} by {rat_str(u[1])})"
            if l is not None:
                line += f" (lsc fails at {rat_str(l[0])} by {rat_str(l[1])})"
        out.report.append(line)
        out.document["functions"][name] = entry
    if {"f", "g"} <= spec.functions.keys():
        f, g = spec.functions["f"], spec.functions["g"]
        w = f.le_witness(g) if isinstance(f, SeqFunction) else (
            le_witness(f, g) if isinstance(f, PLFunction) else
            next((i for i, (a, b) in enumerate(zip(f, g)) if a > b), None))
        out.document["f_le_g"] = w is None
        out.report.append("f <= g" if w is None else f"f <= g fails at {point_str(w)}")
    out.plots = _pl_functions(spec)
    return out


def cmd_envelope(spec, args) -> Outcome:
    lam = _param(spec, args, "lambda", required=False)
    delta = _param(spec, args, "delta", required=False)
    out = Outcome(document={"command": "envelope", "functions": {}})
    for name, f in _pl_functions(spec).items():
        entry = {"usc_envelope": pl_to_json(semicont.usc_envelope(f)),
                 "lsc_envelope": pl_to_json(semicont.lsc_envelope(f))}
        out.plots[name] = f
        if lam is not None:
            up, low = semicont.upper_lipschitz(f, lam), semicont.lower_lipschitz(f, lam)
            entry["upper_lipschitz"] = pl_to_json(up)
            entry["lower_lipschitz"] = pl_to_json(low)
            out.plots[f"{name}^{rat_str(lam)}"] = up
            out.plots[f"{name}_{rat_str(lam)}"] = low
            out.report.append(f"{name}: upper Lipschitz envelope at lambda={rat_str(lam)}: {up}")
            out.report.append(f"{name}: lower Lipschitz envelope at lambda={rat_str(lam)}: {low}")
        if delta is not None:
            try:
                star = semicont.dilworth_witness(f, delta, spec.params.get("samples"))
                entry["dilworth_lambda"] = rat_str(star)
                out.report.append(f"{name}: majorants within {rat_str(delta)} of {name} at the "
                                  f"samples from lambda = {rat_str(star)}")
            except NotSemicontinuousError as exc:
                entry["dilworth_violation"] = {"x": rat_str(exc.point), "deficit": rat_str(exc.deficit)}
                out.report.append(f"{name}: not usc; majorants stall {rat_str(exc.deficit)} above "
                                  f"{name} at {rat_str(exc.point)}")
                out.status = EXIT_PRECONDITION
        out.document["functions"][name] = entry
    return out


def cmd_extract(spec, args) -> Outcome:
    S, T = spec.family("S"), spec.family("T")
    eps = _param(spec, args, "epsilon")
    res = compactc.extract_finite(S, T, eps)
    s_names = [spec.families["S"][i] for i in res.s_indices]
    t_names = [spec.families["T"][j] for j in res.t_indices]
    out = Outcome(document={
        "command": "extract", "epsilon": rat_str(eps), "S0": s_names, "T0": t_names,
        "cover": [{"s": spec.families["S"][r.s_index], "t": spec.families["T"][r.t_index],
                   "left": rat_str(r.left), "right": rat_str(r.right),
                   "left_closed": r.left_closed, "right_closed": r.right_closed} for r in res.cover]})
    out.report.append(f"S0 = {s_names}, T0 = {t_names}")
    for r in res.cover:
        lb = "[" if r.left_closed else "("
        rb = "]" if r.right_closed else ")"
        out.report.append(f"  {spec.families['S'][r.s_index]} < {spec.families['T'][r.t_index]} "
                          f"on {lb}{rat_str(r.left)}, {rat_str(r.right)}{rb}")
    out.plots = {n: spec.functions[n] for n in s_names + t_names}
    return out


def cmd_insert(spec, args) -> Outcome:
    f, g = spec.function("f"), spec.function("g")
    eps = _param(spec, args, "epsilon")
    res = insertion.insert_gap_detailed(f, g, eps)
    out = Outcome(document={"command": "insert", "epsilon": rat_str(eps), "lambda": rat_str(res.lam),
                            "schedule_index": res.schedule_index, "f": pl_to_json(f),
                            "g": pl_to_json(g), "a": pl_to_json(res.a)})
    out.report.append(f"inserted at lambda = {rat_str(res.lam)}: a = {res.a}")
    out.plots = {"f": f, "a": res.a, "g": g}
    return out


def cmd_kt(spec, args) -> Outcome:
    f, g = spec.function("f"), spec.function("g")
    tol = _param(spec, args, "tol")
    h, cert = insertion.kt_compact(f, g, tol)
    out = Outcome(document={"command": "kt", "tol": rat_str(tol), "f": pl_to_json(f),
                            "g": pl_to_json(g), "h": pl_to_json(h),
                            "certificate": certificate_to_json(cert)})
    out.report.append(f"h = a_{len(cert.steps)} = {h}")
    for s in cert.steps:
        out.report.append(f"  n={s.n}: lambda={rat_str(s.lam)} lower_ok={s.lower_ok} "
                          f"upper_ok={s.upper_ok} |a_n - a_n-1|={rat_str(s.cauchy_distance)}")
    out.plots = {"f": f, "h": h, "g": g}
    return out


def cmd_extend(spec, args) -> Outcome:
    out = Outcome(document={"command": "extend", "functions": {}})
    for name, f in spec.functions.items():
        entry = {}
        for label, op in (("upper", extension.extend_upper), ("lower", extension.extend_lower)):
            try:
                ext = op(f)
            except NotSemicontinuousError as exc:
                out.report.append(f"{name}: no {label} extension ({exc})")
                continue
            entry[label] = function_to_json(ext)
            shown = f"inf -> {rat_str(ext.infinity)}" if isinstance(ext, SeqFunction) else str(ext)
            out.report.append(f"{name}: {'U' if label == 'upper' else 'L'}({name}) = {shown}")
            if isinstance(ext, PLFunction):
                out.plots[f"{'U' if label == 'upper' else 'L'}({name})"] = ext
        out.document["functions"][name] = entry
    return out


def _obstruction_doc(obs: extension.Obstruction) -> dict:
    return {"point": point_str(obs.point), "eta": rat_str(obs.eta), "lambda": rat_str(obs.lam)}


def cmd_obstruct(spec, args) -> Outcome:
    f, g = spec.function("f"), spec.function("g")
    eta, lam = _param(spec, args, "eta"), _param(spec, args, "lambda")
    obs = extension.check_obstruction(f, g, eta, lam)
    up, down = extension.superlevel_closure(f, eta), extension.sublevel_closure(g, lam)
    out = Outcome(document={"command": "obstruct", "superlevel_closure": str(up),
                            "sublevel_closure": str(down)})
    out.report.append(f"cl{{f >= {rat_str(eta)}}} = {up}")
    out.report.append(f"cl{{g <= {rat_str(lam)}}} = {down}")
    if obs is None:
        out.document["result"] = "clear"
        out.report.append("clear: the closures are disjoint")
    else:
        out.document["result"] = "obstruction"
        out.document["obstruction"] = _obstruction_doc(obs)
        out.report.append(f"obstruction at {point_str(obs.point)}")
        out.status = EXIT_OBSTRUCTION
    return out


def cmd_pipeline(spec, args) -> Outcome:
    f, g = spec.function("f"), spec.function("g")
    tol = _param(spec, args, "tol")
    res = extension.kt_pipeline(f, g, tol)
    if isinstance(res, extension.Obstruction):
        out = Outcome(status=EXIT_OBSTRUCTION, document={
            "command": "pipeline", "result": "obstruction", "obstruction": _obstruction_doc(res)})
        out.report.append(f"obstruction at {point_str(res.point)}: U(f) > L(g) there; "
                          f"eta={rat_str(res.eta)}, lambda={rat_str(res.lam)}")
        return out
    out = Outcome(document={
        "command": "pipeline", "result": "inserted", "tol": rat_str(tol),
        "f": pl_to_json(f), "g": pl_to_json(g), "F": pl_to_json(res.F), "G": pl_to_json(res.G),
        "h": pl_to_json(res.h), "h_on_y": pl_to_json(res.h_on_y),
        "certificate": certificate_to_json(res.certificate)})
    out.report.append(f"U(f) <= L(g) on Y; h = {res.h}")
    out.plots = {"F": res.F, "h": res.h_on_y, "G": res.G}
    return out


def cmd_sw(spec, args) -> Outcome:
    gens = [spec.function(n) for n in spec.generators]
    h = spec.function("h")
    expr = stonew.sw_construct(gens, h)
    out = Outcome(document={"command": "sw", "generators": spec.generators,
                            "expression": expr_to_json(expr),
                            "value": function_to_json(stonew.evaluate(expr, gens))})
    out.report.append(f"h = {stonew.render(expr)}")
    return out


def cmd_sample(spec, args) -> Outcome:
    out = Outcome(document={"command": "sample"})
    out.plots = _pl_functions(spec)
    if args.csv is None:
        args.csv = 10
    return out


def cmd_plot(spec, args) -> Outcome:
    out = Outcome(document={"command": "plot"})
    out.plots = _pl_functions(spec)
    args.svg = True
    return out


HANDLERS = {
    "check": cmd_check, "envelope": cmd_envelope, "extract": cmd_extract, "insert": cmd_insert,
    "kt": cmd_kt, "extend": cmd_extend, "obstruct": cmd_obstruct, "pipeline": cmd_pipeline,
    "sw": cmd_sw, "sample": cmd_sample, "plot": cmd_plot,
}


# -- driver ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sandwich",
                                description="Exact continuous insertion between semicontinuous bounds.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="problem document (or certificate for verify-cert)")
    p.add_argument("--tol", help="final tolerance 1/2**N for kt and pipeline")
    p.add_argument("--epsilon", help="gap for insert and extract")
    p.add_argument("--eta", help="superlevel for obstruct")
    p.add_argument("--lambda", dest="lam", help="sublevel for obstruct, Lipschitz constant for envelope")
    p.add_argument("--out", help="directory for certificate.json, CSV and SVG files")
    p.add_argument("--svg", action="store_true", help="also write an SVG plot")
    p.add_argument("--csv", type=int, metavar="RESOLUTION", help="also write CSV samples")
    return p


def _write_outputs(out: Outcome, args, stdout) -> None:
    target = Path(args.out) if args.out else None
    if target is not None:
        target.mkdir(parents=True, exist_ok=True)
        (target / "certificate.json").write_text(json.dumps(out.document, indent=2) + "\n")
    if args.csv is not None:
        for name, f in out.plots.items():
            text = to_csv(f, args.csv)
            if target is not None:
                (target / f"{_file_stem(name)}.csv").write_text(text)
            else:
                stdout.write(f"# {name}\n{text}")
    if args.svg and out.plots:
        svg = to_svg(out.plots)
        if target is not None:
            (target / "plot.svg").write_text(svg)
        else:
            stdout.write(svg)


def _file_stem(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)


def run(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.input).read_text()
        if args.command == "verify-cert":
            try:
                problems = verify_document(json.loads(text))
            except (KeyError, TypeError, ValueError) as exc:
                problems = [f"malformed certificate document: {exc!r}"]
            for msg in problems:
                stdout.write(f"FAIL {msg}\n")
            stdout.write("certificate valid\n" if not problems else "certificate rejected\n")
            return EXIT_OK if not problems else EXIT_PRECONDITION
        spec = parse_problem(text)
        out = HANDLERS[args.command](spec, args)
        for line in out.report:
            stdout.write(line + "\n")
        _write_outputs(out, args, stdout)
        return out.status
    except SeparationError as exc:
        stderr.write(f"error: {exc} (pair {exc.pair[0]}, {exc.pair[1]})\n")
        return EXIT_PRECONDITION
    except InternalInvariantError as exc:
        stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL
    except (SandwichError, OSError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    except Exception:
        stderr.write(traceback.format_exc())
        return EXIT_INTERNAL


def main(argv: Optional[list[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
