"""JSON problem documents and certificate documents.

Rationals travel as strings ``"p/q"`` (or plain integers) so nothing passes
through a binary float.  A problem document looks like::

    {
      "model": "dense-interval",
      "domain": ["0", "1"],
      "removed": ["1/2"],
      "functions": {
        "f": [{"x": "0", "value": "0", "right": "0"},
              {"x": "1/2", "left": "0", "value": null, "right": "1"},
              {"x": "1", "left": "1", "value": "1"}]
      },
      "params": {"tol": "1/1024"}
    }

``one-point`` functions are ``{"prefix": [...], "period": [...], "infinity": r}``
and ``finite`` functions are plain arrays.
"""

from __future__ import annotations

import json
import json.decoder
import json.scanner
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .errors import ParseError
from .funcspace import INFINITY, FiniteFunction, PLFunction, SeqFunction, as_rational
from .insertion import InsertionCertificate, InsertionStep
from .stonew import Add, Const, Gen, Join, LatticeExpr, Meet, Mul, Scale

MODELS = ("pl-interval", "dense-interval", "one-point", "finite")
TOP_FIELDS = {"model", "domain", "removed", "space_size", "functions", "families",
              "generators", "params"}
PARAM_FIELDS = {"epsilon", "tol", "eta", "lambda", "delta", "samples"}
RECORD_FIELDS = {"x", "value", "left", "right"}
SEQ_FIELDS = {"prefix", "period", "infinity"}


@dataclass
class ProblemSpec:
    model: str
    domain: Optional[tuple[Fraction, Fraction]] = None
    removed: tuple[Fraction, ...] = ()
    space_size: Optional[int] = None
    functions: dict[str, Any] = field(default_factory=dict)
    families: dict[str, list[str]] = field(default_factory=dict)
    generators: list[str] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)

    def function(self, name: str):
        try:
            return self.functions[name]
        except KeyError:
            raise ParseError(f"the command needs a function named {name!r}", field="functions") from None

    def family(self, name: str) -> list:
        try:
            names = self.families[name]
        except KeyError:
            raise ParseError(f"the command needs a family named {name!r}", field="families") from None
        return [self.function(n) for n in names]


# -- position-aware JSON --------------------------------------------------------


class _Located(dict):
    line: int = 0


def _loads(text: str):
    decoder = json.JSONDecoder()

    def parse_object(s_and_end, strict, scan_once, object_hook, object_pairs_hook, memo=None):
        s, end = s_and_end
        obj, new_end = json.decoder.JSONObject(s_and_end, strict, scan_once, object_hook,
                                               object_pairs_hook, memo)
        located = _Located(obj)
        located.line = s.count("\n", 0, end) + 1
        return located, new_end

    decoder.parse_object = parse_object
    decoder.scan_once = json.scanner.py_make_scanner(decoder)
    try:
        return decoder.decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None


def _line(obj) -> Optional[int]:
    return getattr(obj, "line", None)


def _rat(value, line, fieldname) -> Fraction:
    if isinstance(value, float):
        raise ParseError(f"binary float {value!r} is not allowed; write \"p/q\"", line, fieldname)
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {value!r}", line, fieldname) from None


def _reject_unknown(obj, allowed, where):
    extra = set(obj) - allowed
    if extra:
        raise ParseError(f"unknown field(s) {sorted(extra)}", _line(obj), f"{where}.{sorted(extra)[0]}")


# -- function parsing ----------------------------------------------------------------


def _parse_pl(name, records, spec: ProblemSpec, line):
    where = f"functions.{name}"
    if not isinstance(records, list) or len(records) < 2:
        raise ParseError("a PL function is an array of at least two breakpoint records", line, where)
    xs, lefts, values, rights = [], [], [], []
    last = len(records) - 1
    removed = set(spec.removed)
    for i, rec in enumerate(records):
        fld = f"{where}[{i}]"
        if not isinstance(rec, dict):
            raise ParseError("breakpoint record must be an object", line, fld)
        rl = _line(rec) or line
        _reject_unknown(rec, RECORD_FIELDS, fld)
        if "x" not in rec:
            raise ParseError("missing breakpoint abscissa", rl, f"{fld}.x")
        x = _rat(rec["x"], rl, f"{fld}.x")
        if xs and x <= xs[-1]:
            raise ParseError(f"breakpoint {x} is not after {xs[-1]}", rl, f"{fld}.x")
        if "value" not in rec:
            raise ParseError("missing point value (use null for a removed point)", rl, f"{fld}.value")
        if rec["value"] is None:
            if x not in removed:
                raise ParseError(f"{x} is not a removed point, so it needs a value", rl, f"{fld}.value")
            v = None
        else:
            if x in removed:
                raise ParseError(f"{x} is removed from the space; its value must be null", rl, f"{fld}.value")
            v = _rat(rec["value"], rl, f"{fld}.value")
        for side, has, store in (("left", i > 0, lefts), ("right", i < last, rights)):
            raw = rec.get(side)
            if has:
                if raw is None:
                    raise ParseError(f"missing {side} limit", rl, f"{fld}.{side}")
                store.append(_rat(raw, rl, f"{fld}.{side}"))
            else:
                if raw is not None:
                    raise ParseError(f"an endpoint carries no outward {side} limit", rl, f"{fld}.{side}")
                store.append(None)
        xs.append(x)
        values.append(v)
    if spec.domain is not None and (xs[0], xs[-1]) != spec.domain:
        raise ParseError(f"breakpoints span [{xs[0]}, {xs[-1]}], domain is "
                         f"[{spec.domain[0]}, {spec.domain[1]}]", line, where)
    missing = removed - set(xs)
    if missing:
        raise ParseError(f"removed point {min(missing)} must be a breakpoint", line, where)
    return PLFunction(xs, values, lefts, rights)


def _parse_seq(name, obj, line):
    where = f"functions.{name}"
    if not isinstance(obj, dict):
        raise ParseError("a sequence is an object {prefix, period, infinity?}", line, where)
    rl = _line(obj) or line
    _reject_unknown(obj, SEQ_FIELDS, where)
    prefix = obj.get("prefix", [])
    period = obj.get("period")
    if not isinstance(prefix, list):
        raise ParseError("prefix must be an array", rl, f"{where}.prefix")
    if not isinstance(period, list) or not period:
        raise ParseError("period must be a nonempty array", rl, f"{where}.period")
    inf = obj.get("infinity")
    return SeqFunction([_rat(v, rl, f"{where}.prefix") for v in prefix],
                       [_rat(v, rl, f"{where}.period") for v in period],
                       None if inf is None else _rat(inf, rl, f"{where}.infinity"))


def _parse_finite(name, arr, spec, line):
    where = f"functions.{name}"
    if not isinstance(arr, list) or not arr:
        raise ParseError("a finite-space function is a nonempty array", line, where)
    f = FiniteFunction([_rat(v, line, where) for v in arr])
    if spec.space_size is not None and len(f) != spec.space_size:
        raise ParseError(f"has {len(f)} values, space_size is {spec.space_size}", line, where)
    return f


def parse_problem(text: str) -> ProblemSpec:
    """Parse a problem document; every error names a line and a field."""
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParseError("the document must be an object", line=1)
    top = _line(doc)
    _reject_unknown(doc, TOP_FIELDS, "$")
    model = doc.get("model")
    if model not in MODELS:
        raise ParseError(f"model must be one of {list(MODELS)}", top, "model")
    spec = ProblemSpec(model=model)

    if model in ("pl-interval", "dense-interval"):
        dom = doc.get("domain", [0, 1])
        if not isinstance(dom, list) or len(dom) != 2:
            raise ParseError("domain is a two-element array [lo, hi]", top, "domain")
        lo, hi = (_rat(v, top, "domain") for v in dom)
        if not lo < hi:
            raise ParseError("domain needs lo < hi", top, "domain")
        spec.domain = (lo, hi)
    elif "domain" in doc:
        raise ParseError(f"model {model!r} has no interval domain", top, "domain")

    if "removed" in doc:
        if model != "dense-interval":
            raise ParseError("removed points only exist in the dense-interval model", top, "removed")
        raw = doc["removed"]
        if not isinstance(raw, list):
            raise ParseError("removed is an array of rationals", top, "removed")
        pts = sorted({_rat(v, top, "removed") for v in raw})
        for p in pts:
            if not spec.domain[0] < p < spec.domain[1]:
                raise ParseError(f"removed point {p} is not interior", top, "removed")
        spec.removed = tuple(pts)

    if "space_size" in doc:
        if model != "finite":
            raise ParseError("space_size only applies to the finite model", top, "space_size")
        n = doc["space_size"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ParseError("space_size must be a positive integer", top, "space_size")
        spec.space_size = n

    funcs = doc.get("functions", {})
    if not isinstance(funcs, dict):
        raise ParseError("functions must be an object of named functions", top, "functions")
    fline = _line(funcs) or top
    for name, body in funcs.items():
        if model in ("pl-interval", "dense-interval"):
            spec.functions[name] = _parse_pl(name, body, spec, fline)
        elif model == "one-point":
            spec.functions[name] = _parse_seq(name, body, fline)
        else:
            spec.functions[name] = _parse_finite(name, body, spec, fline)
    if model == "finite" and spec.space_size is None and spec.functions:
        sizes = {len(f) for f in spec.functions.values()}
        if len(sizes) > 1:
            raise ParseError("finite-space functions have different lengths", fline, "functions")
        spec.space_size = sizes.pop()

    fams = doc.get("families", {})
    if not isinstance(fams, dict):
        raise ParseError("families must be an object of name lists", top, "families")
    for fam, names in fams.items():
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise ParseError("a family is an array of function names", _line(fams), f"families.{fam}")
        for n in names:
            if n not in spec.functions:
                raise ParseError(f"unknown function {n!r}", _line(fams), f"families.{fam}")
        spec.families[fam] = list(names)

    gens = doc.get("generators", [])
    if not isinstance(gens, list) or not all(isinstance(n, str) for n in gens):
        raise ParseError("generators is an array of function names", top, "generators")
    for n in gens:
        if n not in spec.functions:
            raise ParseError(f"unknown function {n!r}", top, "generators")
    spec.generators = list(gens)

    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("params must be an object", top, "params")
    pline = _line(params) or top
    _reject_unknown(params, PARAM_FIELDS, "params")
    for key, val in params.items():
        if key == "samples":
            if not isinstance(val, list):
                raise ParseError("samples is an array of rationals", pline, "params.samples")
            spec.params[key] = [_rat(v, pline, "params.samples") for v in val]
        else:
            spec.params[key] = _rat(val, pline, f"params.{key}")
    return spec


# -- emitting ---------------------------------------------------------------------------


def rat_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _opt_str(q):
    return None if q is None else rat_str(q)


def pl_to_json(f: PLFunction) -> list:
    out = []
    last = len(f.xs) - 1
    for i, (x, l, v, r) in enumerate(f.records()):
        rec = {"x": rat_str(x)}
        if i > 0:
            rec["left"] = rat_str(l)
        rec["value"] = _opt_str(v)
        if i < last:
            rec["right"] = rat_str(r)
        out.append(rec)
    return out


def pl_from_json(records) -> PLFunction:
    xs, lefts, values, rights = [], [], [], []
    for rec in records:
        xs.append(as_rational(rec["x"]))
        lefts.append(_opt(rec.get("left")))
        values.append(_opt(rec.get("value")))
        rights.append(_opt(rec.get("right")))
    return PLFunction(xs, values, lefts, rights)


def _opt(v):
    return None if v is None else as_rational(v)


def function_to_json(f):
    if isinstance(f, PLFunction):
        return pl_to_json(f)
    if isinstance(f, SeqFunction):
        doc = {"prefix": [rat_str(v) for v in f.prefix], "period": [rat_str(v) for v in f.period]}
        if f.infinity is not None:
            doc["infinity"] = rat_str(f.infinity)
        return doc
    if isinstance(f, FiniteFunction):
        return [rat_str(v) for v in f.values]
    raise TypeError(f"cannot serialise {type(f).__name__}")


def problem_to_json(spec: ProblemSpec) -> dict:
    doc: dict[str, Any] = {"model": spec.model}
    if spec.domain is not None:
        doc["domain"] = [rat_str(v) for v in spec.domain]
    if spec.removed:
        doc["removed"] = [rat_str(v) for v in spec.removed]
    if spec.space_size is not None:
        doc["space_size"] = spec.space_size
    doc["functions"] = {n: function_to_json(f) for n, f in spec.functions.items()}
    if spec.families:
        doc["families"] = {k: list(v) for k, v in spec.families.items()}
    if spec.generators:
        doc["generators"] = list(spec.generators)
    if spec.params:
        doc["params"] = {k: ([rat_str(x) for x in v] if isinstance(v, list) else rat_str(v))
                         for k, v in spec.params.items()}
    return doc


def emit_problem(spec: ProblemSpec) -> str:
    return json.dumps(problem_to_json(spec), indent=2) + "\n"


def point_str(p) -> str:
    return "inf" if p is INFINITY else rat_str(p)


# -- certificates ---------------------------------------------------------------------


def certificate_to_json(cert: InsertionCertificate) -> dict:
    return {
        "final_tol": rat_str(cert.final_tol),
        "steps": [{
            "n": s.n,
            "lambda": rat_str(s.lam),
            "a": pl_to_json(s.a),
            "lower_ok": s.lower_ok,
            "upper_ok": s.upper_ok,
            "cauchy_distance": rat_str(s.cauchy_distance),
            "cauchy_ok": s.cauchy_ok,
        } for s in cert.steps],
    }


def certificate_from_json(doc: dict) -> InsertionCertificate:
    steps = tuple(InsertionStep(
        n=int(s["n"]),
        a=pl_from_json(s["a"]),
        lam=as_rational(s["lambda"]),
        lower_ok=bool(s["lower_ok"]),
        upper_ok=bool(s["upper_ok"]),
        cauchy_distance=as_rational(s["cauchy_distance"]),
        cauchy_ok=bool(s["cauchy_ok"]),
    ) for s in doc["steps"])
    return InsertionCertificate(steps, as_rational(doc["final_tol"]))


def expr_to_json(e: LatticeExpr):
    if isinstance(e, Gen):
        return {"gen": e.index}
    if isinstance(e, Const):
        return {"const": rat_str(e.value)}
    if isinstance(e, Add):
        return {"add": [expr_to_json(e.left), expr_to_json(e.right)]}
    if isinstance(e, Scale):
        return {"scale": rat_str(e.factor), "of": expr_to_json(e.expr)}
    if isinstance(e, Join):
        return {"max": [expr_to_json(a) for a in e.args]}
    if isinstance(e, Meet):
        return {"min": [expr_to_json(a) for a in e.args]}
    if isinstance(e, Mul):
        return {"mul": [expr_to_json(e.left), expr_to_json(e.right)]}
    raise TypeError(f"not a lattice expression: {e!r}")
