import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import HALF, random_pl, random_xs
from sandwich.errors import ParseError
from sandwich.funcspace import FiniteFunction, PLFunction, SeqFunction
from sandwich.serialize import ProblemSpec, emit_problem, parse_problem, pl_from_json, pl_to_json

F = Fraction

MINIMAL = """{
  "model": "pl-interval",
  "functions": {
    "f": [{"x": "0", "value": "0", "right": "0"},
          {"x": "1", "left": "1", "value": "1"}]
  }
}"""


def test_minimal_document():
    spec = parse_problem(MINIMAL)
    assert spec.model == "pl-interval" and spec.domain == (0, 1)
    assert spec.functions == {"f": PLFunction.linear(1, 0)}


def test_rational_round_trip():
    doc = json.loads(MINIMAL)
    doc["params"] = {"epsilon": "1/3"}
    spec = parse_problem(json.dumps(doc))
    eps = spec.params["epsilon"]
    assert (eps.numerator, eps.denominator) == (1, 3)
    assert parse_problem(emit_problem(spec)).params["epsilon"] == F(1, 3)


def error_of(text):
    with pytest.raises(ParseError) as info:
        parse_problem(text)
    return info.value


def test_unsorted_breakpoints():
    text = """{
  "model": "pl-interval",
  "functions": {
    "f": [{"x": "0", "value": "0", "right": "0"},
          {"x": "3/4", "left": "0", "value": "0", "right": "0"},
          {"x": "1/2", "left": "0", "value": "0", "right": "0"},
          {"x": "1", "left": "0", "value": "0"}]
  }
}"""
    err = error_of(text)
    assert err.line == 6 and err.field == "functions.f[2].x"
    assert "1/2" in str(err) and "line 6" in str(err)


def test_missing_limit():
    text = MINIMAL.replace('"left": "1", ', "")
    err = error_of(text)
    assert err.field == "functions.f[1].left" and err.line == 5


def test_malformed_rational_and_float():
    assert error_of(MINIMAL.replace('"value": "1"', '"value": "1/0"')).field == "functions.f[1].value"
    assert "float" in str(error_of(MINIMAL.replace('"value": "1"', '"value": 0.5')))
    assert error_of(MINIMAL.replace('"value": "1"', '"value": "abc"')).line == 5


def test_unknown_fields():
    assert error_of(MINIMAL.replace('"model"', '"colour": 1, "model"')).field == "$.colour"
    err = error_of(MINIMAL.replace('"right": "0"', '"right": "0", "slope": "1"'))
    assert err.field.startswith("functions.f[0].slope")


def test_json_syntax_error_has_line():
    assert error_of('{\n "model": "finite",\n "functions": {,}\n}').line == 3


def test_removed_point_rules():
    text = """{
  "model": "dense-interval", "removed": ["1/2"],
  "functions": {"f": [{"x": "0", "value": "0", "right": "0"},
                      {"x": "1/2", "left": "0", "value": null, "right": "1"},
                      {"x": "1", "left": "1", "value": "1"}]}
}"""
    f = parse_problem(text).functions["f"]
    assert f.removed == (HALF,) and f.triple(HALF) == (0, None, 1)
    assert "must be null" in str(error_of(text.replace("null", '"1"')))
    assert "must be a breakpoint" in str(error_of(text.replace(
        '{"x": "1/2", "left": "0", "value": null, "right": "1"},', "")))


def test_sequence_and_finite_models():
    seq = parse_problem('{"model": "one-point", "functions": {"f": {"prefix": ["2"], "period": ["1", "0"]}}}')
    assert seq.functions["f"] == SeqFunction((2,), (1, 0))
    fin = parse_problem('{"model": "finite", "functions": {"u": ["0", "1/2"]}, "generators": ["u"]}')
    assert fin.functions["u"] == FiniteFunction([0, F(1, 2)]) and fin.space_size == 2
    assert error_of('{"model": "finite", "functions": {"u": ["0"], "v": ["1", "2"]}}').field == "functions"
    assert error_of('{"model": "finite", "generators": ["w"]}').field == "generators"


def test_pl_json_round_trip():
    f = PLFunction.indicator(HALF, 1).puncture([F(3, 4)])
    assert pl_from_json(pl_to_json(f)) == f


@st.composite
def problem_specs(draw):
    rng = random.Random(draw(st.integers(0, 2 ** 32 - 1)))
    model = draw(st.sampled_from(["pl-interval", "dense-interval", "one-point", "finite"]))
    spec = ProblemSpec(model=model)
    names = ["f", "g", "h"][:rng.randint(1, 3)]
    if model in ("pl-interval", "dense-interval"):
        spec.domain = (F(0), F(1))
        must = (HALF,) if model == "dense-interval" else ()
        xs = random_xs(rng, must=must)
        for n in names:
            f = random_pl(rng, rng.choice(["usc", "lsc", "any"]), xs)
            spec.functions[n] = f.puncture(must) if must else f
        spec.removed = tuple(must)
    elif model == "one-point":
        for n in names:
            spec.functions[n] = SeqFunction([F(rng.randint(-9, 9), 4) for _ in range(rng.randint(0, 3))],
                                            [F(rng.randint(-9, 9), 4) for _ in range(rng.randint(1, 3))])
    else:
        spec.space_size = rng.randint(1, 6)
        for n in names:
            spec.functions[n] = FiniteFunction([F(rng.randint(-9, 9), 3) for _ in range(spec.space_size)])
        spec.generators = names[:1]
    spec.families = {"S": names[:1]}
    spec.params = {"tol": F(1, 64), "epsilon": F(rng.randint(1, 9), 7), "samples": [F(1, 3)]}
    return spec


@settings(max_examples=200, deadline=None)
@given(problem_specs())
def test_emit_parse_round_trip(spec):
    again = parse_problem(emit_problem(spec))
    assert again == spec
    assert emit_problem(again) == emit_problem(spec)
