"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary, or
through pytest, where a failing criterion fails its test.
"""

from __future__ import annotations

import itertools
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from instances import (  # noqa: E402
    HALF,
    gap_pair,
    jump_pair,
    punctured_pair,
    random_pl,
    random_premise,
    random_xs,
    zero_gap_pair,
)
from oracles import brute_lipschitz, grid, in_closure, probe_points, ref_eval, sampled_le  # noqa: E402
from sandwich.checker import verify_document  # noqa: E402
from sandwich.cli import run as cli_run  # noqa: E402
from sandwich.compactc import (  # noqa: E402
    exhaustive_extraction,
    extract_finite,
    verify_premise,
)
from sandwich.errors import NotSemicontinuousError, SeparationError  # noqa: E402
from sandwich.extension import (  # noqa: E402
    Obstruction,
    PipelineResult,
    extend_lower,
    extend_upper,
    kt_pipeline,
    restrict,
)
from sandwich.funcspace import (  # noqa: E402
    INFINITY,
    FiniteFunction,
    PLFunction,
    SeqFunction,
    distance,
    ff_mul,
    pl_eval,
    pl_join_all,
    pl_le,
    pl_meet,
    pl_meet_all,
    pl_shift,
    pl_sup,
)
from sandwich.insertion import insert_gap, insert_gap_detailed, kt_compact  # noqa: E402
from sandwich.semicont import (  # noqa: E402
    default_samples,
    dilworth_witness,
    is_lsc,
    is_usc,
    lower_lipschitz,
    upper_lipschitz,
    usc_violation,
)
from sandwich.serialize import certificate_to_json, pl_to_json, rat_str  # noqa: E402
from sandwich.stonew import (  # noqa: E402
    clopen_approx,
    evaluate,
    interpolate_pair,
    node_kinds,
    separates,
    sw_construct,
    Add,
    Const,
    Gen,
)

F = Fraction
SPIKE = PLFunction.indicator(HALF, HALF)
G_WELL = PLFunction.constant(HALF) + PLFunction.indicator(F(1, 4), F(3, 4), closed_left=False,
                                                          closed_right=False)
UP_X = PLFunction.indicator(HALF, 1, closed_left=False).puncture([HALF])


class Failure(Exception):
    pass


def require(cond, msg):
    if not cond:
        raise Failure(msg)


# -- 1 ------------------------------------------------------------------------------------


def criterion_1():
    rng = random.Random(1)
    worst = 0.0
    for i in range(200):
        eps = rng.choice([F(1, 8), F(1, 4), F(1, 2)])
        f, g = gap_pair(rng, eps)
        t0 = time.perf_counter()
        a = insert_gap(f, g, eps)
        worst = max(worst, time.perf_counter() - t0)
        require(is_usc(a) and is_lsc(a), f"instance {i}: a is not continuous")
        require(pl_le(f, a) and pl_le(a, g), f"instance {i}: f <= a <= g fails")
    require(worst < 0.05, f"slowest instance took {worst * 1000:.1f} ms")
    return f"200/200 sandwiched, slowest {worst * 1000:.1f} ms"


# -- 2 ------------------------------------------------------------------------------------


def kt_document(f, g, h, cert, tol):
    return json.loads(json.dumps({"command": "kt", "tol": rat_str(tol), "f": pl_to_json(f),
                                  "g": pl_to_json(g), "h": pl_to_json(h),
                                  "certificate": certificate_to_json(cert)}))


def criterion_2():
    rng = random.Random(2)
    tol = F(1, 2 ** 10)
    zero = 0
    for i in range(100):
        if i < 30:
            f, g = zero_gap_pair(rng)
        else:
            f, g = gap_pair(rng, F(rng.randint(0, 4), 8))
        zero += pl_sup(f - g) == 0
        h, cert = kt_compact(f, g, tol)
        require(len(cert.steps) == 10, f"pair {i}: {len(cert.steps)} steps")
        for s in cert.steps:
            n = s.n
            require(pl_le(pl_shift(f, -F(1, 2 ** n)), s.a) and pl_le(s.a, g),
                    f"pair {i}: step {n} leaves the band")
        for prev, s in zip(cert.steps, cert.steps[1:]):
            require(distance(s.a, prev.a) <= F(1, 2 ** (s.n - 1)), f"pair {i}: Cauchy step {s.n}")
        problems = verify_document(kt_document(f, g, h, cert, tol))
        require(not problems, f"pair {i}: checker rejects: {problems}")
    require(zero >= 20, f"only {zero} zero-gap pairs")
    return f"100/100 certificates verified, {zero} zero-gap pairs"


# -- 3 ------------------------------------------------------------------------------------


def criterion_3():
    rng = random.Random(3)
    delta = F(1, 2 ** 8)
    worst = 0
    for i in range(50):
        f = random_pl(rng, "usc")
        samples = default_samples(f)
        lam = dilworth_witness(f, delta, samples)
        worst = max(worst, lam)
        require(lam <= 2 ** 20, f"usc {i}: lambda* = {lam}")
        env = upper_lipschitz(f, lam)
        require(all(ref_eval(env, x) <= ref_eval(f, x) + delta for x in samples),
                f"usc {i}: majorant above f + delta")
    bad = 0
    while bad < 50:
        f = random_pl(rng, "any")
        if usc_violation(f) is None:
            continue
        bad += 1
        try:
            dilworth_witness(f, delta)
        except NotSemicontinuousError as exc:
            i = f.xs.index(exc.point)
            expected = max(q for q in (f.lefts[i], f.values[i], f.rights[i]) if q is not None) - f.values[i]
            require(expected > 0 and exc.deficit == expected,
                    f"non-usc: deficit {exc.deficit} != {expected} at {exc.point}")
        else:
            raise Failure("non-usc input accepted")
    return f"50 usc converged (max lambda* = {worst}), 50 non-usc deficits exact"


# -- 4 ------------------------------------------------------------------------------------


def criterion_4():
    rng = random.Random(4)
    for i in range(100):
        S, T, eps = random_premise(rng)
        require(verify_premise(S, T, eps), f"premise {i} not verified")
        res = extract_finite(S, T, eps)
        S0 = [S[k] for k in res.s_indices]
        T0 = [T[k] for k in res.t_indices]
        require(pl_le(pl_meet_all(S0), pl_join_all(T0)), f"premise {i}: extraction unsound")
    for k in range(1, 9):
        S = [PLFunction.constant(F(1, j)) for j in range(1, k + 1)]
        T = [PLFunction.constant(F(-1, j)) for j in range(1, k + 1)]
        require(exhaustive_extraction(S, T) is None, f"k={k}: exhaustive search found an extraction")
        require(not verify_premise(S, T, F(1, 2 ** 12)), f"k={k}: premise holds at 2^-12")
    return "100/100 extractions sound; no extraction for k <= 8; premise false at 2^-12"


# -- 5 ------------------------------------------------------------------------------------


def criterion_5():
    rng = random.Random(5)
    for i in range(50):
        xs = random_xs(rng, must=(HALF, F(3, 4)))
        f = random_pl(rng, "usc", xs).puncture([HALF, F(3, 4)])
        g = random_pl(rng, "lsc", xs).puncture([HALF, F(3, 4)])
        U, L = extend_upper(f), extend_lower(g)
        require(restrict(U, f) == f and restrict(L, g) == g, f"interval {i}: restriction differs")
        require(is_usc(U) and is_lsc(L) and not U.removed and not L.removed,
                f"interval {i}: extension not semicontinuous on Y")
    for i in range(50):
        prefix = [F(rng.randint(-8, 8), 4) for _ in range(rng.randint(0, 4))]
        period = [F(rng.randint(-8, 8), 4) for _ in range(rng.randint(1, 4))]
        s = SeqFunction(prefix, period)
        U, L = extend_upper(s), extend_lower(s)
        require(all(U(n) == s(n) == L(n) for n in range(len(prefix) + 2 * len(period))),
                f"sequence {i}: restriction differs")
        # semicontinuity at infinity: U(inf) >= limsup, L(inf) <= liminf
        require(U(INFINITY) >= max(period) and L(INFINITY) <= min(period), f"sequence {i}")
    evens = SeqFunction(period=(1, 0))
    U, L = extend_upper(evens), extend_lower(evens)
    require(U(INFINITY) == 1 and L(INFINITY) == 0 and not U.le(L), "evens counterexample")
    return "50 interval + 50 sequence extensions exact; U(chi_evens)(inf) = 1, L(chi_evens)(inf) = 0"


# -- 6 ------------------------------------------------------------------------------------


def criterion_6():
    rng = random.Random(6)
    tol = F(1, 2 ** 10)
    counts = {"inserted": 0, "obstruction": 0}
    for i in range(100):
        f, g = punctured_pair(rng) if i % 2 else jump_pair(rng)
        res = kt_pipeline(f, g, tol)
        if i % 2 == 0:
            left, _, right = f.triple(HALF)
            blocked = abs(right - left) > pl_sup(g - f)
            require(isinstance(res, Obstruction) == blocked, f"instance {i}: wrong branch for jump pair")
        if isinstance(res, PipelineResult):
            counts["inserted"] += 1
            h = res.h
            require(h.is_continuous() and h.removed == (HALF,), f"instance {i}: h not continuous on X")
            require(pl_le(pl_shift(f, -tol), h) and pl_le(h, g), f"instance {i}: sandwich fails")
        else:
            counts["obstruction"] += 1
            require(in_closure(f, res.point, lambda v: v >= res.eta), f"instance {i}: not in cl{{f >= eta}}")
            require(in_closure(g, res.point, lambda v: v <= res.lam), f"instance {i}: not in cl{{g <= lam}}")
    res = kt_pipeline(UP_X, UP_X, tol)
    require(isinstance(res, Obstruction) and res.point == HALF, f"chi_(1/2,1] gave {res}")
    return f"{counts['inserted']} inserted, {counts['obstruction']} obstructions; chi_(1/2,1] obstructed at 1/2"


# -- 7 ------------------------------------------------------------------------------------


def brute_pair(gens):
    n = len(gens[0])
    for x, y in itertools.combinations(range(n), 2):
        if all(g[x] == g[y] for g in gens):
            return (x, y)
    return None


def criterion_7():
    rng = random.Random(7)

    def rand_ff(n):
        return FiniteFunction([F(rng.randint(-32, 32), rng.randint(1, 32)) for _ in range(n)])

    done = 0
    while done < 200:
        n = rng.randint(1, 8)
        gens = [rand_ff(n) for _ in range(rng.randint(1, 3))]
        if brute_pair(gens) is not None:
            continue
        h = rand_ff(n)
        expr = sw_construct(gens, h)
        value = evaluate(expr, gens)
        require(value == h and distance(value, h) == 0, f"sw instance {done}: value differs")
        for x, y in itertools.permutations(range(n), 2):
            e = interpolate_pair(gens, x, y, h[x], h[y])
            require(node_kinds(e) <= {"Add", "Const", "Scale", "Gen"}, f"lattice node in {e}")
        done += 1
    for i in range(50):
        n = rng.randint(2, 8)
        x, y = sorted(rng.sample(range(n), 2))
        gens = []
        for _ in range(rng.randint(1, 3)):
            g = rand_ff(n)
            gens.append(FiniteFunction([g[x] if k == y else g[k] for k in range(n)]))
        try:
            sw_construct(gens, rand_ff(n))
        except SeparationError as exc:
            require(exc.pair == brute_pair(gens), f"reported {exc.pair}, expected {brute_pair(gens)}")
        else:
            raise Failure("non-separating generators accepted")
    return "200/200 exact reconstructions; 50 non-separating inputs rejected with correct pairs"


# -- 8 ------------------------------------------------------------------------------------


def criterion_8():
    rng = random.Random(8)
    for i in range(1000):
        n = rng.randint(1, 8)
        f, g, h = (FiniteFunction([F(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(n)])
                   for _ in range(3))
        zero = FiniteFunction.constant(0, n)
        lam = F(rng.randint(0, 20), rng.randint(1, 6))
        j, m = f.join(g), f.meet(g)
        require(all(j[k] == max(f[k], g[k]) and m[k] == min(f[k], g[k]) for k in range(n)),
                f"triple {i}: (1) lattice operations")
        require((m + h).le(g + h), f"triple {i}: (2) translation")
        fp, gp = f.join(zero), g.join(zero)
        require(zero.le(ff_mul(fp, gp)), f"triple {i}: (3) products")
        require(zero.le(fp.scale(lam)), f"triple {i}: (4) scaling")
    for i in range(1000):
        f, g, h = (random_pl(rng, "any", random_xs(rng, k=rng.randint(1, 3))) for _ in range(3))
        require(f.join(g) == g.join(f) and f.meet(g) == g.meet(f), f"pl {i}: commutativity")
        require(f.join(g.join(h)) == f.join(g).join(h), f"pl {i}: associativity")
        require(f.join(f.meet(g)) == f and f.meet(f.join(g)) == f, f"pl {i}: absorption")
        require(pl_le(pl_meet(f, g) + h, g + h), f"pl {i}: translation")
        require((distance(f, g) == 0) == (f == g), f"pl {i}: norm separation")
        require(distance(f, h) <= distance(f, g) + distance(g, h), f"pl {i}: triangle")
    return "1000 finite triples satisfy (1)-(4); 1000 PL triples satisfy lattice and norm laws"


# -- 9 ------------------------------------------------------------------------------------


def dense_check(name, f, expected):
    pts = probe_points(f)
    bad = next((x for x in pts if pl_eval(f, x) != expected(x)), None)
    require(bad is None, f"{name}: disagrees with oracle at {bad}")


def criterion_9():
    checked = []
    # meet of the usc step with 1/2
    step = PLFunction.indicator(HALF, 1)
    m = pl_meet(step, PLFunction.constant(HALF))
    dense_check("meet", m, lambda x: min(ref_eval(step, x), HALF))
    checked.append("meet")
    # Lipschitz envelopes against exhaustive cone search
    xs = grid()
    env = upper_lipschitz(SPIKE, 4)
    require([pl_eval(env, x) for x in xs] == brute_lipschitz(SPIKE, 4, xs), "upper envelope")
    dense_check("upper envelope", env, lambda x: max(F(0), 1 - 4 * abs(x - HALF)))
    low = lower_lipschitz(G_WELL, 4)
    require([pl_eval(low, x) for x in xs] == brute_lipschitz(G_WELL, 4, xs, "lower"), "lower envelope")
    checked.append("envelopes")
    # Dilworth lambda* = 8 at 5/8
    vals = {lam: brute_lipschitz(SPIKE, lam, [F(5, 8)])[0] for lam in (1, 2, 4, 8)}
    require(all(vals[lam] == max(F(0), 1 - F(lam, 8)) for lam in vals), "f^lam(5/8)")
    require(dilworth_witness(SPIKE, F(1, 16), [F(5, 8)]) == 8 and vals[4] > F(1, 16) >= vals[8],
            "dilworth lambda*")
    checked.append("lipschitz witness")
    # Condition (C) examples
    S = [PLFunction.constant(1), PLFunction.linear(2, 0)]
    T = [PLFunction.linear(1, F(3, 4))]
    pts = probe_points(*S, *T)
    require(verify_premise(S, T, F(1, 4)), "premise example")
    require(all(min(1, 2 * x) + F(1, 4) <= x + F(3, 4) for x in pts), "premise oracle")
    res = extract_finite(S, T, F(1, 4))
    require(res.s_indices == (0, 1), "extraction keeps both members")
    require(all(min(ref_eval(S[k], x) for k in res.s_indices) <= ref_eval(T[0], x) for x in pts),
            "extraction oracle")
    require(any(2 * x > x + F(3, 4) for x in pts), "singleton {2x} should fail")
    Sl = [upper_lipschitz(SPIKE, lam) for lam in (1, 2, 4)]
    Tl = [lower_lipschitz(G_WELL, lam) for lam in (1, 2, 4)]
    res = extract_finite(Sl, Tl, F(1, 4))
    pts = probe_points(*Sl, *Tl)
    require(all(min(ref_eval(Sl[k], x) for k in res.s_indices)
                <= max(ref_eval(Tl[k], x) for k in res.t_indices) for x in pts), "family extraction")
    checked.append("condition C")
    # insertion examples
    ins = insert_gap_detailed(SPIKE, G_WELL, HALF)
    require(ins.lam == 2, f"insert lambda {ins.lam}")
    dense_check("insert", ins.a, lambda x: max(F(0), 1 - 2 * abs(x - HALF)))
    pts = probe_points(SPIKE, G_WELL, ins.a)
    require(sampled_le(SPIKE, ins.a, pts) is None and sampled_le(ins.a, G_WELL, pts) is None,
            "insert sandwich oracle")
    f = PLFunction.indicator(HALF, 1)
    g = PLFunction.indicator(F(1, 4), 1, closed_left=False)
    tol = F(1, 2 ** 10)
    h, _ = kt_compact(f, g, tol)
    pts = probe_points(f, g, h)
    require(sampled_le(pl_shift(f, -tol), h, pts) is None and sampled_le(h, g, pts) is None,
            "zero-gap kt oracle")
    checked.append("insertion")
    # finite-space examples
    gens = [FiniteFunction([0, 0, 1]), FiniteFunction([0, 1, 0])]
    require(separates(gens) == (brute_pair(gens) is None) == True, "separates example")  # noqa: E712
    u = [FiniteFunction([2, 2, 3])]
    require(evaluate(interpolate_pair(u, 0, 2, 0, 1), u) == FiniteFunction([0, 0, 1]), "interpolate")
    u = [FiniteFunction([0, 1, 2])]
    h3 = FiniteFunction([5, -1, 2])
    require(evaluate(sw_construct(u, h3), u) == h3, "sw example")
    affine = [FiniteFunction([a, a + b, a + 2 * b]) for a in range(-6, 7) for b in range(-6, 7)]
    require(h3 not in affine and h3[1] != (h3[0] + h3[2]) / 2, "target should not be affine")
    hh = FiniteFunction([0, 1])
    a = clopen_approx(hh, [Add(Const(F(1, 2)), Gen(0)), Const(F(3, 2))], [Add(Const(1), Gen(0))], 1,
                      [FiniteFunction([0, 1])])
    av = evaluate(a, [FiniteFunction([0, 1])])
    require(av == FiniteFunction([F(1, 2), F(3, 2)]) and distance(av, hh) <= 1, "clopen example")
    checked.append("finite lattice")
    # CLI insert on the spike example
    import io
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        p = Path(tmp) / "in.json"
        p.write_text(json.dumps({"model": "pl-interval",
                                 "functions": {"f": pl_to_json(SPIKE), "g": pl_to_json(G_WELL)},
                                 "params": {"epsilon": "1/2"}}))
        code = cli_run(["insert", "--input", str(p), "--out", tmp], io.StringIO(), io.StringIO())
        doc = json.loads((Path(tmp) / "certificate.json").read_text())
    require(code == 0 and doc["lambda"] == "2", "cli insert")
    from sandwich.serialize import pl_from_json

    dense_check("cli insert", pl_from_json(doc["a"]), lambda x: max(F(0), 1 - 2 * abs(x - HALF)))
    checked.append("cli")
    return f"oracles agree on {len(checked)} example groups: {', '.join(checked)}"


# -- harness ------------------------------------------------------------------------------------

CRITERIA = {
    1: ("insertion oracle soundness", criterion_1),
    2: ("approximation recurrences", criterion_2),
    3: ("Lipschitz majorant convergence", criterion_3),
    4: ("finite extraction and epsilon-necessity", criterion_4),
    5: ("extension fidelity", criterion_5),
    6: ("pipeline dichotomy", criterion_6),
    7: ("finite lattice approximation", criterion_7),
    8: ("l-algebra axioms", criterion_8),
    9: ("oracle cross-check", criterion_9),
}

RESULTS: dict[int, str] = {}


def evaluate_criterion(k):
    name, fn = CRITERIA[k]
    t0 = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except Failure as exc:
        detail, ok = str(exc), False
    line = f"{'PASS' if ok else 'FAIL'} criterion {k} ({name}): {detail} [{time.perf_counter() - t0:.1f}s]"
    RESULTS[k] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, line = evaluate_criterion(k)
    assert ok, line


if __name__ == "__main__":
    outcomes = [evaluate_criterion(k)[0] for k in sorted(CRITERIA)]
    sys.exit(0 if all(outcomes) else 1)
