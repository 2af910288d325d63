from fractions import Fraction

import pytest
from hypothesis import given, settings

from instances import pl_functions, small_nonneg
from oracles import brute_lipschitz, grid, probe_points, ref_eval
from sandwich.errors import NotSemicontinuousError, ParameterError, ScheduleCapError
from sandwich.funcspace import PLFunction, pl_eval, pl_le
from sandwich.semicont import (
    LipschitzFamily,
    default_samples,
    dilworth_witness,
    is_continuous,
    is_lsc,
    is_usc,
    lambda_schedule,
    lower_lipschitz,
    lsc_envelope,
    lsc_violation,
    schedule_start,
    upper_lipschitz,
    usc_envelope,
    usc_violation,
)

F = Fraction
HALF = F(1, 2)
SPIKE = PLFunction.indicator(HALF, HALF)  # 0 except value 1 at 1/2
STEP_USC = PLFunction.indicator(HALF, 1)
STEP_LSC = PLFunction.indicator(HALF, 1, closed_left=False)
STEP_LOW = PLFunction.from_records([(0, None, 0, 0), (HALF, 0, 0, 1), (1, 1, 1, None)])
G_WELL = PLFunction.constant(HALF) + PLFunction.indicator(F(1, 4), F(3, 4), closed_left=False,
                                                          closed_right=False)
TENT4 = PLFunction.from_points([(0, 0), (F(1, 4), 0), (HALF, 1), (F(3, 4), 0), (1, 0)])


def test_predicates():
    assert is_usc(STEP_USC)
    assert usc_violation(STEP_LOW) == (HALF, 1)
    assert is_usc(PLFunction.linear(2, -1))
    assert is_lsc(STEP_LSC)
    assert lsc_violation(STEP_USC) == (HALF, 1)
    assert is_lsc(PLFunction.constant(0))


def test_envelopes():
    assert usc_envelope(STEP_LOW) == STEP_USC
    assert usc_envelope(STEP_USC) == STEP_USC
    assert usc_envelope(TENT4) == TENT4
    assert lsc_envelope(STEP_USC) == STEP_LSC


def test_upper_lipschitz_spike_is_tent():
    env = upper_lipschitz(SPIKE, 4)
    assert env == TENT4


def test_upper_lipschitz_spike_brute_force():
    env = upper_lipschitz(SPIKE, 4)
    xs = grid()
    assert [pl_eval(env, x) for x in xs] == brute_lipschitz(SPIKE, 4, xs)


def test_lower_lipschitz_well():
    env = lower_lipschitz(G_WELL, 4)

    def closed_form(x):
        d = max(F(0), min(x - F(1, 4), F(3, 4) - x))
        return min(F(3, 2), HALF + 4 * d)

    xs = grid()
    assert all(pl_eval(env, x) == closed_form(x) for x in xs)
    assert [pl_eval(env, x) for x in xs] == brute_lipschitz(G_WELL, 4, xs, "lower")


def test_lipschitz_trivial_cases():
    x = PLFunction.linear(1, 0)
    assert upper_lipschitz(x, 1) == x
    assert lower_lipschitz(x, 1) == x
    assert pl_le(upper_lipschitz(SPIKE, 2), upper_lipschitz(SPIKE, 1))
    assert pl_le(lower_lipschitz(G_WELL, 1), lower_lipschitz(G_WELL, 2))
    with pytest.raises(ParameterError):
        upper_lipschitz(x, 0)


def test_dilworth_examples():
    assert dilworth_witness(SPIKE, F(1, 16), [HALF]) == 1
    assert dilworth_witness(SPIKE, F(1, 16), [F(5, 8)]) == 8
    for lam in (1, 2, 4):
        assert brute_lipschitz(SPIKE, lam, [F(5, 8)])[0] > F(1, 16)
    assert brute_lipschitz(SPIKE, 8, [F(5, 8)])[0] <= F(1, 16)
    tent = PLFunction.from_points([(0, 0), (HALF, 3), (1, 0)])
    assert dilworth_witness(tent, F(1, 16)) == schedule_start(tent) == 6


def test_dilworth_rejects_non_usc():
    with pytest.raises(NotSemicontinuousError) as info:
        dilworth_witness(STEP_LOW, F(1, 16))
    assert info.value.point == HALF and info.value.deficit == 1


def test_schedule_cap(monkeypatch):
    monkeypatch.setenv("SANDWICH_LAMBDA_CAP", "4")
    assert list(lambda_schedule(1)) == [1, 2, 4]
    with pytest.raises(ScheduleCapError):
        dilworth_witness(SPIKE, F(1, 16), [F(5, 8)])


def test_family_members():
    fam = LipschitzFamily(SPIKE)
    assert fam.lam(0) == 1 and fam.lam(3) == 8
    assert fam.member(2) == TENT4
    low = LipschitzFamily(G_WELL, "lower")
    assert low.member(2) == lower_lipschitz(G_WELL, 4)


def test_default_samples():
    pts = default_samples(TENT4, extra=[F(1, 3)])
    assert {0, F(1, 8), F(1, 4), F(1, 3), 1} <= set(pts)


# -- properties ----------------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(pl_functions(), small_nonneg)
def test_upper_lipschitz_invariants(f, extra):
    lam = schedule_start(f) + extra
    mu = 2 * lam
    up, up2 = upper_lipschitz(f, lam), upper_lipschitz(f, mu)
    assert up.is_continuous()
    assert all(abs(s) <= lam for s in up.slopes())
    assert pl_le(f, up)
    assert pl_le(up2, up)
    low = lower_lipschitz(f, lam)
    assert all(abs(s) <= lam for s in low.slopes())
    assert pl_le(low, f)
    assert pl_le(low, lower_lipschitz(f, mu))


@settings(max_examples=300, deadline=None)
@given(pl_functions(), small_nonneg)
def test_duality(f, extra):
    lam = 1 + extra
    assert upper_lipschitz(-f, lam) == -lower_lipschitz(f, lam)


@settings(max_examples=300, deadline=None)
@given(pl_functions())
def test_envelope_characterisations(f):
    assert is_usc(f) == (usc_envelope(f) == f)
    assert is_lsc(f) == (lsc_envelope(f) == f)
    assert is_continuous(f) == (is_usc(f) and is_lsc(f))
    assert is_usc(usc_envelope(f)) and is_lsc(lsc_envelope(f))


@settings(max_examples=100, deadline=None)
@given(pl_functions("usc"))
def test_envelope_reaches_breakpoint_values(f):
    # for usc PL input the decreasing family hits the point value at each breakpoint
    fam = LipschitzFamily(f)
    pending = set(f.xs)
    for _, env in fam:
        pending = {b for b in pending if pl_eval(env, b) != pl_eval(f, b)}
        if not pending:
            break
    assert not pending


@settings(max_examples=40, deadline=None)
@given(pl_functions())
def test_upper_lipschitz_matches_brute_force(f):
    lam = schedule_start(f)
    env = upper_lipschitz(f, lam)
    xs = probe_points(f, n=256)
    # sources on the same grid plus all stored limits give the exact supremum
    # because the sup is attained at a breakpoint (or its limit) or at x itself
    assert [pl_eval(env, x) for x in xs] == brute_lipschitz(f, lam, xs, n=256)
    assert all(ref_eval(env, x) >= ref_eval(f, x) for x in xs)
