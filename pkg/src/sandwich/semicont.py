"""Semicontinuity checks, envelopes and Lipschitz regularization families.

A bounded usc function is the pointwise meet of the decreasing family of
Lipschitz majorants

    f^lam(x) = sup_y ( f(y) - lam * |x - y| ),

and dually an lsc function is the join of the increasing family
``g_lam(x) = inf_y ( g(y) + lam * |x - y| )``.  For piecewise-linear data
both are computed exactly by one forward and one backward running-sup sweep
over the closed graph.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .errors import NotSemicontinuousError, ParameterError, ScheduleCapError
from .funcspace import (
    PLFunction,
    _max_present,
    _min_present,
    as_rational,
    pl_eval,
    pl_join,
    reflect,
)

DEFAULT_LAMBDA_CAP = Fraction(2) ** 40


def lambda_cap() -> Fraction:
    """Largest schedule value; ``SANDWICH_LAMBDA_CAP`` overrides the default."""
    raw = os.environ.get("SANDWICH_LAMBDA_CAP")
    if raw:
        cap = as_rational(raw)
        if cap <= 0:
            raise ParameterError("SANDWICH_LAMBDA_CAP must be positive")
        return cap
    return DEFAULT_LAMBDA_CAP


# -- semicontinuity ----------------------------------------------------------


def usc_violation(f: PLFunction) -> Optional[tuple[Fraction, Fraction]]:
    """First ``(breakpoint, deficit)`` where a one-sided limit exceeds the value."""
    for x, l, v, r in f.records():
        if v is None:
            continue
        top = _max_present(l, r)
        if top > v:
            return x, top - v
    return None


def lsc_violation(g: PLFunction) -> Optional[tuple[Fraction, Fraction]]:
    for x, l, v, r in g.records():
        if v is None:
            continue
        bottom = _min_present(l, r)
        if bottom < v:
            return x, v - bottom
    return None


def is_usc(f: PLFunction) -> bool:
    return usc_violation(f) is None


def is_lsc(g: PLFunction) -> bool:
    return lsc_violation(g) is None


def is_continuous(f: PLFunction) -> bool:
    return is_usc(f) and is_lsc(f)


def usc_envelope(f: PLFunction) -> PLFunction:
    """Raise each point value to the largest adjacent limit."""
    values = [None if v is None else _max_present(l, v, r) for _, l, v, r in f.records()]
    return PLFunction._raw(f.xs, f.lefts, values, f.rights)


def lsc_envelope(g: PLFunction) -> PLFunction:
    values = [None if v is None else _min_present(l, v, r) for _, l, v, r in g.records()]
    return PLFunction._raw(g.xs, g.lefts, values, g.rights)


# -- Lipschitz regularization -------------------------------------------------


def _running_sup(xs, lefts, values, rights):
    """``M(x) = sup`` of the closed graph over abscissae ``<= x``.

    Returns breakpoint lists; extra breakpoints are inserted where an affine
    piece climbs above the running maximum.
    """
    ox, ol, ov, orr = [], [], [], []
    cur = _max_present(values[0], rights[0])
    ox.append(xs[0]); ol.append(None); ov.append(cur); orr.append(cur)
    k = len(xs) - 1
    for i in range(k):
        a, b = xs[i], xs[i + 1]
        ra, lb = rights[i], lefts[i + 1]
        if lb > cur:
            if ra < cur:
                t = a + (b - a) * (cur - ra) / (lb - ra)
                ox.append(t); ol.append(cur); ov.append(cur); orr.append(cur)
            left_b = lb
        else:
            left_b = cur
        cur = _max_present(cur, lb, values[i + 1], rights[i + 1])
        ox.append(b); ol.append(left_b); ov.append(cur)
        orr.append(cur if i + 1 < k else None)
    return ox, ol, ov, orr


def _forward_part(f: PLFunction, lam: Fraction) -> PLFunction:
    """``sup_{y <= x} ( f(y) - lam * (x - y) )`` over the closed graph."""
    def tilt(seq):
        return [None if v is None else v + lam * x for x, v in zip(f.xs, seq)]

    xs, ls, vs, rs = _running_sup(f.xs, tilt(f.lefts), tilt(f.values), tilt(f.rights))

    def untilt(seq):
        return [None if v is None else v - lam * x for x, v in zip(xs, seq)]

    return PLFunction._raw(xs, untilt(ls), untilt(vs), untilt(rs))


def upper_lipschitz(f: PLFunction, lam) -> PLFunction:
    """Least ``lam``-Lipschitz majorant ``sup_y ( f(y) - lam * |x - y| )``.

    The sup runs over the closed graph of ``f``: every affine piece together
    with its limit values, and every present point value.
    """
    lam = as_rational(lam)
    if lam <= 0:
        raise ParameterError(f"lambda must be positive, got {lam}")
    forward = _forward_part(f, lam)
    backward = reflect(_forward_part(reflect(f), lam))
    return pl_join(forward, backward)


def lower_lipschitz(g: PLFunction, lam) -> PLFunction:
    """Greatest ``lam``-Lipschitz minorant ``inf_y ( g(y) + lam * |x - y| )``."""
    return -upper_lipschitz(-g, lam)


def schedule_start(*fs: PLFunction) -> Fraction:
    """``max(1, largest |slope|)`` over the given functions."""
    return max([Fraction(1)] + [f.max_abs_slope() for f in fs])


def lambda_schedule(start, cap=None) -> Iterator[Fraction]:
    """``start, 2*start, 4*start, ...`` up to ``cap``."""
    lam = as_rational(start)
    if lam <= 0:
        raise ParameterError("schedule must start at a positive lambda")
    cap = lambda_cap() if cap is None else as_rational(cap)
    while lam <= cap:
        yield lam
        lam *= 2


@dataclass(frozen=True)
class LipschitzFamily:
    """The monotone chain ``base^lam`` (``upper``) or ``base_lam`` (``lower``) along a schedule.

    ``upper`` decreases to ``usc_envelope(base)``; ``lower`` increases to
    ``lsc_envelope(base)``.
    """

    base: PLFunction
    direction: str = "upper"
    start: Optional[Fraction] = None
    cap: Optional[Fraction] = None

    def __post_init__(self):
        if self.direction not in ("upper", "lower"):
            raise ParameterError(f"direction must be 'upper' or 'lower', not {self.direction!r}")
        if self.start is None:
            object.__setattr__(self, "start", schedule_start(self.base))
        if self.cap is None:
            object.__setattr__(self, "cap", lambda_cap())

    def lam(self, j: int) -> Fraction:
        return self.start * 2 ** j

    def member(self, j: int) -> PLFunction:
        lam = self.lam(j)
        if lam > self.cap:
            raise ScheduleCapError(f"schedule index {j} exceeds the lambda cap {self.cap}")
        if self.direction == "upper":
            return upper_lipschitz(self.base, lam)
        return lower_lipschitz(self.base, lam)

    def __iter__(self) -> Iterator[tuple[Fraction, PLFunction]]:
        for lam in lambda_schedule(self.start, self.cap):
            yield lam, (upper_lipschitz(self.base, lam) if self.direction == "upper"
                        else lower_lipschitz(self.base, lam))


def default_samples(f: PLFunction, extra: Iterable = ()) -> list[Fraction]:
    """All breakpoints, all piece midpoints, plus caller extras (removed points skipped)."""
    pts = set(f.xs)
    pts.update((a + b) / 2 for a, b in zip(f.xs, f.xs[1:]))
    pts.update(as_rational(x) for x in extra)
    gone = set(f.removed)
    return sorted(p for p in pts if p not in gone)


def dilworth_witness(f: PLFunction, delta, samples=None, *, start=None, cap=None) -> Fraction:
    """First schedule value ``lam`` with ``f^lam <= f + delta`` at every sample.

    Raises :class:`NotSemicontinuousError` for a non-usc ``f``: the family
    then converges to ``usc_envelope(f)``, which exceeds ``f`` by the jump
    deficit at the reported breakpoint.
    """
    delta = as_rational(delta)
    if delta <= 0:
        raise ParameterError("delta must be positive")
    bad = usc_violation(f)
    if bad is not None:
        raise NotSemicontinuousError(
            f"not upper semicontinuous at {bad[0]}: Lipschitz majorants converge "
            f"to the usc envelope, {bad[1]} above f there", *bad)
    pts = default_samples(f) if samples is None else [as_rational(x) for x in samples]
    targets = [(x, pl_eval(f, x) + delta) for x in pts]
    start = schedule_start(f) if start is None else as_rational(start)
    for lam in lambda_schedule(start, cap):
        env = upper_lipschitz(f, lam)
        if all(pl_eval(env, x) <= t for x, t in targets):
            return lam
    raise ScheduleCapError("lambda schedule exhausted before the majorants settled; "
                           "impossible for usc piecewise-linear input")
