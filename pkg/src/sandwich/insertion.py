"""Continuous insertion between a usc lower bound and an lsc upper bound.

``insert_gap`` handles bounds separated by a positive gap.  ``kt_compact``
removes the gap requirement with Dieudonne's iteration: each step inserts
between ``(f - 2**-(m+1)) v (a_m - 2**-m)`` and ``g ^ (a_m + 2**-m)``, which
always have a gap of ``2**-(m+1)``, and the iterates form a Cauchy sequence
whose rate is recorded step by step in an :class:`InsertionCertificate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .compactc import extract_chain
from .errors import (
    DomainError,
    InternalInvariantError,
    NotSemicontinuousError,
    ParameterError,
    PreconditionError,
)
from .funcspace import (
    PLFunction,
    as_rational,
    distance,
    le_witness,
    pl_join,
    pl_le,
    pl_meet,
    pl_shift,
)
from .semicont import (
    LipschitzFamily,
    lambda_cap,
    lsc_violation,
    schedule_start,
    usc_violation,
)


@dataclass(frozen=True)
class InsertionStep:
    n: int
    a: PLFunction
    lam: Fraction
    lower_ok: bool
    upper_ok: bool
    cauchy_distance: Fraction
    cauchy_ok: bool


@dataclass(frozen=True)
class InsertionCertificate:
    steps: tuple[InsertionStep, ...]
    final_tol: Fraction

    @property
    def ok(self) -> bool:
        return all(s.lower_ok and s.upper_ok and s.cauchy_ok for s in self.steps)


@dataclass(frozen=True)
class GapInsertion:
    a: PLFunction
    lam: Fraction
    schedule_index: int


def _require_full(h: PLFunction, name: str):
    if h.removed:
        raise DomainError(f"{name} is defined on a punctured interval; extend it first")


def _require_semicontinuous(f: PLFunction, g: PLFunction):
    bad = usc_violation(f)
    if bad is not None:
        raise NotSemicontinuousError(f"lower bound is not usc at {bad[0]}", *bad)
    bad = lsc_violation(g)
    if bad is not None:
        raise NotSemicontinuousError(f"upper bound is not lsc at {bad[0]}", *bad)


def insert_gap_detailed(f: PLFunction, g: PLFunction, eps) -> GapInsertion:
    """Like :func:`insert_gap` but also reports the lambda that worked."""
    eps = as_rational(eps)
    if eps <= 0:
        raise ParameterError(f"epsilon must be positive, got {eps}")
    _require_full(f, "f")
    _require_full(g, "g")
    _require_semicontinuous(f, g)
    w = le_witness(pl_shift(f, eps), g)
    if w is not None:
        raise PreconditionError(f"f + eps <= g fails at {w}", witness=w)
    start = schedule_start(f, g)
    cap = lambda_cap()
    found = extract_chain(LipschitzFamily(f, "upper", start, cap),
                          LipschitzFamily(g, "lower", start, cap))
    return GapInsertion(found.s, found.lam, found.index)


def insert_gap(f: PLFunction, g: PLFunction, eps) -> PLFunction:
    """Continuous ``a`` with ``f <= a <= g``, given usc ``f``, lsc ``g`` and ``f + eps <= g``.

    Walks the doubling lambda schedule until the Lipschitz majorant of ``f``
    drops below the Lipschitz minorant of ``g`` and returns that majorant.
    """
    return insert_gap_detailed(f, g, eps).a


def dyadic_exponent(tol) -> int:
    """``N`` for ``tol == 2**-N`` with ``N >= 1``."""
    tol = as_rational(tol)
    den = tol.denominator
    if tol.numerator != 1 or den < 2 or den & (den - 1):
        raise ParameterError(f"tol must be 1/2**N with N >= 1, got {tol}")
    return den.bit_length() - 1


def _step(n, a, lam, prev, f, g) -> InsertionStep:
    shift = Fraction(1, 2 ** n)
    rate = Fraction(1, 2 ** (n - 1))
    dist = distance(a, prev)
    return InsertionStep(
        n=n, a=a, lam=lam,
        lower_ok=pl_le(pl_shift(f, -shift), a),
        upper_ok=pl_le(a, g),
        cauchy_distance=dist,
        cauchy_ok=dist <= rate,
    )


def kt_compact(f: PLFunction, g: PLFunction, tol) -> tuple[PLFunction, InsertionCertificate]:
    """Continuous ``h`` with ``f - tol <= h <= g`` for usc ``f <= g`` lsc, ``tol = 2**-N``.

    Returns the ``N``-th Dieudonne iterate together with its certificate.
    The ideal limit lies within ``2**(1-N)`` of ``h`` in the uniform norm.
    """
    N = dyadic_exponent(tol)
    _require_full(f, "f")
    _require_full(g, "g")
    _require_semicontinuous(f, g)
    w = le_witness(f, g)
    if w is not None:
        raise PreconditionError(f"f <= g fails at {w}", witness=w)

    half = Fraction(1, 2)
    first = _insert_internal(pl_shift(f, -half), g, half)
    a = first.a
    # a_0 = a_1
    steps = [_step(1, a, first.lam, a, f, g)]
    for m in range(1, N):
        lower = pl_join(pl_shift(f, -Fraction(1, 2 ** (m + 1))), pl_shift(a, -Fraction(1, 2 ** m)))
        upper = pl_meet(g, pl_shift(a, Fraction(1, 2 ** m)))
        nxt = _insert_internal(lower, upper, Fraction(1, 2 ** (m + 1)))
        steps.append(_step(m + 1, nxt.a, nxt.lam, a, f, g))
        a = nxt.a
    cert = InsertionCertificate(tuple(steps), Fraction(1, 2 ** N))
    if not cert.ok:
        raise InternalInvariantError("Dieudonne recurrences failed on valid input")
    return a, cert


def _insert_internal(f, g, eps) -> GapInsertion:
    try:
        return insert_gap_detailed(f, g, eps)
    except PreconditionError as exc:
        raise InternalInvariantError(f"iteration produced an invalid gap problem: {exc}") from exc


def certificate_failures(f: PLFunction, g: PLFunction, cert: InsertionCertificate,
                         tol: Optional[Fraction] = None) -> list[str]:
    """Re-derive every claim of ``cert`` from the stored iterates.

    Recorded flags are ignored; only order comparisons and norms from
    :mod:`sandwich.funcspace` recomputed here count.  Returns readable
    failure messages, empty when the certificate is valid.
    """
    problems = []
    steps = cert.steps
    if not steps:
        return ["certificate has no steps"]
    if [s.n for s in steps] != list(range(1, len(steps) + 1)):
        problems.append("steps are not numbered 1..N")
    if cert.final_tol != Fraction(1, 2 ** len(steps)):
        problems.append(f"final_tol {cert.final_tol} != 2**-{len(steps)}")
    if tol is not None and as_rational(tol) != cert.final_tol:
        problems.append(f"final_tol {cert.final_tol} != requested {tol}")
    prev = steps[0].a
    for s in steps:
        n = s.n
        if s.a.removed or not s.a.is_continuous():
            problems.append(f"a_{n} is not continuous")
        if not pl_le(pl_shift(f, -Fraction(1, 2 ** n)), s.a):
            problems.append(f"f - 2**-{n} <= a_{n} fails")
        if not pl_le(s.a, g):
            problems.append(f"a_{n} <= g fails")
        bound = Fraction(1, 2 ** (n - 1))
        within = pl_le(pl_shift(prev, -bound), s.a) and pl_le(s.a, pl_shift(prev, bound))
        if distance(s.a, prev) > bound or not within:
            problems.append(f"|a_{n} - a_{n - 1}| <= 2**-{n - 1} fails")
        prev = s.a
    return problems


def verify_certificate(f, g, cert, tol=None) -> bool:
    return not certificate_failures(f, g, cert, tol)
