"""Extending semicontinuous functions from a dense subspace to a compactification.

Two models are supported:

* interval: ``X = [lo, hi]`` minus finitely many interior points ``D``,
  compactified by ``Y = [lo, hi]``.  Functions on ``X`` are
  :class:`~sandwich.funcspace.PLFunction` values whose point values at ``D``
  are absent.
* one-point: ``X`` the naturals, ``Y = X + {INFINITY}``.  Functions are
  :class:`~sandwich.funcspace.SeqFunction` values; ``infinity`` is ``None``
  on ``X``.

``extend_upper`` is ``U(f)(y) = inf over neighbourhoods of sup f``, which at a
removed point is the larger one-sided limit and at infinity is the limsup.
Whether ``U(f) <= L(g)`` survives depends on the compactification; the
closure-intersection test in :func:`check_obstruction` finds the failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    DegenerateInputError,
    DomainError,
    InternalInvariantError,
    NotSemicontinuousError,
    ParameterError,
    PreconditionError,
)
from .funcspace import (
    INFINITY,
    PLFunction,
    SeqFunction,
    as_rational,
    le_witness,
    pl_eval,
    pl_le,
    pl_shift,
    sup_norm,
)
from .insertion import InsertionCertificate, kt_compact
from .semicont import is_lsc, is_usc, lsc_violation, usc_violation

SpaceFunction = Union[PLFunction, SeqFunction]


@dataclass(frozen=True)
class DenseIntervalModel:
    """``X = [lo, hi]`` minus ``removed``, dense in ``Y = [lo, hi]``."""

    lo: Fraction
    hi: Fraction
    removed: tuple[Fraction, ...] = ()

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        removed = tuple(sorted({as_rational(d) for d in self.removed}))
        if not lo < hi:
            raise DomainError("need lo < hi")
        if any(not lo < d < hi for d in removed):
            raise DomainError("removed points must be interior")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "removed", removed)

    def restrict(self, F: PLFunction) -> PLFunction:
        return F.puncture(self.removed)

    def owns(self, f: PLFunction) -> bool:
        return f.domain == (self.lo, self.hi) and f.removed == self.removed


# -- level-set closures -------------------------------------------------------


@dataclass(frozen=True)
class IntervalRegion:
    """Finite union of closed intervals ``[a, b]`` (``a == b`` for points), canonical."""

    parts: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def from_parts(cls, parts) -> "IntervalRegion":
        merged: list[list[Fraction]] = []
        for a, b in sorted(parts):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple((a, b) for a, b in merged))

    def is_empty(self) -> bool:
        return not self.parts

    def __contains__(self, x) -> bool:
        return any(a <= x <= b for a, b in self.parts)

    def intersect(self, other: "IntervalRegion") -> "IntervalRegion":
        out = []
        i = j = 0
        while i < len(self.parts) and j < len(other.parts):
            a = max(self.parts[i][0], other.parts[j][0])
            b = min(self.parts[i][1], other.parts[j][1])
            if a <= b:
                out.append((a, b))
            if self.parts[i][1] < other.parts[j][1]:
                i += 1
            else:
                j += 1
        return IntervalRegion.from_parts(out)

    def first_point(self):
        return self.parts[0][0] if self.parts else None

    def __str__(self):
        if not self.parts:
            return "{}"
        return " U ".join(f"{{{a}}}" if a == b else f"[{a}, {b}]" for a, b in self.parts)


@dataclass(frozen=True)
class SequenceRegion:
    """Eventually periodic subset of the naturals, plus whether it holds ``INFINITY``."""

    members: SeqFunction
    has_infinity: bool

    def is_empty(self) -> bool:
        return not self.has_infinity and not any(self.members.prefix + self.members.period)

    def __contains__(self, n) -> bool:
        if n is INFINITY:
            return self.has_infinity
        return bool(self.members(n))

    def intersect(self, other: "SequenceRegion") -> "SequenceRegion":
        return SequenceRegion(self.members.meet(other.members),
                              self.has_infinity and other.has_infinity)

    def first_point(self):
        flags = self.members.prefix + self.members.period
        for n, v in enumerate(flags):
            if v:
                return n
        return INFINITY if self.has_infinity else None

    def __str__(self):
        m = self.members
        span = len(m.prefix) + 2 * len(m.period)
        shown = [str(n) for n in range(span) if m(n)]
        if any(m.period):
            shown.append("...")
        return "{" + ", ".join(shown) + "}" + (" U {inf}" if self.has_infinity else "")


Region = Union[IntervalRegion, SequenceRegion]


def _require_on_x(f: SeqFunction):
    if f.infinity is not None:
        raise DomainError("expected a function on the naturals (no value at infinity)")


def _piece_closure(a, b, r, l, eta):
    """Closure of ``{x in (a, b): affine(x) >= eta}``, affine from ``r`` to ``l``."""
    if r == l:
        return (a, b) if r >= eta else None
    s = (eta - r) / (l - r)
    if l > r:
        return (a + (b - a) * max(s, Fraction(0)), b) if s < 1 else None
    return (a, a + (b - a) * min(s, Fraction(1))) if s > 0 else None


def superlevel_closure(f: SpaceFunction, eta) -> Region:
    """Closure in ``Y`` of ``{x in X : f(x) >= eta}``."""
    eta = as_rational(eta)
    if isinstance(f, SeqFunction):
        _require_on_x(f)
        flag = lambda v: 1 if v >= eta else 0  # noqa: E731
        members = SeqFunction([flag(v) for v in f.prefix], [flag(v) for v in f.period])
        return SequenceRegion(members, any(v >= eta for v in f.period))
    parts = [(x, x) for x, v in zip(f.xs, f.values) if v is not None and v >= eta]
    for i in range(len(f.xs) - 1):
        piece = _piece_closure(f.xs[i], f.xs[i + 1], f.rights[i], f.lefts[i + 1], eta)
        if piece is not None:
            parts.append(piece)
    return IntervalRegion.from_parts(parts)


def sublevel_closure(g: SpaceFunction, lam) -> Region:
    """Closure in ``Y`` of ``{x in X : g(x) <= lam}``."""
    lam = as_rational(lam)
    if isinstance(g, SeqFunction):
        _require_on_x(g)
        return superlevel_closure(SeqFunction([-v for v in g.prefix], [-v for v in g.period]), -lam)
    return superlevel_closure(-g, -lam)


# -- extensions ----------------------------------------------------------------


def _usc_on_x(f: SpaceFunction):
    if isinstance(f, PLFunction):
        bad = usc_violation(f)
        if bad is not None:
            raise NotSemicontinuousError(f"f is not usc on X at {bad[0]}", *bad)


def _lsc_on_x(g: SpaceFunction):
    if isinstance(g, PLFunction):
        bad = lsc_violation(g)
        if bad is not None:
            raise NotSemicontinuousError(f"g is not lsc on X at {bad[0]}", *bad)


def restrict(F: SpaceFunction, like: SpaceFunction) -> SpaceFunction:
    """Restrict a function on ``Y`` to the subspace ``like`` lives on."""
    if isinstance(F, SeqFunction):
        return SeqFunction(F.prefix, F.period)
    return F.puncture(like.removed)


def extend_upper(f: SpaceFunction) -> SpaceFunction:
    """``U(f)``: the least usc extension of usc ``f`` from ``X`` to ``Y``."""
    _usc_on_x(f)
    if isinstance(f, SeqFunction):
        _require_on_x(f)
        F = f.with_infinity(f.limsup())
        ok = True
    else:
        F = f.fill(max)
        ok = is_usc(F)
    if not ok or restrict(F, f) != f:
        raise InternalInvariantError("upper extension failed its own postconditions")
    return F


def extend_lower(g: SpaceFunction) -> SpaceFunction:
    """``L(g)``: the greatest lsc extension of lsc ``g`` from ``X`` to ``Y``."""
    _lsc_on_x(g)
    if isinstance(g, SeqFunction):
        _require_on_x(g)
        G = g.with_infinity(g.liminf())
        ok = True
    else:
        G = g.fill(min)
        ok = is_lsc(G)
    if not ok or restrict(G, g) != g:
        raise InternalInvariantError("lower extension failed its own postconditions")
    return G


def usc_extension_nonunique_demo(f: SpaceFunction) -> tuple[SpaceFunction, SpaceFunction]:
    """``(U(f), U(f) + indicator of Y minus X)`` for ``f = 0``: two distinct usc extensions."""
    if sup_norm(f) != 0:
        raise PreconditionError("the demonstration expects f = 0 on X")
    U = extend_upper(f)
    if isinstance(f, SeqFunction):
        other = U.with_infinity(U.infinity + 1)
    else:
        if not f.removed:
            raise DegenerateInputError("X = Y: there is no remainder to bump")
        other = f.fill(lambda l, r: max(l, r) + 1)
        if not is_usc(other):
            raise InternalInvariantError("bumped extension is not usc")
    if restrict(other, f) != f or other == U:
        raise InternalInvariantError("second extension does not extend f or coincides with U(f)")
    return U, other


# -- obstructions and the pipeline -----------------------------------------------


@dataclass(frozen=True)
class Obstruction:
    """``point`` lies in the closures of both ``{f >= eta}`` and ``{g <= lam}``, with ``eta > lam``."""

    point: object
    eta: Fraction
    lam: Fraction


def _check_pair(f, g):
    if type(f) is not type(g):
        raise DomainError("f and g live on different models")
    _usc_on_x(f)
    _lsc_on_x(g)
    w = f.le_witness(g) if isinstance(f, SeqFunction) else le_witness(f, g)
    if w is not None:
        raise PreconditionError(f"f <= g fails at {w}", witness=w)


def check_obstruction(f: SpaceFunction, g: SpaceFunction, eta, lam) -> Optional[Obstruction]:
    """An :class:`Obstruction` when ``cl{f >= eta}`` meets ``cl{g <= lam}`` in ``Y``, else ``None``."""
    eta, lam = as_rational(eta), as_rational(lam)
    if not eta > lam:
        raise ParameterError(f"need eta > lambda, got eta={eta}, lambda={lam}")
    _check_pair(f, g)
    meet = superlevel_closure(f, eta).intersect(sublevel_closure(g, lam))
    if meet.is_empty():
        return None
    return Obstruction(meet.first_point(), eta, lam)


@dataclass(frozen=True)
class PipelineResult:
    h: PLFunction
    h_on_y: PLFunction
    certificate: InsertionCertificate
    F: PLFunction
    G: PLFunction


def obstruction_levels(top: Fraction, bottom: Fraction) -> tuple[Fraction, Fraction]:
    """``(eta, lam)`` strictly between ``bottom < top``: midpoints of the halves."""
    mid = (top + bottom) / 2
    return (mid + top) / 2, (bottom + mid) / 2


def kt_pipeline(f: PLFunction, g: PLFunction, tol) -> Union[PipelineResult, Obstruction]:
    """Insert a continuous function between usc ``f <= g`` lsc on ``X`` via ``Y``.

    Extends to ``F = U(f)``, ``G = L(g)``; if ``F <= G`` runs the compact
    construction on ``Y`` and restricts back, otherwise reports where the
    level-set closures of ``f`` and ``g`` collide.
    """
    if not isinstance(f, PLFunction) or not isinstance(g, PLFunction):
        raise ParameterError("the pipeline runs on the interval model only")
    if f.domain != g.domain or f.removed != g.removed:
        raise DomainError("f and g must share the same subspace X")
    _check_pair(f, g)
    F, G = extend_upper(f), extend_lower(g)
    y = le_witness(F, G)
    if y is None:
        h_full, cert = kt_compact(F, G, tol)
        h = h_full.puncture(f.removed)
        tol = as_rational(tol)
        if not (pl_le(pl_shift(f, -tol), h) and pl_le(h, g) and is_usc(h) and is_lsc(h)):
            raise InternalInvariantError("restricted insertion lost the sandwich")
        return PipelineResult(h, h_full, cert, F, G)
    eta, lam = obstruction_levels(pl_eval(F, y), pl_eval(G, y))
    if y not in superlevel_closure(f, eta) or y not in sublevel_closure(g, lam):
        raise InternalInvariantError(f"order failure at {y} is not explained by level-set closures")
    return Obstruction(y, eta, lam)
