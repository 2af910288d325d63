"""Exact bounded functions on the three desk-scale spaces.

* :class:`PLFunction` -- piecewise-linear functions with jumps on a closed
  rational interval.  A breakpoint may carry an *absent* point value
  (``None``); such points are removed from the space, which is how functions
  on a dense subspace ``X = [lo, hi] minus D`` are represented.
* :class:`SeqFunction` -- eventually periodic rational sequences on the
  naturals, optionally with a value at the added point at infinity.
* :class:`FiniteFunction` -- rational vectors on a finite discrete space.

Everything is exact :class:`fractions.Fraction` arithmetic and every value is
immutable.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from functools import reduce
from math import lcm
from numbers import Rational as _RationalABC
from typing import Callable, Iterable, Optional, Sequence

from .errors import DomainError, ParameterError

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def _opt(value):
    return None if value is None else as_rational(value)


def _max_present(*vals):
    return max(v for v in vals if v is not None)


def _min_present(*vals):
    return min(v for v in vals if v is not None)


# --------------------------------------------------------------------------
# Piecewise-linear functions
# --------------------------------------------------------------------------


class PLFunction:
    """Bounded piecewise-linear function on ``[lo, hi]`` with jump discontinuities.

    Breakpoint ``i`` stores ``(lefts[i], values[i], rights[i])``: the left
    limit, the point value and the right limit.  ``lefts[0]`` and
    ``rights[-1]`` are ``None`` (endpoints only carry the inward limit).  On
    ``(xs[i], xs[i+1])`` the function interpolates ``rights[i]`` and
    ``lefts[i+1]``.  ``values[i] is None`` marks a point removed from the
    space.  Instances are always canonical, so ``==`` is pointwise equality.
    """

    __slots__ = ("xs", "lefts", "values", "rights", "_hash")

    def __init__(self, xs, values, lefts=None, rights=None):
        xs = tuple(as_rational(x) for x in xs)
        values = tuple(_opt(v) for v in values)
        k = len(xs) - 1
        if k < 1:
            raise DomainError("a PL function needs at least the two domain endpoints")
        if len(values) != k + 1:
            raise DomainError("one point value (or None) is required per breakpoint")
        for a, b in zip(xs, xs[1:]):
            if not a < b:
                raise DomainError(f"breakpoints must be strictly increasing (at {b})")
        if values[0] is None or values[-1] is None:
            raise DomainError("domain endpoints cannot be removed points")
        lefts = values if lefts is None else tuple(_opt(v) for v in lefts)
        rights = values if rights is None else tuple(_opt(v) for v in rights)
        if len(lefts) != k + 1 or len(rights) != k + 1:
            raise DomainError("limit sequences must have one entry per breakpoint")
        lefts = (None,) + lefts[1:]
        rights = rights[:-1] + (None,)
        if any(v is None for v in lefts[1:]) or any(v is None for v in rights[:-1]):
            raise DomainError("missing one-sided limit at an interior breakpoint")
        self.xs, self.lefts, self.values, self.rights = _canonical(xs, lefts, values, rights)
        self._hash = None

    @classmethod
    def _raw(cls, xs, lefts, values, rights):
        obj = object.__new__(cls)
        obj.xs, obj.lefts, obj.values, obj.rights = _canonical(
            tuple(xs), tuple(lefts), tuple(values), tuple(rights))
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c, lo=0, hi=1) -> "PLFunction":
        c = as_rational(c)
        return cls((lo, hi), (c, c))

    @classmethod
    def linear(cls, slope, intercept, lo=0, hi=1) -> "PLFunction":
        """The affine function ``slope * x + intercept``."""
        slope, intercept = as_rational(slope), as_rational(intercept)
        lo, hi = as_rational(lo), as_rational(hi)
        return cls((lo, hi), (slope * lo + intercept, slope * hi + intercept))

    @classmethod
    def from_points(cls, points) -> "PLFunction":
        """Continuous interpolation through ``[(x0, y0), (x1, y1), ...]``."""
        xs, ys = zip(*points)
        return cls(xs, ys)

    @classmethod
    def from_records(cls, records) -> "PLFunction":
        """Build from ``(x, left, value, right)`` tuples."""
        xs, lefts, values, rights = zip(*records)
        return cls(xs, values, lefts, rights)

    @classmethod
    def indicator(cls, a, b, lo=0, hi=1, *, closed_left=True, closed_right=True,
                  height=1) -> "PLFunction":
        """``height`` times the characteristic function of the interval from ``a`` to ``b``.

        ``indicator(c, c)`` is the characteristic function of the point ``{c}``.
        """
        a, b, lo, hi = map(as_rational, (a, b, lo, hi))
        height = as_rational(height)
        if not lo <= a <= b <= hi:
            raise DomainError("indicator interval must lie inside the domain")

        def inside(x):
            if a < x < b:
                return True
            return (x == a and closed_left) or (x == b and closed_right)

        xs = sorted({lo, a, b, hi})
        lefts = [height if a < x <= b else 0 for x in xs]
        rights = [height if a <= x < b else 0 for x in xs]
        values = [height if inside(x) else 0 for x in xs]
        return cls(xs, values, lefts, rights)

    # -- structure ---------------------------------------------------------

    @property
    def lo(self) -> Fraction:
        return self.xs[0]

    @property
    def hi(self) -> Fraction:
        return self.xs[-1]

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return (self.xs[0], self.xs[-1])

    @property
    def removed(self) -> tuple[Fraction, ...]:
        """Points of ``[lo, hi]`` that are not in the space."""
        return tuple(x for x, v in zip(self.xs, self.values) if v is None)

    def records(self):
        return list(zip(self.xs, self.lefts, self.values, self.rights))

    def slopes(self) -> list[Fraction]:
        return [(self.lefts[i + 1] - self.rights[i]) / (self.xs[i + 1] - self.xs[i])
                for i in range(len(self.xs) - 1)]

    def max_abs_slope(self) -> Fraction:
        return max(abs(s) for s in self.slopes())

    def is_continuous(self) -> bool:
        """Continuity on the space itself (removed points are ignored)."""
        return all(v is None or all(lim is None or lim == v for lim in (l, r))
                   for l, v, r in zip(self.lefts, self.values, self.rights))

    def __eq__(self, other):
        if not isinstance(other, PLFunction):
            return NotImplemented
        return (self.xs == other.xs and self.values == other.values
                and self.lefts == other.lefts and self.rights == other.rights)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.xs, self.lefts, self.values, self.rights))
        return self._hash

    def __repr__(self):
        parts = []
        for x, l, v, r in self.records():
            if l == v == r or (l is None and v == r) or (r is None and l == v):
                parts.append(f"{x}:{v}")
            else:
                parts.append(f"{x}:({l}|{v}|{r})")
        return f"PLFunction[{', '.join(parts)}]"

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x) -> Fraction:
        return pl_eval(self, x)

    def triple(self, x) -> tuple:
        """``(left limit, value, right limit)`` at an arbitrary point."""
        x = as_rational(x)
        self._check_point(x)
        i = bisect_left(self.xs, x)
        if i < len(self.xs) and self.xs[i] == x:
            return (self.lefts[i], self.values[i], self.rights[i])
        y = self._interp(i - 1, x)
        return (y, y, y)

    def _check_point(self, x):
        if not self.xs[0] <= x <= self.xs[-1]:
            raise DomainError(f"{x} lies outside [{self.xs[0]}, {self.xs[-1]}]")

    def _interp(self, i, x):
        a, b = self.xs[i], self.xs[i + 1]
        ya, yb = self.rights[i], self.lefts[i + 1]
        return ya + (yb - ya) * (x - a) / (b - a)

    # -- algebra sugar ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, PLFunction):
            return pl_affine(1, self, 1, other)
        return pl_shift(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PLFunction):
            return pl_affine(1, self, -1, other)
        return pl_shift(self, -as_rational(other))

    def __rsub__(self, other):
        return pl_shift(pl_scale(self, -1), other)

    def __neg__(self):
        return pl_scale(self, -1)

    def __mul__(self, c):
        if isinstance(c, PLFunction):
            return NotImplemented
        return pl_scale(self, c)

    __rmul__ = __mul__

    def meet(self, other):
        return pl_meet(self, other)

    def join(self, other):
        return pl_join(self, other)

    def le(self, other) -> bool:
        return pl_le(self, other)

    def puncture(self, points: Iterable) -> "PLFunction":
        """Remove ``points`` from the space, keeping the one-sided limits."""
        points = sorted({as_rational(p) for p in points})
        if not points:
            return self
        for p in points:
            if not self.lo < p < self.hi:
                raise DomainError(f"only interior points can be removed, got {p}")
        xs = sorted(set(self.xs) | set(points))
        lefts, values, rights = _triples_at(self, xs)
        drop = set(points)
        values = [None if x in drop else v for x, v in zip(xs, values)]
        return PLFunction._raw(xs, lefts, values, rights)

    def fill(self, fill_value: Callable) -> "PLFunction":
        """Supply a point value at each removed point via ``fill_value(left, right)``."""
        values = [fill_value(l, r) if v is None else v
                  for l, v, r in zip(self.lefts, self.values, self.rights)]
        return PLFunction._raw(self.xs, self.lefts, values, self.rights)


def _removable(xs, lefts, values, rights, i, prev, nxt):
    v = values[i]
    if v is None or lefts[i] != v or rights[i] != v:
        return False
    s_prev = (lefts[i] - rights[prev]) / (xs[i] - xs[prev])
    s_next = (lefts[nxt] - rights[i]) / (xs[nxt] - xs[i])
    return s_prev == s_next


def _canonical(xs, lefts, values, rights):
    keep = [0]
    n = len(xs)
    for j in range(1, n):
        if len(keep) >= 2 and _removable(xs, lefts, values, rights, keep[-1], keep[-2], j):
            keep.pop()
        keep.append(j)
    if len(keep) == n:
        return xs, lefts, values, rights
    return (tuple(xs[i] for i in keep), tuple(lefts[i] for i in keep),
            tuple(values[i] for i in keep), tuple(rights[i] for i in keep))


def _same_interval(f: PLFunction, g: PLFunction):
    if f.domain != g.domain:
        raise DomainError(f"domains differ: {f.domain} vs {g.domain}")


def _triples_at(f: PLFunction, xs: Sequence[Fraction]):
    """Limits and values of ``f`` at sorted points ``xs`` (a superset walk)."""
    lefts, values, rights = [], [], []
    fx = f.xs
    j = 0
    last = len(fx) - 1
    for x in xs:
        while j < last and fx[j + 1] <= x:
            j += 1
        if fx[j] == x:
            lefts.append(f.lefts[j])
            values.append(f.values[j])
            rights.append(f.rights[j])
        else:
            y = f._interp(j, x)
            lefts.append(y)
            values.append(y)
            rights.append(y)
    lefts[0] = None
    rights[-1] = None
    return lefts, values, rights


def _crossings(xs, fl, fr, gl, gr):
    """Insert the points where ``f - g`` changes strict sign inside a piece."""
    out = [xs[0]]
    for i in range(len(xs) - 1):
        d0 = fr[i] - gr[i]
        d1 = fl[i + 1] - gl[i + 1]
        if (d0 < 0 < d1) or (d1 < 0 < d0):
            a, b = xs[i], xs[i + 1]
            out.append(a + (b - a) * d0 / (d0 - d1))
        out.append(xs[i + 1])
    return out


def _merge(f, g, crossings=False):
    _same_interval(f, g)
    xs = sorted(set(f.xs) | set(g.xs))
    ft = _triples_at(f, xs)
    gt = _triples_at(g, xs)
    if crossings:
        xs2 = _crossings(xs, ft[0], ft[2], gt[0], gt[2])
        if len(xs2) != len(xs):
            xs = xs2
            ft = _triples_at(f, xs)
            gt = _triples_at(g, xs)
    return xs, ft, gt


def _combine(op, a, b):
    return [None if p is None or q is None else op(p, q) for p, q in zip(a, b)]


def _pointwise(f, g, op, crossings):
    xs, (fl, fv, fr), (gl, gv, gr) = _merge(f, g, crossings)
    return PLFunction._raw(xs, _combine(op, fl, gl), _combine(op, fv, gv), _combine(op, fr, gr))


def pl_eval(f: PLFunction, x) -> Fraction:
    """Value of ``f`` at ``x``; removed points and points off the domain are errors."""
    x = as_rational(x)
    f._check_point(x)
    i = bisect_left(f.xs, x)
    if i < len(f.xs) and f.xs[i] == x:
        v = f.values[i]
        if v is None:
            raise DomainError(f"{x} has been removed from the space")
        return v
    return f._interp(i - 1, x)


def pl_meet(f: PLFunction, g: PLFunction) -> PLFunction:
    return _pointwise(f, g, min, crossings=True)


def pl_join(f: PLFunction, g: PLFunction) -> PLFunction:
    return _pointwise(f, g, max, crossings=True)


def pl_affine(alpha, f: PLFunction, beta, g: PLFunction) -> PLFunction:
    """Exact ``alpha * f + beta * g``."""
    alpha, beta = as_rational(alpha), as_rational(beta)
    return _pointwise(f, g, lambda p, q: alpha * p + beta * q, crossings=False)


def _map_values(f: PLFunction, op) -> PLFunction:
    def m(seq):
        return [None if v is None else op(v) for v in seq]
    return PLFunction._raw(f.xs, m(f.lefts), m(f.values), m(f.rights))


def pl_shift(f: PLFunction, c) -> PLFunction:
    c = as_rational(c)
    return _map_values(f, lambda v: v + c)


def pl_scale(f: PLFunction, c) -> PLFunction:
    c = as_rational(c)
    return _map_values(f, lambda v: c * v)


def pl_meet_all(fs: Iterable[PLFunction]) -> PLFunction:
    return reduce(pl_meet, fs)


def pl_join_all(fs: Iterable[PLFunction]) -> PLFunction:
    return reduce(pl_join, fs)


def le_witness(f: PLFunction, g: PLFunction) -> Optional[Fraction]:
    """A point where ``f > g``, or ``None`` when ``f <= g`` everywhere.

    Comparison is over the common space: a point removed from either side is
    skipped, but the limits there still constrain the neighbouring pieces.
    """
    xs, (fl, fv, fr), (gl, gv, gr) = _merge(f, g)
    for i, x in enumerate(xs):
        if fv[i] is not None and gv[i] is not None and fv[i] > gv[i]:
            return x
        if i + 1 == len(xs):
            break
        d0 = fr[i] - gr[i]
        d1 = fl[i + 1] - gl[i + 1]
        if d0 <= 0 and d1 <= 0:
            continue
        a, b = x, xs[i + 1]
        if d0 > 0 and d1 > 0:
            s = Fraction(1, 2)
        else:
            root = d0 / (d0 - d1)
            s = root / 2 if d0 > 0 else (root + 1) / 2
        return a + (b - a) * s
    return None


def pl_le(f: PLFunction, g: PLFunction) -> bool:
    """Exact pointwise ``f <= g``."""
    return le_witness(f, g) is None


def pl_sup(f: PLFunction) -> Fraction:
    """``sup f`` over the space (limits at removed points count)."""
    return max(v for seq in (f.lefts, f.values, f.rights) for v in seq if v is not None)


def pl_inf(f: PLFunction) -> Fraction:
    return min(v for seq in (f.lefts, f.values, f.rights) for v in seq if v is not None)


def reflect(f: PLFunction) -> PLFunction:
    """``x -> f(lo + hi - x)``."""
    lo, hi = f.domain
    xs = [lo + hi - x for x in reversed(f.xs)]
    return PLFunction._raw(xs, f.rights[::-1], f.values[::-1], f.lefts[::-1])


# --------------------------------------------------------------------------
# Eventually periodic sequences
# --------------------------------------------------------------------------


class SeqFunction:
    """Eventually periodic sequence ``n -> prefix[n]`` then ``period`` repeating.

    ``infinity`` is the value at the point at infinity of the one-point
    compactification, or ``None`` for a function on the naturals alone.
    """

    __slots__ = ("prefix", "period", "infinity")

    def __init__(self, prefix=(), period=(0,), infinity=None):
        prefix = tuple(as_rational(v) for v in prefix)
        period = tuple(as_rational(v) for v in period)
        if not period:
            raise DomainError("period must be nonempty")
        self.prefix, self.period = _canonical_seq(prefix, period)
        self.infinity = _opt(infinity)

    @classmethod
    def constant(cls, c, infinity=None) -> "SeqFunction":
        return cls((), (c,), infinity)

    @property
    def on_compactification(self) -> bool:
        return self.infinity is not None

    def __call__(self, n):
        if n is INFINITY:
            if self.infinity is None:
                raise DomainError("the point at infinity is not in this space")
            return self.infinity
        if n < 0:
            raise DomainError("sequence index must be a natural number")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def limsup(self) -> Fraction:
        return max(self.period)

    def liminf(self) -> Fraction:
        return min(self.period)

    def with_infinity(self, value) -> "SeqFunction":
        return SeqFunction(self.prefix, self.period, value)

    def __eq__(self, other):
        if not isinstance(other, SeqFunction):
            return NotImplemented
        return (self.prefix, self.period, self.infinity) == (other.prefix, other.period, other.infinity)

    def __hash__(self):
        return hash((self.prefix, self.period, self.infinity))

    def __repr__(self):
        tail = "" if self.infinity is None else f", inf={self.infinity}"
        return f"SeqFunction({list(map(str, self.prefix))}, {list(map(str, self.period))}{tail})"

    def _aligned(self, other):
        m = max(len(self.prefix), len(other.prefix))
        p = lcm(len(self.period), len(other.period))
        return [(self(n), other(n)) for n in range(m + p)], m

    def _pointwise(self, other, op):
        pairs, m = self._aligned(other)
        vals = [op(a, b) for a, b in pairs]
        if (self.infinity is None) != (other.infinity is None):
            raise DomainError("cannot combine a function on N with one on N + {inf}")
        inf = None if self.infinity is None else op(self.infinity, other.infinity)
        return SeqFunction(vals[:m], vals[m:], inf)

    def meet(self, other):
        return self._pointwise(other, min)

    def join(self, other):
        return self._pointwise(other, max)

    def affine(self, alpha, other, beta):
        alpha, beta = as_rational(alpha), as_rational(beta)
        return self._pointwise(other, lambda a, b: alpha * a + beta * b)

    def le_witness(self, other):
        pairs, _ = self._aligned(other)
        for n, (a, b) in enumerate(pairs):
            if a > b:
                return n
        if self.infinity is not None and other.infinity is not None and self.infinity > other.infinity:
            return INFINITY
        return None

    def le(self, other) -> bool:
        return self.le_witness(other) is None


class _PointAtInfinity:
    """The added point of the one-point compactification of the naturals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_PointAtInfinity, ())


INFINITY = _PointAtInfinity()


def _canonical_seq(prefix, period):
    p = len(period)
    for d in range(1, p + 1):
        if p % d == 0 and all(period[i] == period[i % d] for i in range(p)):
            period = period[:d]
            break
    while prefix and prefix[-1] == period[-1]:
        period = (prefix[-1],) + period[:-1]
        prefix = prefix[:-1]
    return prefix, period


# --------------------------------------------------------------------------
# Finite discrete spaces
# --------------------------------------------------------------------------


class FiniteFunction:
    """A rational value at each point ``0 .. n-1`` of a finite discrete space."""

    __slots__ = ("values",)

    def __init__(self, values):
        values = tuple(as_rational(v) for v in values)
        if not values:
            raise DomainError("a finite space needs at least one point")
        self.values = values

    @classmethod
    def constant(cls, c, n) -> "FiniteFunction":
        return cls([c] * n)

    @property
    def space_size(self) -> int:
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        return self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"FiniteFunction({', '.join(map(str, self.values))})"

    def _zip(self, other):
        if len(self.values) != len(other.values):
            raise DomainError(f"space sizes differ: {len(self.values)} vs {len(other.values)}")
        return zip(self.values, other.values)

    def __add__(self, other):
        if isinstance(other, FiniteFunction):
            return FiniteFunction(a + b for a, b in self._zip(other))
        c = as_rational(other)
        return FiniteFunction(a + c for a in self.values)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FiniteFunction):
            return FiniteFunction(a - b for a, b in self._zip(other))
        c = as_rational(other)
        return FiniteFunction(a - c for a in self.values)

    def __neg__(self):
        return FiniteFunction(-a for a in self.values)

    def scale(self, c) -> "FiniteFunction":
        c = as_rational(c)
        return FiniteFunction(c * a for a in self.values)

    def __mul__(self, other):
        if isinstance(other, FiniteFunction):
            return ff_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def meet(self, other):
        return FiniteFunction(min(a, b) for a, b in self._zip(other))

    def join(self, other):
        return FiniteFunction(max(a, b) for a, b in self._zip(other))

    def le(self, other) -> bool:
        return all(a <= b for a, b in self._zip(other))


def ff_mul(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """Componentwise product."""
    return FiniteFunction(a * b for a, b in f._zip(g))


# --------------------------------------------------------------------------
# Norm
# --------------------------------------------------------------------------


def sup_norm(f) -> Fraction:
    """Uniform norm ``sup |f|`` for any of the three function types."""
    if isinstance(f, PLFunction):
        return max(abs(v) for seq in (f.lefts, f.values, f.rights) for v in seq if v is not None)
    if isinstance(f, SeqFunction):
        vals = f.prefix + f.period + (() if f.infinity is None else (f.infinity,))
        return max(abs(v) for v in vals)
    if isinstance(f, FiniteFunction):
        return max(abs(v) for v in f.values)
    raise TypeError(f"no uniform norm for {type(f).__name__}")


def distance(f, g) -> Fraction:
    """``||f - g||``."""
    if isinstance(f, PLFunction):
        return sup_norm(pl_affine(1, f, -1, g))
    if isinstance(f, SeqFunction):
        return sup_norm(f.affine(1, g, -1))
    return sup_norm(f - g)


def require_positive(name: str, value) -> Fraction:
    value = as_rational(value)
    if value <= 0:
        raise ParameterError(f"{name} must be positive, got {value}")
    return value
