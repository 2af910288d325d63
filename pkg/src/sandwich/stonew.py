"""Lattice Stone-Weierstrass on finite discrete spaces.

Elements of the vector sublattice generated by some functions (constants
adjoined) are written as :class:`LatticeExpr` trees.  On a finite space a
point-separating generator set reaches every target exactly:

    a = join_x meet_{y != x} e_xy,   e_xy(x) = h(x),  e_xy(y) = h(y),

where each ``e_xy`` is affine in a single separating generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .compactc import extract_finite_discrete
from .errors import DomainError, InternalInvariantError, ParameterError, PreconditionError, SeparationError
from .funcspace import FiniteFunction, as_rational, distance


# -- expression trees -----------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    index: int


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Add:
    left: "LatticeExpr"
    right: "LatticeExpr"


@dataclass(frozen=True)
class Scale:
    factor: Fraction
    expr: "LatticeExpr"


@dataclass(frozen=True)
class Join:
    args: tuple["LatticeExpr", ...]


@dataclass(frozen=True)
class Meet:
    args: tuple["LatticeExpr", ...]


@dataclass(frozen=True)
class Mul:
    left: "LatticeExpr"
    right: "LatticeExpr"


LatticeExpr = Union[Gen, Const, Add, Scale, Join, Meet, Mul]


def evaluate(expr: LatticeExpr, gens: Sequence[FiniteFunction], *, allow_mul: bool = False) -> FiniteFunction:
    """Exact value of ``expr`` with ``Gen(i)`` bound to ``gens[i]``."""
    n = _space_size(gens)

    def ev(e):
        if isinstance(e, Gen):
            if not 0 <= e.index < len(gens):
                raise ParameterError(f"no generator with index {e.index}")
            return gens[e.index]
        if isinstance(e, Const):
            return FiniteFunction.constant(e.value, n)
        if isinstance(e, Add):
            return ev(e.left) + ev(e.right)
        if isinstance(e, Scale):
            return ev(e.expr).scale(e.factor)
        if isinstance(e, (Join, Meet)):
            if not e.args:
                raise ParameterError("empty lattice node")
            vals = [ev(a) for a in e.args]
            out = vals[0]
            for v in vals[1:]:
                out = out.join(v) if isinstance(e, Join) else out.meet(v)
            return out
        if isinstance(e, Mul):
            if not allow_mul:
                raise ParameterError("product nodes are disabled (pass allow_mul=True)")
            return ev(e.left) * ev(e.right)
        raise TypeError(f"not a lattice expression: {e!r}")

    return ev(expr)


def node_kinds(expr: LatticeExpr) -> set[str]:
    """Names of the node types occurring in ``expr``."""
    kinds = {type(expr).__name__}
    if isinstance(expr, (Add, Mul)):
        kinds |= node_kinds(expr.left) | node_kinds(expr.right)
    elif isinstance(expr, Scale):
        kinds |= node_kinds(expr.expr)
    elif isinstance(expr, (Join, Meet)):
        for a in expr.args:
            kinds |= node_kinds(a)
    return kinds


def _space_size(gens: Sequence[FiniteFunction]) -> int:
    if not gens:
        raise ParameterError("at least one generator is required")
    n = len(gens[0])
    for i, g in enumerate(gens):
        if len(g) != n:
            raise ParameterError(f"generator {i} has {len(g)} points, expected {n}")
    return n


# -- separation and construction ----------------------------------------------------


def nonseparated_pair(gens: Sequence[FiniteFunction]) -> Optional[tuple[int, int]]:
    """First pair ``x < y`` on which every generator agrees, or ``None``."""
    n = _space_size(gens)
    for x in range(n):
        for y in range(x + 1, n):
            if all(g[x] == g[y] for g in gens):
                return (x, y)
    return None


def separates(gens: Sequence[FiniteFunction]) -> bool:
    return nonseparated_pair(gens) is None


def interpolate_pair(gens: Sequence[FiniteFunction], x: int, y: int, alpha, beta) -> LatticeExpr:
    """Affine expression in one generator taking ``alpha`` at ``x`` and ``beta`` at ``y``.

    Uses only constants, addition and scalar multiples.
    """
    alpha, beta = as_rational(alpha), as_rational(beta)
    n = _space_size(gens)
    if not (0 <= x < n and 0 <= y < n):
        raise DomainError(f"points must lie in 0..{n - 1}")
    if x == y:
        raise ParameterError("interpolation needs two distinct points")
    if alpha == beta:
        return Const(alpha)
    for i, u in enumerate(gens):
        if u[x] != u[y]:
            c = (beta - alpha) / (u[y] - u[x])
            return Add(Const(alpha - c * u[x]), Scale(c, Gen(i)))
    raise SeparationError(f"no generator separates points {x} and {y}", (x, y))


def sw_construct(gens: Sequence[FiniteFunction], h: FiniteFunction) -> LatticeExpr:
    """Lattice expression over ``gens`` evaluating exactly to ``h``."""
    n = _space_size(gens)
    if len(h) != n:
        raise ParameterError(f"target has {len(h)} points, generators have {n}")
    pair = nonseparated_pair(gens)
    if pair is not None:
        raise SeparationError(f"generators do not separate points {pair[0]} and {pair[1]}", pair)
    if n == 1:
        expr: LatticeExpr = Const(h[0])
    else:
        expr = Join(tuple(
            Meet(tuple(interpolate_pair(gens, x, y, h[x], h[y]) for y in range(n) if y != x))
            for x in range(n)))
    if evaluate(expr, gens) != h:
        raise InternalInvariantError("constructed expression does not reproduce the target")
    return expr


def clopen_approx(h: FiniteFunction, S: Sequence[LatticeExpr], T: Sequence[LatticeExpr], eps,
                  gens: Sequence[FiniteFunction]) -> LatticeExpr:
    """``a`` in the sublattice with ``h + eps/2 <= a <= h + eps``, hence ``||a - h|| <= eps``.

    ``S`` and ``T`` must witness ``meet(S) = h + eps/2`` and ``join(T) = h + eps``.
    The result is the meet of the finite subfamily of ``S`` kept by the
    pointwise extraction.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ParameterError(f"epsilon must be positive, got {eps}")
    if not S or not T:
        raise ParameterError("both witness families must be nonempty")
    s_vals = [evaluate(e, gens) for e in S]
    t_vals = [evaluate(e, gens) for e in T]
    meet_s = s_vals[0]
    for v in s_vals[1:]:
        meet_s = meet_s.meet(v)
    join_t = t_vals[0]
    for v in t_vals[1:]:
        join_t = join_t.join(v)
    if meet_s != h + eps / 2:
        raise PreconditionError("meet(S) is not h + eps/2")
    if join_t != h + eps:
        raise PreconditionError("join(T) is not h + eps")
    s_idx, _ = extract_finite_discrete(s_vals, t_vals, eps / 2)
    a = S[s_idx[0]] if len(s_idx) == 1 else Meet(tuple(S[i] for i in s_idx))
    value = evaluate(a, gens)
    if not ((h + eps / 2).le(value) and value.le(h + eps)) or distance(value, h) > eps:
        raise InternalInvariantError("approximant escaped the band h + eps/2 .. h + eps")
    return a


def render(expr: LatticeExpr) -> str:
    """Infix text form, e.g. ``max(min(3 + 2*u0, ...), ...)``."""
    if isinstance(expr, Gen):
        return f"u{expr.index}"
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Add):
        return f"({render(expr.left)} + {render(expr.right)})"
    if isinstance(expr, Scale):
        return f"{expr.factor}*{render(expr.expr)}"
    if isinstance(expr, Join):
        return "max(" + ", ".join(render(a) for a in expr.args) + ")"
    if isinstance(expr, Meet):
        return "min(" + ", ".join(render(a) for a in expr.args) + ")"
    if isinstance(expr, Mul):
        return f"({render(expr.left)} * {render(expr.right)})"
    raise TypeError(f"not a lattice expression: {expr!r}")
