"""Finite extraction from families of continuous functions on a compact interval.

Given continuous ``S`` and ``T`` with ``meet(S) + eps <= join(T)``, find finite
subfamilies ``S0``, ``T0`` with ``meet(S0) <= join(T0)``.  On ``[lo, hi]`` the
extraction is a left-to-right sweep over the open sets ``{s < t}``: at each
frontier some pair is strictly separated, and the pair whose component
reaches furthest right is kept.  Compactness of the interval is what makes
the sweep stop.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DomainError,
    InternalInvariantError,
    ParameterError,
    PreconditionError,
    ScheduleCapError,
)
from .funcspace import (
    FiniteFunction,
    PLFunction,
    as_rational,
    le_witness,
    pl_affine,
    pl_eval,
    pl_join,
    pl_join_all,
    pl_le,
    pl_meet,
    pl_meet_all,
    pl_shift,
)
from .semicont import LipschitzFamily, is_continuous


@dataclass(frozen=True)
class CoverRecord:
    """Pair ``(S[s_index], T[t_index])`` is strictly ordered on this relatively open interval."""

    s_index: int
    t_index: int
    left: Fraction
    right: Fraction
    left_closed: bool
    right_closed: bool

    def covers(self, x) -> bool:
        return (self.left < x < self.right
                or (x == self.left and self.left_closed)
                or (x == self.right and self.right_closed))


@dataclass(frozen=True)
class ExtractionResult:
    s_indices: tuple[int, ...]
    t_indices: tuple[int, ...]
    cover: tuple[CoverRecord, ...]

    def subfamilies(self, S, T):
        return [S[i] for i in self.s_indices], [T[j] for j in self.t_indices]


@dataclass(frozen=True)
class ChainExtraction:
    """Single pair taken from two monotone chains at schedule index ``index``."""

    index: int
    lam: Fraction
    s: PLFunction
    t: PLFunction


def _check_families(S, T, eps):
    eps = as_rational(eps)
    if eps <= 0:
        raise ParameterError(f"epsilon must be positive, got {eps}")
    if not S or not T:
        raise ParameterError("both families must be nonempty")
    dom = S[0].domain
    for name, fam in (("S", S), ("T", T)):
        for i, h in enumerate(fam):
            if h.domain != dom:
                raise DomainError(f"{name}[{i}] is defined on {h.domain}, expected {dom}")
            if h.removed or not is_continuous(h):
                raise ParameterError(f"{name}[{i}] is not a continuous function on the interval")
    return eps


def premise_witness(S: Sequence[PLFunction], T: Sequence[PLFunction], eps) -> Optional[Fraction]:
    """A point where ``meet(S) + eps <= join(T)`` fails, or ``None``."""
    eps = _check_families(S, T, eps)
    return le_witness(pl_shift(pl_meet_all(S), eps), pl_join_all(T))


def verify_premise(S: Sequence[PLFunction], T: Sequence[PLFunction], eps) -> bool:
    return premise_witness(S, T, eps) is None


def _reach_right(d: PLFunction, x: Fraction) -> tuple[Fraction, bool]:
    xs = d.xs
    if x == xs[-1]:
        return x, True
    i = bisect_right(xs, x) - 1
    a, ya = x, pl_eval(d, x)
    for j in range(i + 1, len(xs)):
        b, yb = xs[j], d.values[j]
        if yb <= 0:
            return a + (b - a) * ya / (ya - yb), False
        a, ya = b, yb
    return xs[-1], True


def positive_component(d: PLFunction, x) -> tuple[Fraction, bool, Fraction, bool]:
    """``(left, left_closed, right, right_closed)`` of the component of ``{d > 0}`` at ``x``.

    Closedness only happens at the domain endpoints (the set is relatively
    open in ``[lo, hi]``).
    """
    x = as_rational(x)
    if not pl_eval(d, x) > 0:
        raise PreconditionError(f"{x} is not in the positive set", witness=x)
    right, rc = _reach_right(d, x)
    lo, hi = d.domain
    mirrored = PLFunction._raw([lo + hi - p for p in reversed(d.xs)], d.rights[::-1],
                               d.values[::-1], d.lefts[::-1])
    r, lc = _reach_right(mirrored, lo + hi - x)
    return lo + hi - r, lc, right, rc


def extract_finite(S: Sequence[PLFunction], T: Sequence[PLFunction], eps) -> ExtractionResult:
    """Sweep ``[lo, hi]`` choosing strictly ordered pairs until the interval is covered.

    Ties in reach go to the lexicographically smallest ``(s_index, t_index)``.
    """
    w = premise_witness(S, T, eps)
    if w is not None:
        raise PreconditionError(f"meet(S) + eps <= join(T) fails at {w}", witness=w)
    lo, hi = S[0].domain
    diffs: dict[tuple[int, int], PLFunction] = {}

    def diff(i, j):
        if (i, j) not in diffs:
            diffs[(i, j)] = pl_affine(1, T[j], -1, S[i])
        return diffs[(i, j)]

    x = lo
    records: list[CoverRecord] = []
    # each step moves the frontier to a distinct component endpoint
    limit = 4 * len(S) * len(T) * (sum(len(h.xs) for h in list(S) + list(T)) + 2)
    while True:
        best = None
        for i in range(len(S)):
            for j in range(len(T)):
                d = diff(i, j)
                if pl_eval(d, x) > 0:
                    comp = positive_component(d, x)
                    key = (comp[2], comp[3])
                    if best is None or key > best[0]:
                        best = (key, i, j, comp)
        if best is None:
            raise InternalInvariantError(f"no strictly ordered pair at frontier {x}")
        _, i, j, (left, lc, right, rc) = best
        records.append(CoverRecord(i, j, left, right, lc, rc))
        if right == hi and rc:
            break
        x = right
        if len(records) > limit:
            raise InternalInvariantError("sweep failed to terminate")
    s_idx = tuple(sorted({r.s_index for r in records}))
    t_idx = tuple(sorted({r.t_index for r in records}))
    if not pl_le(pl_meet_all(S[i] for i in s_idx), pl_join_all(T[j] for j in t_idx)):
        raise InternalInvariantError("extracted subfamilies are not ordered")
    return ExtractionResult(s_idx, t_idx, tuple(records))


def cover_is_complete(result: ExtractionResult, lo, hi) -> bool:
    """Whether the union of the records is all of ``[lo, hi]``."""
    lo, hi = as_rational(lo), as_rational(hi)
    # covered so far: [lo, x] if closed else [lo, x)
    x, closed = lo, False
    for rec in sorted(result.cover, key=lambda r: r.left):
        joins = rec.left <= x if closed else rec.covers(x)
        if not joins:
            if rec.left > x:
                return False
            continue
        x, closed = max((x, closed), (rec.right, rec.right_closed))
    return x == hi and closed


def extract_chain(upper: LipschitzFamily, lower: LipschitzFamily) -> ChainExtraction:
    """Monotone-chain form: the first schedule index ``j`` with ``upper_j <= lower_j``.

    For a decreasing chain ``S`` and an increasing chain ``T`` any finite
    extraction collapses to its deepest members, so a single index suffices.
    """
    for j, ((lam, s), (_, t)) in enumerate(zip(upper, lower)):
        if pl_le(s, t):
            return ChainExtraction(j, lam, s, t)
    raise ScheduleCapError("monotone chains never became ordered before the lambda cap")


def exhaustive_extraction(S: Sequence[PLFunction], T: Sequence[PLFunction]):
    """Brute force over all nonempty subfamily pairs; first ordered pair of index tuples or ``None``."""
    if len(S) > 12 or len(T) > 12:
        raise ParameterError("exhaustive search is limited to families of at most 12 members")

    def subset_table(fam, op):
        table = {}
        for mask in range(1, 1 << len(fam)):
            low = mask & -mask
            idx = low.bit_length() - 1
            rest = mask ^ low
            table[mask] = fam[idx] if rest == 0 else op(table[rest], fam[idx])
        return table

    meets = subset_table(list(S), pl_meet)
    joins = subset_table(list(T), pl_join)
    for ms, m in meets.items():
        for mt, j in joins.items():
            if pl_le(m, j):
                return (tuple(i for i in range(len(S)) if ms >> i & 1),
                        tuple(i for i in range(len(T)) if mt >> i & 1))
    return None


def extract_finite_discrete(S: Sequence[FiniteFunction], T: Sequence[FiniteFunction], eps):
    """Finite-space analogue: at every point take the minimising ``s`` and maximising ``t``.

    Returns ``(s_indices, t_indices)`` with ``meet(S0) <= join(T0)``.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ParameterError(f"epsilon must be positive, got {eps}")
    if not S or not T:
        raise ParameterError("both families must be nonempty")
    n = len(S[0])
    s_idx, t_idx = set(), set()
    for p in range(n):
        i = min(range(len(S)), key=lambda k: (S[k][p], k))
        j = max(range(len(T)), key=lambda k: (T[k][p], -k))
        if S[i][p] + eps > T[j][p]:
            raise PreconditionError(f"meet(S) + eps <= join(T) fails at point {p}", witness=p)
        s_idx.add(i)
        t_idx.add(j)
    s_idx, t_idx = tuple(sorted(s_idx)), tuple(sorted(t_idx))
    meet = S[s_idx[0]]
    for i in s_idx[1:]:
        meet = meet.meet(S[i])
    join = T[t_idx[0]]
    for j in t_idx[1:]:
        join = join.join(T[j])
    if not meet.le(join):
        raise InternalInvariantError("discrete extraction produced unordered subfamilies")
    return s_idx, t_idx
