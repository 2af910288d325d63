"""Independent re-verification of emitted certificate documents.

Only decoding and the exact comparisons of :mod:`sandwich.funcspace` are used;
nothing produced by the insertion machinery is trusted.
"""

from __future__ import annotations

from .funcspace import as_rational, le_witness, pl_le, pl_shift
from .insertion import certificate_failures
from .serialize import certificate_from_json, pl_from_json


def _sandwich(lower, h, upper, label) -> list[str]:
    out = []
    w = le_witness(lower, h)
    if w is not None:
        out.append(f"lower bound exceeds {label} at {w}")
    w = le_witness(h, upper)
    if w is not None:
        out.append(f"{label} exceeds upper bound at {w}")
    return out


def verify_document(doc: dict) -> list[str]:
    """Failures found in an ``insert``, ``kt`` or ``pipeline`` certificate (empty = valid)."""
    kind = doc.get("command")
    if kind == "insert":
        f, g, a = (pl_from_json(doc[k]) for k in ("f", "g", "a"))
        eps = as_rational(doc["epsilon"])
        problems = _sandwich(f, a, g, "a")
        if a.removed or not a.is_continuous():
            problems.append("a is not continuous")
        if not pl_le(pl_shift(f, eps), g):
            problems.append("the gap premise f + eps <= g does not hold")
        return problems
    if kind == "kt":
        f, g, h = (pl_from_json(doc[k]) for k in ("f", "g", "h"))
        tol = as_rational(doc["tol"])
        cert = certificate_from_json(doc["certificate"])
        problems = certificate_failures(f, g, cert, tol)
        if h != cert.steps[-1].a:
            problems.append("h is not the last iterate")
        problems += _sandwich(pl_shift(f, -tol), h, g, "h")
        return problems
    if kind == "pipeline":
        if doc.get("result") != "inserted":
            return ["only inserted pipeline results carry a certificate"]
        f, g, F, G, h, hy = (pl_from_json(doc[k]) for k in ("f", "g", "F", "G", "h", "h_on_y"))
        tol = as_rational(doc["tol"])
        removed = f.removed
        problems = []
        if F.removed or G.removed:
            problems.append("extensions must be defined on all of Y")
        if F.puncture(removed) != f:
            problems.append("F does not extend f")
        if G.puncture(removed) != g:
            problems.append("G does not extend g")
        cert = certificate_from_json(doc["certificate"])
        problems += certificate_failures(F, G, cert, tol)
        if hy != cert.steps[-1].a:
            problems.append("h on Y is not the last iterate")
        if hy.puncture(removed) != h:
            problems.append("h is not the restriction of h on Y")
        if not h.is_continuous():
            problems.append("h is not continuous on X")
        problems += _sandwich(pl_shift(f, -tol), h, g, "h")
        return problems
    return [f"no checker for certificate kind {kind!r}"]


__all__ = ["verify_document"]
