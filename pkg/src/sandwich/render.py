"""CSV sampling and SVG plots of piecewise-linear functions."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Sequence

from .errors import ParameterError
from .funcspace import PLFunction
from .semicont import is_lsc, is_usc
from .serialize import rat_str

WIDTH, HEIGHT, MARGIN = 800, 400, 40
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def sample_rows(f: PLFunction, resolution: int) -> list[tuple[Fraction, object, str]]:
    """``resolution + 1`` evenly spaced rows plus one row per breakpoint, sorted by abscissa.

    The value is ``None`` where the point has been removed from the space.
    """
    if resolution < 1:
        raise ParameterError("resolution must be at least 1")
    lo, hi = f.domain
    rows = []
    for k in range(resolution + 1):
        x = lo + (hi - lo) * Fraction(k, resolution)
        rows.append((x, f.triple(x)[1], "interior"))
    for x, v in zip(f.xs, f.values):
        rows.append((x, v, "breakpoint"))
    rows.sort(key=lambda r: (r[0], r[2]))
    return rows


def to_csv(f: PLFunction, resolution: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "value", "tag"])
    for x, v, tag in sample_rows(f, resolution):
        w.writerow([rat_str(x), "" if v is None else rat_str(v), tag])
    return buf.getvalue()


def _style(f: PLFunction) -> str:
    usc, lsc = is_usc(f), is_lsc(f)
    if usc and lsc:
        return ""
    if usc:
        return ' stroke-dasharray="8 3"'
    if lsc:
        return ' stroke-dasharray="2 3"'
    return ' stroke-dasharray="8 3 2 3"'


def to_svg(functions: dict[str, PLFunction] | Sequence[PLFunction]) -> str:
    """One 800x400 plot; pieces are segments, jump values filled dots, removed points open circles.

    Continuous functions are drawn solid, usc-only dashed, lsc-only dotted.
    """
    if not isinstance(functions, dict):
        functions = {f"f{i}": f for i, f in enumerate(functions)}
    if not functions:
        raise ParameterError("nothing to plot")
    doms = {f.domain for f in functions.values()}
    if len(doms) != 1:
        raise ParameterError("all plotted functions must share a domain")
    lo, hi = doms.pop()
    vals = [v for f in functions.values() for seq in (f.lefts, f.values, f.rights)
            for v in seq if v is not None]
    ymin, ymax = min(vals), max(vals)
    if ymin == ymax:
        ymin, ymax = ymin - 1, ymax + 1
    pad = (ymax - ymin) / 20
    ymin, ymax = ymin - pad, ymax + pad

    def px(x):
        return float(MARGIN + (x - lo) * (WIDTH - 2 * MARGIN) / (hi - lo))

    def py(y):
        return float(HEIGHT - MARGIN - (y - ymin) * (HEIGHT - 2 * MARGIN) / (ymax - ymin))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
           f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#999"/>']
    for k, (name, f) in enumerate(functions.items()):
        color = COLORS[k % len(COLORS)]
        out.append(f'<g id="{name}" stroke="{color}" fill="{color}">')
        out.append(f'<text x="{MARGIN + 8}" y="{MARGIN + 16 + 14 * k}" stroke="none">{name}</text>')
        dash = _style(f)
        for i in range(len(f.xs) - 1):
            out.append(f'<line x1="{px(f.xs[i]):.2f}" y1="{py(f.rights[i]):.2f}" '
                       f'x2="{px(f.xs[i + 1]):.2f}" y2="{py(f.lefts[i + 1]):.2f}" '
                       f'stroke-width="2"{dash}/>')
        for x, l, v, r in f.records():
            if v is None:
                for lim in sorted({q for q in (l, r) if q is not None}):
                    out.append(f'<circle cx="{px(x):.2f}" cy="{py(lim):.2f}" r="4" fill="white"/>')
            elif any(q is not None and q != v for q in (l, r)):
                out.append(f'<circle cx="{px(x):.2f}" cy="{py(v):.2f}" r="4"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
