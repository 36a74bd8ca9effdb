"""CSV and SVG output for benchmark records and cell summaries.

CSV columns follow the dataclass field order.  Floats are written with 17
significant digits so that a write/read cycle is exact; booleans as 0/1.
Lines starting with ``#`` are metadata and skipped on reading.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import typing
from collections import defaultdict
from pathlib import Path


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def emit_csv(rows, path, cls=None, columns=None, meta: dict | None = None) -> None:
    """Write dataclass rows; ``cls`` gives the header when ``rows`` is empty.

    ``columns`` selects and orders a subset of fields.
    """
    rows = list(rows)
    if cls is None:
        if not rows:
            raise ValueError("cls is required to write an empty table")
        cls = type(rows[0])
    names = list(columns) if columns else [f.name for f in dataclasses.fields(cls)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for k, v in (meta or {}).items():
            fh.write(f"# {k}: {v}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for r in rows:
            w.writerow([_fmt(getattr(r, n)) for n in names])


def _parse(value: str, typ):
    if typ is bool:
        return value == "1"
    if typ is int:
        return int(value)
    if typ is float:
        return float(value)
    return value


def read_csv(path, cls) -> list:
    """Read rows written by :func:`emit_csv` back into ``cls`` instances."""
    hints = typing.get_type_hints(cls)
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return [cls(**{k: _parse(v, hints[k]) for k, v in row.items()}) for row in reader]


# --- SVG -------------------------------------------------------------------

_COLOURS = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02")
_PW, _PH, _M = 260, 200, 45


def _series_name(s) -> str:
    return s.scheme + ("-sorted" if s.presort else "")


def emit_svg(summaries, path, metric: str = "mean_error", title: str | None = None) -> None:
    """Line charts of ``metric`` against P (both log scale), one panel per Dirichlet alpha.

    Each scheme is one ``<polyline>`` per panel; non-positive values are dropped.
    """
    summaries = list(summaries)
    alphas = sorted({s.dirichlet_alpha for s in summaries}, reverse=True)
    names = sorted({_series_name(s) for s in summaries})
    colour = {n: _COLOURS[i % len(_COLOURS)] for i, n in enumerate(names)}

    pos = [s for s in summaries if getattr(s, metric) > 0]
    if pos:
        lx = [math.log2(s.P) for s in pos]
        ly = [math.log10(getattr(s, metric)) for s in pos]
        x0, x1 = min(lx), max(lx)
        y0, y1 = math.floor(min(ly)), math.ceil(max(ly))
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    width = len(alphas) * (_PW + _M) + _M
    height = _PH + 2 * _M + 20 * (1 + len(names) // 4)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">',
        f'<text x="{_M}" y="16" font-size="13">{title or metric}</text>',
    ]
    for k, alpha in enumerate(alphas):
        ox, oy = _M + k * (_PW + _M), _M
        out.append(f'<g class="panel" data-alpha="{alpha:g}">')
        out.append(f'<rect x="{ox}" y="{oy}" width="{_PW}" height="{_PH}" fill="none" stroke="#888"/>')
        out.append(f'<text x="{ox + _PW / 2}" y="{oy - 6}" text-anchor="middle">alpha = {alpha:g}</text>')
        for e in range(int(y0), int(y1) + 1):
            y = oy + _PH - (e - y0) / (y1 - y0) * _PH
            out.append(f'<text x="{ox - 4}" y="{y + 4:.1f}" text-anchor="end">1e{e}</text>')
        for e in range(int(x0), int(x1) + 1):
            x = ox + (e - x0) / (x1 - x0) * _PW
            out.append(f'<text x="{x:.1f}" y="{oy + _PH + 14}" text-anchor="middle">{2**e}</text>')
        series = defaultdict(list)
        for s in summaries:
            if s.dirichlet_alpha == alpha and getattr(s, metric) > 0:
                series[_series_name(s)].append(s)
        for name in names:
            pts = sorted(series.get(name, []), key=lambda s: s.P)
            if not pts:
                continue
            coords = " ".join(
                f"{ox + (math.log2(s.P) - x0) / (x1 - x0) * _PW:.2f},"
                f"{oy + _PH - (math.log10(getattr(s, metric)) - y0) / (y1 - y0) * _PH:.2f}"
                for s in pts
            )
            out.append(
                f'<polyline data-series="{name}" points="{coords}" fill="none" stroke="{colour[name]}" stroke-width="1.5"/>'
            )
        out.append("</g>")
    ly = _PH + 2 * _M
    for i, name in enumerate(names):
        x = _M + (i % 4) * 170
        y = ly + 20 * (i // 4)
        out.append(f'<line x1="{x}" y1="{y}" x2="{x + 20}" y2="{y}" stroke="{colour[name]}" stroke-width="2"/>')
        out.append(f'<text x="{x + 25}" y="{y + 4}">{name}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
