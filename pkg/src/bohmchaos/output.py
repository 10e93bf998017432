"""CSV and SVG writers."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np


def fmt(v) -> str:
    # 17 significant digits re-parse to the identical double
    return "%.17g" % v


def write_csv(path, header, columns, meta: dict | None = None):
    """Write equal-length ``columns`` under ``header``; ``meta`` becomes
    trailing ``# key=value`` comment lines."""
    path = Path(path)
    cols = [np.asarray(c) for c in columns]
    with path.open("w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(str(v) if isinstance(v, (int, np.integer)) else fmt(v) for v in row) + "\n")
        for k, v in (meta or {}).items():
            fh.write(f"# {k}={v}\n")
    return path


def read_csv(path):
    """Return (header, float array, metadata) from a file written by write_csv."""
    header, rows, meta = None, [], {}
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k] = v
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return header, np.array(rows, dtype=float).reshape(-1, len(header)), meta


def scatter_svg(path, xs, ys, extent, title="", size=600, margin=50):
    """1-px point scatter on a fixed viewport ``extent = (x0, x1, y0, y1)``."""
    x0, x1, y0, y1 = extent
    w = size - 2 * margin
    sx = w / (x1 - x0)
    sy = w / (y1 - y0)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{w}" height="{w}" fill="none" stroke="black"/>',
        f'<text x="{size / 2}" y="{margin * 0.6:.1f}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif">{_escape(title)}</text>',
        f'<text x="{margin}" y="{size - margin * 0.4:.1f}" font-size="11" font-family="sans-serif">'
        f'{x0:g}</text>',
        f'<text x="{size - margin}" y="{size - margin * 0.4:.1f}" font-size="11" text-anchor="end" '
        f'font-family="sans-serif">x = {x1:g}</text>',
        f'<text x="{margin * 0.9}" y="{size - margin}" font-size="11" text-anchor="end" '
        f'font-family="sans-serif">{y0:g}</text>',
        f'<text x="{margin * 0.9}" y="{margin + 10}" font-size="11" text-anchor="end" '
        f'font-family="sans-serif">y = {y1:g}</text>',
        '<g fill="black">',
    ]
    for x, y in zip(xs, ys):
        if not (math.isfinite(x) and math.isfinite(y)) or not (x0 <= x <= x1 and y0 <= y <= y1):
            continue
        px = margin + (x - x0) * sx
        py = margin + (y1 - y) * sy
        out.append(f'<rect x="{px:.2f}" y="{py:.2f}" width="1" height="1"/>')
    out.append("</g></svg>")
    Path(path).write_text("\n".join(out) + "\n")
    return Path(path)


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
