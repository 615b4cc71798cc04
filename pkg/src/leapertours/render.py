"""Static pictures of tours: SVG and plain text.

Boards are drawn with row 0 at the top and column 0 on the left.  Output
depends only on the tour, so the same tour always renders to the same bytes.
"""

from __future__ import annotations

CELL = 20


def _fmt(v: float) -> str:
    return f"{v:g}"


def board_svg(height: int, width: int, cycle) -> str:
    w, h = width * CELL, height * CELL
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    for y in range(height):
        for x in range(width):
            if (x + y) % 2:
                out.append(f'<rect x="{x * CELL}" y="{y * CELL}" width="{CELL}" height="{CELL}" fill="#e4e4e4"/>')
    pts = " ".join(f"{_fmt(x * CELL + CELL / 2)},{_fmt(y * CELL + CELL / 2)}" for x, y in cycle)
    out.append(f'<polygon points="{pts}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>')
    for x, y in cycle:
        out.append(f'<circle cx="{_fmt(x * CELL + CELL / 2)}" cy="{_fmt(y * CELL + CELL / 2)}" r="2" fill="#1f4e9c"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def projection_svg(lo: int, hi: int, cycle, short: int) -> str:
    """Arc diagram on a number line: short edges above, long edges below."""
    n = hi - lo + 1
    span = max(abs(cycle[i] - cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))) if len(cycle) > 1 else 1
    pad = span * CELL / 2 + CELL
    w, h = n * CELL + CELL, 2 * pad
    mid = pad
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" fill="#ffffff"/>',
        f'<line x1="{CELL / 2:g}" y1="{_fmt(mid)}" x2="{_fmt(w - CELL / 2)}" y2="{_fmt(mid)}" stroke="#bbbbbb"/>',
    ]
    k = len(cycle)
    for i in range(k):
        u, v = sorted((cycle[i], cycle[(i + 1) % k]))
        x1, x2 = (u - lo + 1) * CELL, (v - lo + 1) * CELL
        r = (x2 - x1) / 2
        sweep = 1 if v - u == short else 0
        out.append(f'<path d="M {_fmt(x1)} {_fmt(mid)} A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(x2)} {_fmt(mid)}" '
                   'fill="none" stroke="#1f4e9c"/>')
    for u in range(lo, hi + 1):
        out.append(f'<circle cx="{_fmt((u - lo + 1) * CELL)}" cy="{_fmt(mid)}" r="2.5" fill="#000000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def board_ascii(height: int, width: int, cycle) -> str:
    """Grid of move numbers: the cell visited at step ``i`` shows ``i``."""
    step = {c: i for i, c in enumerate(cycle)}
    pad = len(str(max(len(cycle) - 1, 0)))
    lines = []
    for y in range(height):
        lines.append(" ".join(str(step[(x, y)]).rjust(pad) if (x, y) in step else "." * pad
                              for x in range(width)))
    return "\n".join(lines) + "\n"


def projection_ascii(cycle) -> str:
    if not cycle:
        return "\n"
    return "-".join(str(u) for u in list(cycle) + [cycle[0]]) + "\n"
