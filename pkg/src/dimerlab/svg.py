"""SVG text for Newton polygons and geodesic front arrangements.

All coordinates are exact rationals until the last moment, where they are
rounded to six decimals. Output is fully determined by the input.
"""
from fractions import Fraction

from . import polygon
from .zigzag import geodesic_segments

HAIR = Fraction(1, 40)
HAIRS_PER_SEGMENT = 3


def dec6(q):
    """Round a rational to six decimals (half to even) and render it."""
    q = Fraction(q)
    n = round(q * 10**6)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 10**6}.{n % 10**6:06d}"


def _header(w, h):
    return [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">']


def _pt(x, y, scale, height):
    # torus coordinates have y up, SVG has y down
    return f"{dec6(x * scale)},{dec6(height - y * scale)}"


def _colour(k):
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
    return palette[k % len(palette)]


def fronts_svg(geodesics, width=400):
    """The unit square with every geodesic clipped to it.

    Short hairs are drawn along each geodesic on the side its co-orientation
    points to.
    """
    W = Fraction(width)
    out = _header(width, width)
    out.append(f'<rect x="0" y="0" width="{width}" height="{width}" fill="none" stroke="#000"/>')
    for geo in sorted(geodesics, key=lambda g: (g.ray, g.n)):
        c = geo.coorientation
        size = max(abs(c[0]), abs(c[1]))
        hx, hy = Fraction(c[0], size) * HAIR, Fraction(c[1], size) * HAIR
        out.append(f'<g class="geodesic" data-ray="{geo.ray}" data-n="{geo.n}" '
                   f'data-level="{geo.level}" stroke="{_colour(geo.ray)}">')
        for a, b in geodesic_segments(geo):
            out.append(f'<line x1="{dec6(a[0] * W)}" y1="{dec6(W - a[1] * W)}" '
                       f'x2="{dec6(b[0] * W)}" y2="{dec6(W - b[1] * W)}"/>')
            for k in range(1, HAIRS_PER_SEGMENT + 1):
                s = Fraction(k, HAIRS_PER_SEGMENT + 1)
                px = a[0] + s * (b[0] - a[0])
                py = a[1] + s * (b[1] - a[1])
                out.append(f'<line class="hair" x1="{dec6(px * W)}" y1="{dec6(W - py * W)}" '
                           f'x2="{dec6((px + hx) * W)}" y2="{dec6(W - (py + hy) * W)}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def polygon_svg(poly, width=400):
    """A lattice polygon with its lattice points; interior points are filled."""
    poly = list(poly)
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    x0, y0 = min(xs) - 1, min(ys) - 1
    span = max(max(xs) - x0, max(ys) - y0) + 1
    scale = Fraction(width, span)
    H = Fraction(width)

    def pt(p):
        return _pt(p[0] - x0, p[1] - y0, scale, H)

    out = _header(width, width)
    out.append(f'<polygon points="{" ".join(pt(p) for p in poly)}" fill="#dde" stroke="#000"/>')
    interior, boundary = polygon.lattice_points(poly)
    r = dec6(scale / 12)
    for p in sorted(boundary):
        x, y = pt(p).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="#fff" stroke="#000"/>')
    for p in sorted(interior):
        x, y = pt(p).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="#000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
