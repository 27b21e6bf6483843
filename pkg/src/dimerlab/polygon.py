"""Exact integer geometry for lattice polygons.

Everything here works on integer pairs and never touches floating point:
orientation tests are cross products, angular order is decided by half-plane
plus cross product.
"""
from functools import cmp_to_key
from math import gcd

from .errors import DegeneratePolygon, NonClosing


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def lattice_length(v):
    """Number of primitive steps in the integer vector ``v``."""
    return gcd(v[0], v[1])


def primitive(v):
    g = gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return (v[0] // g, v[1] // g)


def _half(v):
    # 0 for angles in [0, pi), 1 for [pi, 2 pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_cmp(u, v):
    """Compare nonzero vectors by polar angle in [0, 2 pi)."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


angle_key = cmp_to_key(angle_cmp)


def convex_hull(points):
    """Vertices of the convex hull, counterclockwise, lexicographically least first.

    Collinear boundary points are dropped. A single point gives a one-element
    list and a segment its two endpoints.
    """
    pts = sorted(set((int(p[0]), int(p[1])) for p in points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(sub(lower[-1], lower[-2]), sub(p, lower[-2])) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(sub(upper[-1], upper[-2]), sub(p, upper[-2])) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def translate_to_origin(vertices):
    """Translate so the lexicographically least vertex sits at (0, 0)."""
    lo = min(vertices)
    return [sub(v, lo) for v in vertices]


def polygon_from_edges(vectors):
    """Chain nonzero edge vectors by angle into a closed convex polygon.

    Returns the vertex list (collinear joints removed) in counterclockwise
    order, translated so the least vertex is the origin.
    """
    vectors = [tuple(v) for v in vectors]
    if any(v == (0, 0) for v in vectors):
        raise ValueError("zero edge vector")
    total = (sum(v[0] for v in vectors), sum(v[1] for v in vectors))
    if total != (0, 0):
        raise NonClosing(f"edge vectors sum to {total}, not (0, 0)")
    ordered = sorted(vectors, key=angle_key)
    pts = [(0, 0)]
    for v in ordered[:-1]:
        pts.append(add(pts[-1], v))
    return translate_to_origin(convex_hull(pts))


def edge_vectors(vertices):
    n = len(vertices)
    return [sub(vertices[(k + 1) % n], vertices[k]) for k in range(n)]


def twice_area(vertices):
    n = len(vertices)
    return sum(cross(vertices[k], vertices[(k + 1) % n]) for k in range(n))


def lattice_points(vertices):
    """Split the lattice points of a convex polygon into (interior, boundary).

    Both lists are sorted lexicographically. Degenerate polygons have no
    interior.
    """
    if not vertices:
        return [], []
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    edges = edge_vectors(vertices) if len(vertices) > 1 else []
    interior, boundary = [], []
    for px in range(min(xs), max(xs) + 1):
        for py in range(min(ys), max(ys) + 1):
            p = (px, py)
            if len(vertices) < 3:
                if _on_segment_hull(p, vertices):
                    boundary.append(p)
                continue
            sides = [cross(e, sub(p, vertices[k])) for k, e in enumerate(edges)]
            if all(s > 0 for s in sides):
                interior.append(p)
            elif all(s >= 0 for s in sides):
                boundary.append(p)
    return interior, boundary


def _on_segment_hull(p, vertices):
    if len(vertices) == 1:
        return p == tuple(vertices[0])
    a, b = vertices
    if cross(sub(b, a), sub(p, a)) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def require_polygon(vertices):
    if len(vertices) < 3:
        raise DegeneratePolygon(f"need at least 3 vertices, got {len(vertices)}")
