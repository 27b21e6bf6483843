"""Zig-zag strands, exact consistency decision, Newton polygon, stacky fan, fronts.

Lifts to the universal cover are tracked with lattice arithmetic only. An
edge lift is named by its edge id and the cell of its black endpoint, so a
strand pass ``k`` of the lift translated by ``m`` in period ``t`` sits on
``(e_k, beta_k + m + t * cls)``.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

from . import polygon
from .errors import DegeneratePolygon, NonPrimitiveClass
from .torusgraph import BW


@dataclass(frozen=True)
class ZigZag:
    passes: tuple
    offsets: tuple
    cls: tuple

    def __len__(self):
        return len(self.passes)

    def black_cells(self):
        """Cell of the black endpoint of each pass in the base lift."""
        out = []
        for k, (_, d) in enumerate(self.passes):
            out.append(self.offsets[k] if d == BW else self.offsets[k + 1])
        return out


def extract_zigzags(g):
    """All strands: turn to the rotation predecessor at white, successor at black."""
    seen = set()
    out = []
    for start in g.darts():
        if start in seen:
            continue
        passes = []
        offs = [(0, 0)]
        d = start
        while d not in seen:
            seen.add(d)
            passes.append(d)
            ox, oy = g.dart_offset(d)
            offs.append((offs[-1][0] + ox, offs[-1][1] + oy))
            v = g.head(d)
            nxt = g.pred(v, d[0]) if v[0] == "w" else g.succ(v, d[0])
            d = g.leaving(v, nxt)
        out.append(ZigZag(tuple(passes), tuple(offs), offs[-1]))
    return out


# ---------------------------------------------------------------------------
# consistency
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    consistent: bool
    clause: str = None
    strands: tuple = ()
    edges: tuple = ()

    def witness(self):
        if self.consistent:
            return ""
        if self.clause == "ParallelBigon":
            return "ParallelBigon " + "/".join(f"e{e}" for e in self.edges)
        if self.clause == "SelfCrossing":
            return f"SelfCrossing zz{self.strands[0]} e{self.edges[0]}"
        return f"{self.clause} zz{self.strands[0]}"

    def render(self):
        if self.consistent:
            return "consistent: yes"
        return f"consistent: no ({self.witness()})"

    def __bool__(self):
        return self.consistent


def _in_span(v, c):
    """Whether the integer vector ``v`` lies in ``Z * c`` (c nonzero)."""
    if polygon.cross(v, c) != 0:
        return False
    k = c[0] if c[0] else c[1]
    comp = v[0] if c[0] else v[1]
    return comp % k == 0


def _crossing_candidates(z1, z2):
    """Index pairs (i, j) where z1 and z2 pass the same edge in opposite directions."""
    by_edge = {}
    for j, (e, d) in enumerate(z2.passes):
        by_edge.setdefault(e, []).append((j, d))
    pairs = []
    for i, (e, d) in enumerate(z1.passes):
        for j, d2 in by_edge.get(e, ()):
            if d2 == -d:
                pairs.append((i, j))
    return pairs


def _basis_partner(u):
    """An integer vector w with det(u, w) = 1, for primitive u."""
    g, s, t = _ext_gcd(u[0], u[1])
    # s*u0 + t*u1 = g = +-1 and det(u, (-t, s)) = s*u0 + t*u1
    return (-t * g, s * g)


def _ext_gcd(a, b):
    if b == 0:
        return (a, 1, 0)
    g, s, t = _ext_gcd(b, a % b)
    return (g, t, s - (a // b) * t)


def _solve2(c1, c2, r):
    """Rational (t1, t2) with t1*c1 - t2*c2 = r, for independent c1, c2."""
    det = -c1[0] * c2[1] + c2[0] * c1[1]
    t1 = Fraction(-r[0] * c2[1] + c2[0] * r[1], det)
    t2 = Fraction(c1[0] * r[1] - c1[1] * r[0], det)
    return t1, t2


def _translation_classes(z1, z2, pairs, same):
    """Representatives of lift translations that can produce a crossing."""
    c1, c2 = z1.cls, z2.cls
    b1, b2 = z1.black_cells(), z2.black_cells()
    reps = {}
    det = polygon.cross(c1, c2)
    if det != 0:
        for i, j in pairs:
            m = (b1[i][0] - b2[j][0], b1[i][1] - b2[j][1])
            # coordinates of m in the basis (c1, c2), reduced mod 1
            a = Fraction(polygon.cross(m, c2), det)
            b = Fraction(polygon.cross(c1, m), det)
            fa, fb = a - math.floor(a), b - math.floor(b)
            key = (fa, fb)
            if key not in reps:
                rep = (fa * c1[0] + fb * c2[0], fa * c1[1] + fb * c2[1])
                reps[key] = (int(rep[0]), int(rep[1]))
        return list(reps.values())
    u = polygon.primitive(c1)
    w = _basis_partner(u)
    a = c1[0] // u[0] if u[0] else c1[1] // u[1]
    b = c2[0] // u[0] if u[0] else c2[1] // u[1]
    gg = math.gcd(a, b)
    for i, j in pairs:
        m = (b1[i][0] - b2[j][0], b1[i][1] - b2[j][1])
        alpha = polygon.cross(m, w)
        gamma = polygon.cross(u, m)
        key = (alpha % gg, gamma)
        if same and key == (0, 0):
            continue
        if key not in reps:
            reps[key] = (key[0] * u[0] + gamma * w[0], key[0] * u[1] + gamma * w[1])
    return list(reps.values())


def _lift_crossings(z1, z2, pairs, m):
    """Crossings of lift z1 (at 0) with lift z2 (at m).

    Returns ``(crossings, window)`` where each crossing is
    ``(s1, s2, edge)`` with positions measured in passes along each lift.
    For parallel classes the crossing set is periodic; it is sampled over
    several periods and ``window`` gives the range of ``s1`` whose pairs are
    safe to inspect.
    """
    c1, c2 = z1.cls, z2.cls
    n1, n2 = len(z1), len(z2)
    b1, b2 = z1.black_cells(), z2.black_cells()
    out = []
    det = polygon.cross(c1, c2)
    if det != 0:
        for i, j in pairs:
            r = (b2[j][0] + m[0] - b1[i][0], b2[j][1] + m[1] - b1[i][1])
            t1, t2 = _solve2(c1, c2, r)
            if t1.denominator == 1 and t2.denominator == 1:
                out.append((i + int(t1) * n1, j + int(t2) * n2, z1.passes[i][0]))
        return out, None
    u = polygon.primitive(c1)
    a = c1[0] // u[0] if u[0] else c1[1] // u[1]
    b = c2[0] // u[0] if u[0] else c2[1] // u[1]
    gg = math.gcd(a, b)
    period = abs(b) // gg
    lo, hi = -3 * period, 4 * period
    for i, j in pairs:
        r = (b2[j][0] + m[0] - b1[i][0], b2[j][1] + m[1] - b1[i][1])
        if polygon.cross(r, u) != 0:
            continue
        rho = r[0] // u[0] if u[0] else r[1] // u[1]
        # t1*a - t2*b = rho
        if rho % gg:
            continue
        base2 = next(t2 for t2 in range(abs(a)) if (rho + t2 * b) % a == 0)
        base1 = (rho + base2 * b) // a
        step1, step2 = b // gg, a // gg
        if step1 < 0:
            step1, step2 = -step1, -step2
        k0 = math.floor(Fraction(lo - base1, step1))
        t1 = base1 + k0 * step1
        t2 = base2 + k0 * step2
        while t1 < hi:
            if t1 >= lo:
                out.append((i + t1 * n1, j + t2 * n2, z1.passes[i][0]))
            t1 += step1
            t2 += step2
    return out, (0, period * n1)


def _parallel_pair(crossings, window):
    if len(crossings) < 2:
        return None
    order1 = sorted(range(len(crossings)), key=lambda k: crossings[k][0])
    order2 = sorted(range(len(crossings)), key=lambda k: crossings[k][1])
    pos2 = {k: p for p, k in enumerate(order2)}
    found = []
    for p in range(len(order1) - 1):
        x, y = order1[p], order1[p + 1]
        if window is not None and not (window[0] <= crossings[x][0] < window[1]):
            continue
        if pos2[y] - pos2[x] == 1:
            found.append((crossings[x][2], crossings[y][2]))
    if not found:
        return None
    return min(tuple(sorted(f)) for f in found)


def check_consistency(g, zigzags=None):
    """Decide consistency exactly; returns a :class:`Verdict`."""
    zz = extract_zigzags(g) if zigzags is None else zigzags
    for k, z in enumerate(zz):
        if z.cls == (0, 0):
            return Verdict(False, "TrivialClass", (k,), ())
    for k, z in enumerate(zz):
        cells = z.black_cells()
        for i, j in _crossing_candidates(z, z):
            if i == j:
                continue
            diff = (cells[i][0] - cells[j][0], cells[i][1] - cells[j][1])
            if _in_span(diff, z.cls):
                return Verdict(False, "SelfCrossing", (k,), (z.passes[i][0],))
    for k1 in range(len(zz)):
        for k2 in range(k1, len(zz)):
            z1, z2 = zz[k1], zz[k2]
            pairs = _crossing_candidates(z1, z2)
            if not pairs:
                continue
            for m in _translation_classes(z1, z2, pairs, k1 == k2):
                crossings, window = _lift_crossings(z1, z2, pairs, m)
                hit = _parallel_pair(crossings, window)
                if hit is not None:
                    return Verdict(False, "ParallelBigon", (k1, k2), hit)
    return Verdict(True)


# ---------------------------------------------------------------------------
# Newton polygon and stacky fan
# ---------------------------------------------------------------------------

def _classes(items):
    return [z.cls if isinstance(z, ZigZag) else tuple(z) for z in items]


def newton_polygon(zigzags):
    """Chain primitive zig-zag classes by angle into the Newton polygon."""
    classes = _classes(zigzags)
    for c in classes:
        if c == (0, 0) or math.gcd(c[0], c[1]) != 1:
            raise NonPrimitiveClass(f"zig-zag class {c} is not primitive")
    return polygon.polygon_from_edges(classes)


@dataclass(frozen=True)
class StackyFanData:
    rays: tuple  # ((gx, gy), multiplicity)
    polygon: tuple


def stacky_fan(poly):
    """Inward normal fan with multiplicities equal to lattice edge lengths."""
    poly = [tuple(p) for p in poly]
    if len(poly) < 3:
        raise DegeneratePolygon(f"need at least 3 vertices, got {len(poly)}")
    rays = []
    for v in polygon.edge_vectors(poly):
        mult = polygon.lattice_length(v)
        rays.append((polygon.primitive((-v[1], v[0])), mult))
    return StackyFanData(tuple(rays), tuple(poly))


@dataclass(frozen=True)
class Geodesic:
    """The closed geodesic ``<normal, x> = level (mod 1)`` on the unit torus."""

    ray: int
    n: int
    normal: tuple
    level: Fraction
    coorientation: tuple


def front_arrangement(fan, t):
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    out = []
    for r, (gen, mult) in enumerate(fan.rays):
        for n in range(mult):
            level = (n * t / mult) % 1
            out.append(Geodesic(r, n, gen, level, (-gen[0], -gen[1])))
    return out


def geodesic_segments(geo):
    """Pieces of a geodesic inside the closed unit square, as exact endpoints."""
    p, q = geo.normal
    corners = [(0, 0), (1, 0), (0, 1), (1, 1)]
    vals = [p * x + q * y for x, y in corners]
    segs = []
    for k in range(math.floor(min(vals) - geo.level), math.ceil(max(vals) - geo.level) + 1):
        c = geo.level + k
        pts = set()
        for x in (0, 1):
            if q:
                y = Fraction(c - p * x, q)
                if 0 <= y <= 1:
                    pts.add((Fraction(x), y))
        for y in (0, 1):
            if p:
                x = Fraction(c - q * y, p)
                if 0 <= x <= 1:
                    pts.add((x, Fraction(y)))
        pts = sorted(pts)
        if len(pts) >= 2 and pts[0] != pts[-1]:
            segs.append((pts[0], pts[-1]))
    return segs
