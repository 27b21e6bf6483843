"""Independent reference computations used only by the tests.

* ``leibniz_det``: determinant by summing over permutations.
* ``GeometricOracle``: draws every zig-zag as a polyline in the plane using
  the vertex positions a fixture was built from, then looks for trivial
  strands, self-crossings and parallel bigons among the lifts that meet a
  window around the origin. Floating point, numpy, no lattice arithmetic.
"""
import itertools
import math

import numpy as np

from dimerlab.exactalg import LaurentPoly2


def perm_sign(p):
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, n = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        if n % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(m):
    n = len(m)
    total = LaurentPoly2()
    for p in itertools.permutations(range(n)):
        term = LaurentPoly2.constant(perm_sign(p))
        for r in range(n):
            term = term * m[r][p[r]]
            if not term:
                break
        total = total + term
    return total


# ---------------------------------------------------------------------------
# geometric consistency oracle
# ---------------------------------------------------------------------------

def _unit(v):
    n = math.hypot(v[0], v[1])
    return (v[0] / n, v[1] / n)


def _left(v):
    return (-v[1], v[0])


class GeometricOracle:
    def __init__(self, emb, strands, delta=0.06, eps=0.02):
        self.emb = emb
        self.g = emb.graph
        self.strands = strands
        self.delta = delta
        self.eps = eps
        self._paths = {e: [tuple(float(c) for c in p) for p in emb.edge_path(e)]
                       for e in range(self.g.edge_count)}
        self.polys = [self._strand_polyline(z) for z in strands]
        total = sum(math.hypot(*z.cls) for z in strands)
        self.W = 2 * (total + 1)

    # -- drawing ------------------------------------------------------------
    def _edge_from(self, e, d):
        """Polyline of edge e in pass direction d, starting at the tail at the origin cell."""
        pts = self._paths[e]
        return pts if d == 1 else list(reversed(pts))

    def _corner(self, v_pos, d_in, d_out):
        # point inside the ccw wedge from d_in to d_out at v_pos
        a, b = _unit(d_in), _unit(d_out)
        cr = a[0] * b[1] - a[1] * b[0]
        s = (a[0] + b[0], a[1] + b[1])
        if abs(cr) < 1e-12 and a[0] * b[0] + a[1] * b[1] < 0:
            s = _left(a)
        elif cr < 0:
            s = (-s[0], -s[1])
        elif abs(cr) < 1e-12:
            s = (-a[1], a[0])
        s = _unit(s)
        return (v_pos[0] + self.delta * s[0], v_pos[1] + self.delta * s[1])

    def _strand_polyline(self, z):
        """One period of the strand, starting at the tail corner of pass 0."""
        g = self.g
        n = len(z.passes)
        pieces = []
        for k in range(n):
            e, d = z.passes[k]
            base = z.offsets[k]
            raw = self._edge_from(e, d)
            # translate so the polyline starts at the tail vertex lift
            tail = self._vertex_pos(g.tail((e, d)))
            dx = tail[0] + base[0] - raw[0][0]
            dy = tail[1] + base[1] - raw[0][1]
            path = [(p[0] + dx, p[1] + dy) for p in raw]
            pieces.append(path)
        corners = []
        for k in range(n):
            path = pieces[k]
            nxt = pieces[(k + 1) % n]
            shift = (0.0, 0.0)
            if k == n - 1:
                shift = (float(z.cls[0]), float(z.cls[1]))
            nxt = [(p[0] + shift[0], p[1] + shift[1]) for p in nxt]
            v = path[-1]
            d_arrive = (path[-2][0] - v[0], path[-2][1] - v[1])
            d_leave = (nxt[1][0] - v[0], nxt[1][1] - v[1])
            color = g.head(z.passes[k])[0]
            if color == "w":
                corners.append(self._corner(v, d_leave, d_arrive))
            else:
                corners.append(self._corner(v, d_arrive, d_leave))
        pts = []
        for k in range(n):
            path = pieces[k]
            prev_corner = corners[k - 1]
            if k == 0:
                prev_corner = (prev_corner[0] - z.cls[0], prev_corner[1] - z.cls[1])
            head_corner = corners[k]
            pts.append(prev_corner)
            pts.extend(self._crossing_points(path, prev_corner, head_corner))
        pts.append((corners[-1][0], corners[-1][1]))
        return np.array(pts, dtype=float)

    def _crossing_points(self, path, tail_corner, head_corner):
        # walk along the edge on the tail corner's side, cross near the middle,
        # finish on the head corner's side
        seglens = [math.dist(path[i], path[i + 1]) for i in range(len(path) - 1)]
        total = sum(seglens)

        def at(s):
            acc = 0.0
            for i, L in enumerate(seglens):
                if acc + L >= s or i == len(seglens) - 1:
                    t = (s - acc) / L
                    p = (path[i][0] + t * (path[i + 1][0] - path[i][0]),
                         path[i][1] + t * (path[i + 1][1] - path[i][1]))
                    return p, _unit((path[i + 1][0] - path[i][0], path[i + 1][1] - path[i][1]))
                acc += L
            raise AssertionError

        def side(corner, s):
            p, d = at(s)
            c = d[0] * (corner[1] - p[1]) - d[1] * (corner[0] - p[0])
            return 1.0 if c > 0 else -1.0

        out = []
        s_tail = side(tail_corner, 0.25 * total)
        s_head = side(head_corner, 0.75 * total)
        acc = 0.0
        bends = []
        for i in range(1, len(path) - 1):
            acc += seglens[i - 1]
            bends.append(acc)
        for s in [b for b in bends if b < 0.45 * total] + [0.45 * total]:
            p, d = at(s)
            n = _left(d)
            out.append((p[0] + s_tail * self.eps * n[0], p[1] + s_tail * self.eps * n[1]))
        for s in [0.55 * total] + [b for b in bends if b > 0.55 * total]:
            p, d = at(s)
            n = _left(d)
            out.append((p[0] + s_head * self.eps * n[0], p[1] + s_head * self.eps * n[1]))
        return out

    def _vertex_pos(self, v):
        color, i = v
        p = self.emb.black_pos[i] if color == "b" else self.emb.white_pos[i]
        return (float(p[0]), float(p[1]))

    # -- lifts --------------------------------------------------------------
    def _lift(self, k, m, periods):
        """Vertices of lift (strand k, translation m) for the given period range."""
        base = self.polys[k][:-1]
        cls = np.array(self.strands[k].cls, dtype=float)
        chunks = [base + cls * t + np.array(m, dtype=float) for t in periods]
        chunks.append(self.polys[k][-1:] + cls * periods[-1] + np.array(m, dtype=float))
        return np.vstack(chunks)

    def classify(self):
        """Return ``(clause, strands)``; clause is None for a consistent graph."""
        for k, z in enumerate(self.strands):
            poly = self.polys[k]
            if np.allclose(poly[0], poly[-1]):
                return ("TrivialClass", (k,))
        W = self.W
        T = {}
        for k, z in enumerate(self.strands):
            step = max(abs(z.cls[0]), abs(z.cls[1]))
            T[k] = int(math.ceil(W / step)) + 2
        # self-crossings of a single lift
        for k in range(len(self.strands)):
            pts = self._lift(k, (0, 0), range(-T[k], T[k]))
            if _self_crossing(pts):
                return ("SelfCrossing", (k,))
        # lift pairs
        R = int(math.ceil(W))
        for k1 in range(len(self.strands)):
            L1 = self._lift(k1, (0, 0), range(-T[k1], T[k1]))
            for k2 in range(k1, len(self.strands)):
                c2 = self.strands[k2].cls
                seen = set()
                for mx in range(-R, R + 1):
                    for my in range(-R, R + 1):
                        key = _reduce((mx, my), c2)
                        if key in seen:
                            continue
                        seen.add(key)
                        if k1 == k2 and _reduce((0, 0), c2) == key:
                            continue
                        L2 = self._lift(k2, key, range(-T[k2], T[k2]))
                        if _parallel_bigon(L1, L2, W):
                            return ("ParallelBigon", (k1, k2))
        return (None, ())


def _reduce(m, c):
    t = (m[0] * c[0] + m[1] * c[1]) // (c[0] * c[0] + c[1] * c[1])
    return (m[0] - t * c[0], m[1] - t * c[1])


def _chunk_boxes(P, size):
    n = len(P) - 1
    starts = np.arange(0, n, size)
    # chunk a covers segments a .. a+size-1, i.e. points a .. a+size
    lo = np.minimum.reduceat(np.minimum(P[:-1], P[1:]), starts, axis=0)
    hi = np.maximum.reduceat(np.maximum(P[:-1], P[1:]), starts, axis=0)
    return starts, lo, hi


def _segment_hits(A, B, size=16):
    """All proper intersections between polylines A and B.

    Returns arrays (i, ta, j, tb): segment indices and parameters in [0, 1).
    Chunks of consecutive segments are paired only when their bounding
    boxes overlap.
    """
    sa, alo, ahi = _chunk_boxes(A, size)
    sb, blo, bhi = _chunk_boxes(B, size)
    ov = ((alo[:, None, 0] <= bhi[None, :, 0]) & (blo[None, :, 0] <= ahi[:, None, 0])
          & (alo[:, None, 1] <= bhi[None, :, 1]) & (blo[None, :, 1] <= ahi[:, None, 1]))
    ca, cb = np.nonzero(ov)
    na, nb = len(A) - 1, len(B) - 1
    if len(ca) == 0:
        return np.zeros(0, dtype=int), np.zeros(0), np.zeros(0, dtype=int), np.zeros(0)
    off = np.arange(size)
    ii = (sa[ca][:, None, None] + off[None, :, None]).repeat(size, axis=2).ravel()
    jj = (sb[cb][:, None, None] + off[None, None, :]).repeat(size, axis=1).ravel()
    ok = (ii < na) & (jj < nb)
    ii, jj = ii[ok], jj[ok]
    p, r = A[ii], A[ii + 1] - A[ii]
    q, s = B[jj], B[jj + 1] - B[jj]
    rxs = r[:, 0] * s[:, 1] - r[:, 1] * s[:, 0]
    qp = q - p
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]) / rxs
        u = (qp[:, 0] * r[:, 1] - qp[:, 1] * r[:, 0]) / rxs
    ok = (np.abs(rxs) > 1e-14) & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
    return ii[ok], t[ok], jj[ok], u[ok]


def _self_crossing(P):
    i, t, j, u = _segment_hits(P, P)
    keep = np.abs(i - j) > 1
    return bool(np.any(keep))


def _parallel_bigon(L1, L2, W):
    i, t, j, u = _segment_hits(L1, L2)
    if len(i) < 2:
        return False
    s1 = i + t
    s2 = j + u
    pts = L1[i] + (L1[i + 1] - L1[i]) * t[:, None]
    inner = np.all(np.abs(pts) <= W, axis=1)
    o1 = np.argsort(s1)
    rank2 = np.empty(len(s2), dtype=int)
    rank2[np.argsort(s2)] = np.arange(len(s2))
    for a, b in zip(o1[:-1], o1[1:]):
        if not (inner[a] and inner[b]):
            continue
        if rank2[b] - rank2[a] == 1:
            return True
    return False


def oracle_verdict(emb, strands):
    return GeometricOracle(emb, strands).classify()


# ---------------------------------------------------------------------------
# lattice automorphisms
# ---------------------------------------------------------------------------

def gl2z_matching(src, dst, bound=2):
    """A matrix in GL(2, Z) mapping the multiset ``src`` onto ``dst``, or None.

    Searches entries in [-bound, bound]; enough for the small classes here.
    """
    want = sorted(map(tuple, dst))
    rng = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(rng, rng, rng, rng):
        if abs(a * d - b * c) != 1:
            continue
        got = sorted((a * u + b * v, c * u + d * v) for u, v in src)
        if got == want:
            return ((a, b), (c, d))
    return None
