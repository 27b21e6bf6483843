"""Reference graphs, built from explicit vertex positions on the unit torus.

Rotations are derived from the geometry by exact angle sorting, so every
fixture here comes with a straight-line (or once-bent) realization that the
tests can reuse.
"""
from dataclasses import dataclass, field
from fractions import Fraction as Q
from importlib import resources

from . import polygon
from .torusgraph import Edge, build, parse_graph


@dataclass(frozen=True)
class Embedded:
    """A torus graph together with the positions it was drawn from."""

    graph: object
    black_pos: tuple
    white_pos: tuple
    # optional interior control point per edge, in the black vertex's cell
    bends: dict = field(default_factory=dict)

    def edge_path(self, e):
        """Points of edge ``e`` in the universal cover, black end first."""
        ed = self.graph.edges[e]
        pb = self.black_pos[ed.black]
        pw = self.white_pos[ed.white]
        end = (pw[0] + ed.offset[0], pw[1] + ed.offset[1])
        if e in self.bends:
            return [pb, self.bends[e], end]
        return [pb, end]


def from_embedding(black_pos, white_pos, edges, bends=None):
    bends = dict(bends or {})
    black_pos = tuple((Q(p[0]), Q(p[1])) for p in black_pos)
    white_pos = tuple((Q(p[0]), Q(p[1])) for p in white_pos)
    bends = {e: (Q(p[0]), Q(p[1])) for e, p in bends.items()}
    edges = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
    out_dirs = {}
    for k, ed in enumerate(edges):
        pb = black_pos[ed.black]
        pw = white_pos[ed.white]
        end = (pw[0] + ed.offset[0], pw[1] + ed.offset[1])
        first = bends.get(k, end)
        last = bends.get(k, pb)
        out_dirs.setdefault(("b", ed.black), []).append((k, (first[0] - pb[0], first[1] - pb[1])))
        out_dirs.setdefault(("w", ed.white), []).append((k, (last[0] - end[0], last[1] - end[1])))
    rot_black = []
    rot_white = []
    for color, count, dest in (("b", len(black_pos), rot_black), ("w", len(white_pos), rot_white)):
        for i in range(count):
            items = sorted(out_dirs.get((color, i), []), key=lambda kv: polygon.angle_key(kv[1]))
            for a, b in zip(items, items[1:]):
                if polygon.angle_cmp(a[1], b[1]) == 0:
                    raise ValueError(f"edges e{a[0]} and e{b[0]} leave {color}{i} in the same direction")
            dest.append(tuple(k for k, _ in items))
    g = build(len(black_pos), len(white_pos), edges, rot_black, rot_white)
    return Embedded(g, black_pos, white_pos, bends)


def cover(emb, a, b):
    """The a-by-b cyclic cover, drawn by rescaling the fundamental domain."""
    g = emb.graph
    nb, nw = g.black_count, g.white_count

    def bid(v, i, j):
        return (i * b + j) * nb + v

    def wid(v, i, j):
        return (i * b + j) * nw + v

    black_pos = [None] * (nb * a * b)
    white_pos = [None] * (nw * a * b)
    for i in range(a):
        for j in range(b):
            for v, p in enumerate(emb.black_pos):
                black_pos[bid(v, i, j)] = ((p[0] + i) / a, (p[1] + j) / b)
            for v, p in enumerate(emb.white_pos):
                white_pos[wid(v, i, j)] = ((p[0] + i) / a, (p[1] + j) / b)
    edges = []
    bends = {}
    for i in range(a):
        for j in range(b):
            for k, ed in enumerate(g.edges):
                ti, tj = i + ed.offset[0], j + ed.offset[1]
                off = (ti // a, tj // b)
                if k in emb.bends:
                    p = emb.bends[k]
                    bends[len(edges)] = ((p[0] + i) / a, (p[1] + j) / b)
                edges.append(Edge(bid(ed.black, i, j), wid(ed.white, ti % a, tj % b), off))
    return from_embedding(black_pos, white_pos, edges, bends)


def sublattice_cover(emb, u, v):
    """Cover for the sublattice spanned by ``u`` and ``v`` (positively oriented).

    Positions are pulled back through the inverse of the matrix with columns
    u, v, so the new fundamental domain is again the unit square.
    """
    det = u[0] * v[1] - u[1] * v[0]
    if det <= 0:
        raise ValueError("basis must be positively oriented")
    g = emb.graph
    nb, nw = g.black_count, g.white_count

    def pull(p):
        x, y = Q(p[0]), Q(p[1])
        return ((x * v[1] - y * v[0]) / det, (u[0] * y - u[1] * x) / det)

    # coset representatives: lattice points whose pullback lies in [0,1)^2
    reps = []
    span_x = range(min(0, u[0], v[0], u[0] + v[0]), max(0, u[0], v[0], u[0] + v[0]) + 1)
    span_y = range(min(0, u[1], v[1], u[1] + v[1]), max(0, u[1], v[1], u[1] + v[1]) + 1)
    for x in span_x:
        for y in span_y:
            a, b = pull((x, y))
            if 0 <= a < 1 and 0 <= b < 1:
                reps.append((x, y))
    assert len(reps) == det
    index = {}
    for k, r in enumerate(reps):
        index[pull(r)] = k

    def locate(p):
        a, b = pull(p)
        fa, fb = a - (a.numerator // a.denominator), b - (b.numerator // b.denominator)
        return index[(fa, fb)], (int(a - fa), int(b - fb))

    black_pos, white_pos = [], []
    for r in reps:
        black_pos.extend(pull((p[0] + r[0], p[1] + r[1])) for p in emb.black_pos)
    for r in reps:
        white_pos.extend(pull((p[0] + r[0], p[1] + r[1])) for p in emb.white_pos)
    edges, bends = [], {}
    for i, r in enumerate(reps):
        for k, ed in enumerate(g.edges):
            j, off = locate((r[0] + ed.offset[0], r[1] + ed.offset[1]))
            if k in emb.bends:
                p = emb.bends[k]
                bends[len(edges)] = pull((p[0] + r[0], p[1] + r[1]))
            edges.append(Edge(i * nb + ed.black, j * nw + ed.white, off))
    return from_embedding(black_pos, white_pos, edges, bends)


def hex1():
    return from_embedding([(Q(1, 3), Q(1, 3))], [(0, 0)],
                          [(0, 0, (0, 0)), (0, 0, (1, 0)), (0, 0, (0, 1))])


def sq1():
    return from_embedding([(Q(1, 2), Q(1, 2))], [(0, 0)],
                          [(0, 0, (0, 0)), (0, 0, (1, 0)), (0, 0, (0, 1)), (0, 0, (1, 1))])


def hex2():
    return cover(hex1(), 2, 1)


def hex4():
    return cover(hex1(), 2, 2)


def hex3():
    """Index three hexagonal cover; its Newton triangle has one interior point."""
    return sublattice_cover(hex1(), (1, 1), (-1, 2))


def sq4():
    return cover(sq1(), 2, 2)


def sq6():
    return cover(sq1(), 3, 2)


def sq2():
    """Square lattice variant with trivalent quadrilaterals, period 2 by 2.

    Row one holds two quads with black left/right corners joined through
    bivalent white vertices; row two holds the color-swapped quads joined
    through bivalent black vertices. Square moves at a quad keep V, E and F.
    """
    r = Q(1, 10)
    centers = [(Q(1, 4), Q(1, 4)), (Q(3, 4), Q(1, 4)), (Q(1, 4), Q(3, 4)), (Q(3, 4), Q(3, 4))]
    black, white = [], []
    corner = {}

    def put(color, key, p):
        lst = black if color == "b" else white
        corner[key] = len(lst)
        lst.append(p)

    for q, (cx, cy) in enumerate(centers):
        top_row = q >= 2
        lr, tb = ("w", "b") if top_row else ("b", "w")
        put(lr, (q, "L"), (cx - r, cy))
        put(tb, (q, "T"), (cx, cy + r))
        put(lr, (q, "R"), (cx + r, cy))
        put(tb, (q, "B"), (cx, cy - r))
    put("w", "w1", (Q(1, 2), Q(1, 4)))
    put("w", "w2", (Q(0), Q(1, 4)))
    put("b", "b1", (Q(1, 2), Q(3, 4)))
    put("b", "b2", (Q(0), Q(3, 4)))

    edges = []

    def join(bkey, wkey, off=(0, 0)):
        edges.append((corner[bkey], corner[wkey], off))

    # quadrilateral boundaries
    for q in (0, 1):
        join((q, "L"), (q, "T"))
        join((q, "R"), (q, "T"))
        join((q, "R"), (q, "B"))
        join((q, "L"), (q, "B"))
    for q in (2, 3):
        join((q, "T"), (q, "L"))
        join((q, "T"), (q, "R"))
        join((q, "B"), (q, "R"))
        join((q, "B"), (q, "L"))
    # horizontal links
    join((0, "R"), "w1")
    join((1, "L"), "w1")
    join((1, "R"), "w2", (1, 0))
    join((0, "L"), "w2")
    join("b1", (2, "R"))
    join("b1", (3, "L"))
    join("b2", (3, "R"), (-1, 0))
    join("b2", (2, "L"))
    # vertical links
    for lo, hi in ((0, 2), (1, 3)):
        join((hi, "B"), (lo, "T"))
        join((hi, "T"), (lo, "B"), (0, 1))
    return from_embedding(black, white, edges)


def bad_bigon():
    """hex1 with one edge doubled; the digon between the copies is a face.

    The two strands through the digon cross on both copies in the same
    direction, which is a parallel bigon.
    """
    return from_embedding([(Q(1, 3), Q(1, 3))], [(0, 0)],
                          [(0, 0, (0, 0)), (0, 0, (1, 0)), (0, 0, (0, 1)), (0, 0, (0, 0))],
                          bends={3: (Q(1, 4), Q(1, 8))})


def trivial_class():
    """hex1 plus a bivalent black vertex tied to the white one by two edges.

    The strand running around the resulting digon closes up after two passes
    with class (0, 0).
    """
    return from_embedding([(Q(1, 3), Q(1, 3)), (Q(1, 5), Q(1, 20))], [(0, 0)],
                          [(0, 0, (0, 0)), (0, 0, (1, 0)), (0, 0, (0, 1)),
                           (1, 0, (0, 0)), (1, 0, (0, 0))],
                          bends={4: (Q(1, 10), Q(3, 40))})


FIXTURES = {
    "hex1": hex1,
    "hex2": hex2,
    "hex3": hex3,
    "hex4": hex4,
    "sq1": sq1,
    "sq2": sq2,
    "sq4": sq4,
    "sq6": sq6,
    "bad-bigon": bad_bigon,
    "trivial-class": trivial_class,
}


def embedded(name):
    return FIXTURES[name]()


def graph(name):
    return FIXTURES[name]().graph


def data_path(name):
    return resources.files("dimerlab").joinpath("data", f"{name}.tg")


def load(name):
    """Parse the packaged golden ``.tg`` file for a fixture."""
    return parse_graph(data_path(name).read_text(encoding="utf-8"))
