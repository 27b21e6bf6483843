"""Bipartite graphs on the torus as combinatorial maps with lattice offsets.

An edge joins black vertex ``b`` to white vertex ``w``; its ``offset``
``(dx, dy)`` is the lattice translation from the cell holding the chosen lift
of ``b`` to the cell holding the lift of ``w`` it connects to. Rotations list
incident edge ids counterclockwise.

A dart is ``(edge_id, +1)`` for the traversal black -> white and
``(edge_id, -1)`` for white -> black. Faces are traced with the face on the
left, so each face boundary runs counterclockwise.
"""
from collections import deque
from dataclasses import dataclass, field

from .errors import TGSyntaxError, ValidationError

BW = 1
WB = -1


def vkey(color, idx):
    return (color, idx)


@dataclass(frozen=True)
class Edge:
    black: int
    white: int
    offset: tuple

    def __post_init__(self):
        object.__setattr__(self, "offset", (int(self.offset[0]), int(self.offset[1])))


@dataclass(frozen=True)
class Face:
    boundary: tuple

    def __len__(self):
        return len(self.boundary)

    def edges(self):
        return [e for e, _ in self.boundary]


@dataclass(frozen=True, eq=False)
class TorusGraph:
    black_count: int
    white_count: int
    edges: tuple
    rot_black: tuple
    rot_white: tuple
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in self.edges))
        object.__setattr__(self, "rot_black", tuple(tuple(r) for r in self.rot_black))
        object.__setattr__(self, "rot_white", tuple(tuple(r) for r in self.rot_white))
        index = {}
        for color, rots in (("b", self.rot_black), ("w", self.rot_white)):
            for i, rot in enumerate(rots):
                index[(color, i)] = {e: k for k, e in enumerate(rot)}
        object.__setattr__(self, "_index", index)

    # structural equality ignores the cached index
    def _key(self):
        return (self.black_count, self.white_count, self.edges, self.rot_black, self.rot_white)

    def __eq__(self, other):
        return isinstance(other, TorusGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    # -- basic queries ------------------------------------------------------
    @property
    def vertex_count(self):
        return self.black_count + self.white_count

    @property
    def edge_count(self):
        return len(self.edges)

    def vertices(self):
        return [("b", i) for i in range(self.black_count)] + [("w", j) for j in range(self.white_count)]

    def rotation(self, v):
        color, i = v
        return self.rot_black[i] if color == "b" else self.rot_white[i]

    def degree(self, v):
        return len(self.rotation(v))

    def succ(self, v, e):
        rot = self.rotation(v)
        return rot[(self._index[v][e] + 1) % len(rot)]

    def pred(self, v, e):
        rot = self.rotation(v)
        return rot[(self._index[v][e] - 1) % len(rot)]

    def endpoints(self, e):
        ed = self.edges[e]
        return ("b", ed.black), ("w", ed.white)

    def tail(self, dart):
        e, d = dart
        ed = self.edges[e]
        return ("b", ed.black) if d == BW else ("w", ed.white)

    def head(self, dart):
        e, d = dart
        ed = self.edges[e]
        return ("w", ed.white) if d == BW else ("b", ed.black)

    def dart_offset(self, dart):
        e, d = dart
        ox, oy = self.edges[e].offset
        return (d * ox, d * oy)

    def darts(self):
        for e in range(len(self.edges)):
            yield (e, BW)
            yield (e, WB)

    def leaving(self, v, e):
        """The dart along edge ``e`` that starts at vertex ``v``."""
        return (e, BW) if v[0] == "b" else (e, WB)

    def face_next(self, dart):
        v = self.head(dart)
        return self.leaving(v, self.pred(v, dart[0]))

    # -- faces --------------------------------------------------------------
    def faces(self):
        cached = getattr(self, "_faces", None)
        if cached is None:
            cached = trace_faces(self)
            object.__setattr__(self, "_faces", cached)
        return cached

    def dart_faces(self):
        """Map each dart to the index of the face on its left."""
        cached = getattr(self, "_dart_faces", None)
        if cached is None:
            cached = {}
            for k, f in enumerate(self.faces()):
                for d in f.boundary:
                    cached[d] = k
            object.__setattr__(self, "_dart_faces", cached)
        return cached

    def face_offset_sum(self, face):
        sx = sy = 0
        for d in face.boundary:
            ox, oy = self.dart_offset(d)
            sx += ox
            sy += oy
        return (sx, sy)


def trace_faces(g):
    """Faces of the embedding, in order of their first dart.

    After arriving at a vertex along an edge, leave along the edge preceding
    it in the counterclockwise rotation; this keeps the face on the left.
    """
    seen = set()
    faces = []
    for start in g.darts():
        if start in seen:
            continue
        boundary = []
        d = start
        while d not in seen:
            seen.add(d)
            boundary.append(d)
            d = g.face_next(d)
        if d != start:
            raise ValidationError("MalformedRotation", "face tracing did not close up")
        faces.append(Face(tuple(boundary)))
    return faces


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate(g):
    """Check every structural invariant; raise ValidationError on the first failure."""
    if g.black_count < 1 or g.white_count < 1:
        raise ValidationError("EmptyColorClass", "need at least one black and one white vertex")
    if len(g.rot_black) != g.black_count or len(g.rot_white) != g.white_count:
        raise ValidationError("MissingRotation", "one rotation per vertex is required")
    incident = {v: [] for v in g.vertices()}
    for k, ed in enumerate(g.edges):
        if not (0 <= ed.black < g.black_count) or not (0 <= ed.white < g.white_count):
            raise ValidationError("VertexOutOfRange", f"edge e{k} references a missing vertex")
        incident[("b", ed.black)].append(k)
        incident[("w", ed.white)].append(k)
    for v, inc in incident.items():
        rot = g.rotation(v)
        if sorted(rot) != sorted(inc) or len(set(rot)) != len(rot):
            raise ValidationError("RotationMismatch",
                                  f"rotation at {v[0]}{v[1]} is {list(rot)}, incident edges are {sorted(inc)}")
        if len(inc) < 2:
            raise ValidationError("DegreeTooSmall", f"vertex {v[0]}{v[1]} has degree {len(inc)}")
    _check_connected(g, incident)
    faces = trace_faces(g)
    chi = g.vertex_count - g.edge_count + len(faces)
    if chi != 0:
        raise ValidationError("EulerCharacteristic", f"V - E + F = {chi}, expected 0")
    for k, f in enumerate(faces):
        s = g.face_offset_sum(f)
        if s != (0, 0):
            raise ValidationError("FaceOffsetNonzero", f"face {k} has offset sum {s}")
    return g


def _check_connected(g, incident):
    start = ("b", 0)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e in incident[v]:
            for u in g.endpoints(e):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    if len(seen) != g.vertex_count:
        raise ValidationError("Disconnected", "graph is not connected")


def build(black_count, white_count, edges, rot_black, rot_white):
    """Construct and validate a TorusGraph."""
    return validate(TorusGraph(black_count, white_count, tuple(edges), tuple(rot_black), tuple(rot_white)))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

HEADER = "torus-graph v1"


def _canonical_cycle(rot):
    if not rot:
        return tuple(rot)
    k = rot.index(min(rot))
    return tuple(rot[k:]) + tuple(rot[:k])


def serialize_graph(g):
    lines = [HEADER, f"black {g.black_count}", f"white {g.white_count}"]
    for ed in g.edges:
        lines.append(f"edge b{ed.black} w{ed.white} {ed.offset[0]} {ed.offset[1]}")
    for i, rot in enumerate(g.rot_black):
        lines.append(f"rot b{i}: " + " ".join(str(e) for e in _canonical_cycle(rot)))
    for j, rot in enumerate(g.rot_white):
        lines.append(f"rot w{j}: " + " ".join(str(e) for e in _canonical_cycle(rot)))
    return "\n".join(lines) + "\n"


def _vertex_token(tok, lineno, col):
    if len(tok) < 2 or tok[0] not in "bw" or not tok[1:].isdigit():
        raise TGSyntaxError(f"expected a vertex id like b0 or w3, got {tok!r}", lineno, col)
    return tok[0], int(tok[1:])


def _int_token(tok, lineno, col):
    try:
        return int(tok)
    except ValueError:
        raise TGSyntaxError(f"expected an integer, got {tok!r}", lineno, col) from None


def parse_graph(text):
    """Parse the ``.tg`` format and validate the result."""
    black = white = None
    edges = []
    rots = {}
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not saw_header:
            if line != HEADER:
                raise TGSyntaxError(f"expected header {HEADER!r}", lineno, 1)
            saw_header = True
            continue
        toks = line.split()
        cols = []
        pos = 0
        for t in toks:
            pos = raw.index(t, pos)
            cols.append(pos + 1)
            pos += len(t)
        kw = toks[0]
        if kw in ("black", "white"):
            if len(toks) != 2:
                raise TGSyntaxError(f"'{kw}' takes one count", lineno, cols[0])
            n = _int_token(toks[1], lineno, cols[1])
            if kw == "black":
                black = n
            else:
                white = n
        elif kw == "edge":
            if len(toks) != 5:
                raise TGSyntaxError("edge line needs: edge <black> <white> <dx> <dy>", lineno, cols[0])
            u = _vertex_token(toks[1], lineno, cols[1])
            v = _vertex_token(toks[2], lineno, cols[2])
            dx = _int_token(toks[3], lineno, cols[3])
            dy = _int_token(toks[4], lineno, cols[4])
            if u[0] == v[0]:
                raise ValidationError("NotBipartite", f"edge e{len(edges)} joins {toks[1]} and {toks[2]}")
            if u[0] == "w":
                raise TGSyntaxError("edge lists its black endpoint first", lineno, cols[1])
            edges.append(Edge(u[1], v[1], (dx, dy)))
        elif kw == "rot":
            if len(toks) < 2 or not toks[1].endswith(":"):
                raise TGSyntaxError("rotation line needs: rot <vertex>: <edge ids>", lineno, cols[0])
            v = _vertex_token(toks[1][:-1], lineno, cols[1])
            if v in rots:
                raise TGSyntaxError(f"duplicate rotation for {toks[1][:-1]}", lineno, cols[1])
            rots[v] = tuple(_int_token(t, lineno, c) for t, c in zip(toks[2:], cols[2:]))
        else:
            raise TGSyntaxError(f"unknown keyword {kw!r}", lineno, cols[0])
    if not saw_header:
        raise TGSyntaxError("empty input", 1, 1)
    if black is None or white is None:
        raise TGSyntaxError("missing 'black' or 'white' count")
    for (color, i) in rots:
        limit = black if color == "b" else white
        if i >= limit:
            raise ValidationError("VertexOutOfRange", f"rotation given for missing vertex {color}{i}")
    all_ids = set(range(len(edges)))
    for v, rot in rots.items():
        bad = [e for e in rot if e not in all_ids]
        if bad:
            raise ValidationError("RotationMismatch", f"rotation at {v[0]}{v[1]} names unknown edges {bad}")
    rot_black = [rots.get(("b", i), ()) for i in range(black)]
    rot_white = [rots.get(("w", j), ()) for j in range(white)]
    return build(black, white, edges, rot_black, rot_white)


def load_graph(path):
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# ---------------------------------------------------------------------------
# offset gauge & isomorphism
# ---------------------------------------------------------------------------

def offset_gauge(g, f):
    """Shift each edge offset by ``f(white) - f(black)``.

    ``f`` maps vertex keys ``('b', i)`` / ``('w', j)`` to integer pairs;
    missing vertices count as (0, 0).
    """
    def at(v):
        p = f.get(v, (0, 0))
        return int(p[0]), int(p[1])

    new_edges = []
    for ed in g.edges:
        fw, fb = at(("w", ed.white)), at(("b", ed.black))
        new_edges.append(Edge(ed.black, ed.white,
                              (ed.offset[0] + fw[0] - fb[0], ed.offset[1] + fw[1] - fb[1])))
    return TorusGraph(g.black_count, g.white_count, tuple(new_edges), g.rot_black, g.rot_white)


def spanning_tree(g, allowed=None):
    """BFS spanning tree from the first allowed vertex.

    Returns ``(parent_edge, order)`` where ``parent_edge[v]`` is the tree edge
    used to reach ``v`` (None for the root).
    """
    verts = [v for v in g.vertices() if allowed is None or v in allowed]
    if not verts:
        return {}, []
    root = verts[0]
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in g.rotation(v):
            for u in g.endpoints(e):
                if u == v or u in parent:
                    continue
                if allowed is not None and u not in allowed:
                    continue
                parent[u] = e
                order.append(u)
                queue.append(u)
    return parent, order


def tree_gauge(g):
    """Vertex shifts that make every BFS-tree edge offset (0, 0)."""
    parent, order = spanning_tree(g)
    f = {order[0]: (0, 0)}
    for v in order[1:]:
        e = parent[v]
        ed = g.edges[e]
        if v[0] == "w":
            fb = f[("b", ed.black)]
            f[v] = (fb[0] - ed.offset[0], fb[1] - ed.offset[1])
        else:
            fw = f[("w", ed.white)]
            f[v] = (fw[0] + ed.offset[0], fw[1] + ed.offset[1])
    return f


def isomorphic(g1, g2):
    """Color- and orientation-preserving map isomorphism, offsets up to gauge."""
    if (g1.black_count, g1.white_count, g1.edge_count) != (g2.black_count, g2.white_count, g2.edge_count):
        return False
    if g1.edge_count == 0:
        return True
    b0 = ("b", 0)
    e0 = g1.rotation(b0)[0]
    for v2 in (("b", i) for i in range(g2.black_count)):
        for e2 in g2.rotation(v2):
            emap = _extend_map(g1, g2, b0, e0, v2, e2)
            if emap is not None and _offsets_match(g1, g2, emap):
                return True
    return False


def _extend_map(g1, g2, v1, e1, v2, e2):
    # half-edges are (vertex, edge); propagate via rotation and edge flip
    hmap = {}
    stack = [((v1, e1), (v2, e2))]
    while stack:
        h1, h2 = stack.pop()
        if h1 in hmap:
            if hmap[h1] != h2:
                return None
            continue
        (a1, x1), (a2, x2) = h1, h2
        if a1[0] != a2[0] or g1.degree(a1) != g2.degree(a2):
            return None
        hmap[h1] = h2
        stack.append(((a1, g1.succ(a1, x1)), (a2, g2.succ(a2, x2))))
        o1 = [u for u in g1.endpoints(x1) if u != a1][0]
        o2 = [u for u in g2.endpoints(x2) if u != a2][0]
        stack.append(((o1, x1), (o2, x2)))
    if len(hmap) != 2 * g1.edge_count:
        return None
    emap = {}
    vmap = {}
    for (a1, x1), (a2, x2) in hmap.items():
        if emap.setdefault(x1, x2) != x2 or vmap.setdefault(a1, a2) != a2:
            return None
    if len(set(emap.values())) != len(emap) or len(set(vmap.values())) != len(vmap):
        return None
    return emap


def _offsets_match(g1, g2, emap):
    # find f with off2(emap e) = off1(e) + f(w) - f(b) on a spanning tree, then verify
    diff = {e: (g2.edges[emap[e]].offset[0] - g1.edges[e].offset[0],
                g2.edges[emap[e]].offset[1] - g1.edges[e].offset[1]) for e in emap}
    parent, order = spanning_tree(g1)
    f = {order[0]: (0, 0)}
    for v in order[1:]:
        e = parent[v]
        ed = g1.edges[e]
        d = diff[e]
        if v[0] == "w":
            fb = f[("b", ed.black)]
            f[v] = (fb[0] + d[0], fb[1] + d[1])
        else:
            fw = f[("w", ed.white)]
            f[v] = (fw[0] - d[0], fw[1] - d[1])
    for e, ed in enumerate(g1.edges):
        fw, fb = f[("w", ed.white)], f[("b", ed.black)]
        if diff[e] != (fw[0] - fb[0], fw[1] - fb[1]):
            return False
    return True
