"""Face coordinates, dual quiver, square moves, X-transformation, Hamiltonians.

Chains are integer combinations of edges, stored as ``{edge_id: coeff}``
with the black -> white direction counted positively. The holonomy of a
chain is ``prod w(e) ** coeff``; a face boundary is the chain of its darts,
so the face coordinate is the holonomy of the boundary.
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactalg, kasteleyn, polygon
from .errors import (InconsistentSeed, NonzeroFaceOffsets, NotQuadrilateral, NotTrivalent,
                     SingularTransform, ZeroDeterminant)
from .exactalg import Jet
from .torusgraph import BW, WB, Edge, TorusGraph, validate
from .zigzag import extract_zigzags


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

def _add_chain(acc, chain, k=1):
    for e, c in chain.items():
        v = acc.get(e, 0) + k * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)
    return acc


def face_chain(face):
    out = {}
    for e, d in face.boundary:
        _add_chain(out, {e: d})
    return out


def zigzag_chain(z):
    out = {}
    for e, d in z.passes:
        _add_chain(out, {e: d})
    return out


def chain_homology(g, chain):
    hx = hy = 0
    for e, c in chain.items():
        ox, oy = g.edges[e].offset
        hx += c * ox
        hy += c * oy
    return (hx, hy)


def holonomy(weights, chain, one=1):
    acc = one
    for e, c in sorted(chain.items()):
        acc = acc * weights[e] ** c
    return acc


def _tree_path_chain(g, parent, v):
    """Chain of the tree path from the root to ``v``."""
    out = {}
    while parent[v] is not None:
        e = parent[v]
        ed = g.edges[e]
        # the step arrives at v; it runs b -> w when v is white
        _add_chain(out, {e: 1 if v[0] == "w" else -1})
        v = ("b", ed.black) if v[0] == "w" else ("w", ed.white)
    return out


def fundamental_cycles(g, allowed=None):
    """Fundamental cycles of a BFS spanning forest on the allowed edges.

    Returns a list of ``(edge, chain)`` for each non-tree edge, each chain
    containing that edge with coefficient +1.
    """
    if allowed is None:
        allowed = set(range(g.edge_count))
    allowed = set(allowed)
    verts = set()
    for e in allowed:
        verts.update(g.endpoints(e))
    parent = {}
    comps = []
    for root in g.vertices():
        if root not in verts or root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in g.rotation(v):
                if e not in allowed:
                    continue
                for u in g.endpoints(e):
                    if u != v and u not in parent:
                        parent[u] = e
                        queue.append(u)
        comps.append(root)
    tree = {e for e in parent.values() if e is not None}
    out = []
    for e in sorted(allowed - tree):
        b, w = g.endpoints(e)
        chain = {e: 1}
        _add_chain(chain, _tree_path_chain(g, parent, w), -1)
        _add_chain(chain, _tree_path_chain(g, parent, b))
        out.append((e, chain))
    return out


def basis_cycles(g, avoid=()):
    """Two integer cycles with homology classes (1, 0) and (0, 1).

    Only edges outside ``avoid`` are used; raises ValueError when those do
    not carry all of H_1.
    """
    allowed = set(range(g.edge_count)) - set(avoid)
    vecs = []
    for _, chain in fundamental_cycles(g, allowed):
        h = chain_homology(g, chain)
        if h != (0, 0):
            vecs.append([h, chain])
    basis = _reduce_lattice(vecs)
    if basis is None:
        raise ValueError("the allowed edges do not carry a homology basis")
    return basis


def _reduce_lattice(vecs):
    # integer row reduction on homology vectors, carrying chains along
    rows = [[tuple(h), dict(c)] for h, c in vecs]

    def combine(dst, src, k):
        dst[0] = (dst[0][0] - k * src[0][0], dst[0][1] - k * src[0][1])
        _add_chain(dst[1], src[1], -k)

    # first column
    rows = [r for r in rows if r[0] != (0, 0)]
    while True:
        nz = [r for r in rows if r[0][0] != 0]
        if len(nz) <= 1:
            break
        piv = min(nz, key=lambda r: abs(r[0][0]))
        for r in nz:
            if r is not piv:
                combine(r, piv, r[0][0] // piv[0][0])
    nz = [r for r in rows if r[0][0] != 0]
    if len(nz) != 1 or abs(nz[0][0][0]) != 1:
        return None
    px = nz[0]
    rest = [r for r in rows if r is not px and r[0][1] != 0]
    while len(rest) > 1:
        piv = min(rest, key=lambda r: abs(r[0][1]))
        for r in rest:
            if r is not piv:
                combine(r, piv, r[0][1] // piv[0][1])
        rest = [r for r in rest if r[0][1] != 0]
    if len(rest) != 1 or abs(rest[0][0][1]) != 1:
        return None
    py = rest[0]
    if py[0][1] < 0:
        py = [(-py[0][0], -py[0][1]), {e: -c for e, c in py[1].items()}]
    if px[0][0] < 0:
        px = [(-px[0][0], -px[0][1]), {e: -c for e, c in px[1].items()}]
    combine(px, py, px[0][1])
    assert px[0] == (1, 0) and py[0] == (0, 1)
    return px[1], py[1]


# ---------------------------------------------------------------------------
# quiver and seeds
# ---------------------------------------------------------------------------

def exchange_matrix(g):
    """eps[F][G] = #arrows F->G - #arrows G->F.

    The arrow dual to an edge crosses it with the white endpoint on its
    right, i.e. from the face right of the black -> white dart to the face
    on its left.
    """
    n = len(g.faces())
    eps = [[0] * n for _ in range(n)]
    left = g.dart_faces()
    for e in range(g.edge_count):
        f_left = left[(e, BW)]
        f_right = left[(e, WB)]
        eps[f_right][f_left] += 1
        eps[f_left][f_right] -= 1
    return tuple(tuple(r) for r in eps)


@dataclass(frozen=True)
class ClusterSeed:
    X: tuple
    eps: tuple
    qx: object = 1
    qy: object = 1
    cycles: tuple = field(default=None, compare=False)

    @property
    def faces(self):
        return tuple(range(len(self.X)))

    def product(self):
        p = Fraction(1)
        for x in self.X:
            p = p * x
        return p

    def render(self):
        lines = [f"X[{k}]={x}" for k, x in enumerate(self.X)]
        lines.append(f"qx={self.qx}")
        lines.append(f"qy={self.qy}")
        return "\n".join(lines)


def face_coordinates(g, weights, cycles=None):
    if cycles is None:
        cycles = basis_cycles(g)
    X = tuple(holonomy(weights, face_chain(f)) for f in g.faces())
    prod = 1
    for x in X:
        prod = prod * x
    assert prod == 1, "face coordinates must multiply to 1"
    return ClusterSeed(X, exchange_matrix(g), holonomy(weights, cycles[0]),
                       holonomy(weights, cycles[1]), tuple(cycles))


def poisson_bracket(seed, f, g):
    """{X_f, X_g} = eps_fg X_f X_g."""
    return seed.eps[f][g] * seed.X[f] * seed.X[g]


def mutate_eps(eps, k):
    n = len(eps)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -eps[i][j]
            else:
                a, b = eps[i][k], eps[k][j]
                out[i][j] = eps[i][j] + (abs(a) * b + a * abs(b)) // 2
    return tuple(tuple(r) for r in out)


def x_transform(seed, face):
    """Cluster X-transformation at ``face``.

    Neighbours receiving arrows from the face pick up (1 + X_M) per arrow,
    neighbours sending arrows to it pick up (1 + X_M^-1)^-1 per arrow.
    """
    xm = seed.X[face]
    if xm == -1:
        raise SingularTransform(f"X[{face}] = -1")
    new = []
    for f, xf in enumerate(seed.X):
        if f == face:
            new.append(1 / xm)
            continue
        e = seed.eps[f][face]
        if e < 0:
            new.append(xf * (1 + xm) ** (-e))
        elif e > 0:
            new.append(xf * (1 + 1 / xm) ** (-e))
        else:
            new.append(xf)
    out = ClusterSeed(tuple(new), mutate_eps(seed.eps, face), seed.qx, seed.qy, seed.cycles)
    prod = 1
    for x in new:
        prod = prod * x
    assert prod == 1, "X-transformation must preserve the product of face coordinates"
    return out


# ---------------------------------------------------------------------------
# weights from seeds
# ---------------------------------------------------------------------------

def _face_potentials(g, chain):
    """Integers a_F with chain = sum a_F * boundary(F), last face pinned to 0."""
    left = g.dart_faces()
    n = len(g.faces())
    adj = [[] for _ in range(n)]
    for e in range(g.edge_count):
        f, h = left[(e, BW)], left[(e, WB)]
        # chain coefficient on e equals a_f - a_h
        adj[h].append((f, e, 1))
        adj[f].append((h, e, -1))
    a = [None] * n
    a[n - 1] = 0
    queue = deque([n - 1])
    while queue:
        u = queue.popleft()
        for v, e, s in adj[u]:
            if a[v] is None:
                a[v] = a[u] + s * chain.get(e, 0)
                queue.append(v)
    for e in range(g.edge_count):
        f, h = left[(e, BW)], left[(e, WB)]
        if a[f] - a[h] != chain.get(e, 0):
            raise ValueError("chain is not a sum of face boundaries")
    return a


def decompose_cycle(g, chain, cycles):
    """Write a cycle as sum a_F * boundary(F) + hx * cycles[0] + hy * cycles[1]."""
    hx, hy = chain_homology(g, chain)
    rest = dict(chain)
    _add_chain(rest, cycles[0], -hx)
    _add_chain(rest, cycles[1], -hy)
    return _face_potentials(g, rest), (hx, hy)


def _monomial(X, a, qx, qy, h, one):
    acc = one
    for xf, k in zip(X, a):
        if k:
            acc = acc * xf ** k
    if h[0]:
        acc = acc * qx ** h[0]
    if h[1]:
        acc = acc * qy ** h[1]
    return acc


def reconstruct_weights(g, seed, cycles=None, one=None):
    """Weights in spanning-tree gauge realising the seed's coordinates."""
    if one is None:
        one = Fraction(1)
    prod = one
    for x in seed.X:
        prod = prod * x
    if prod != 1:
        raise InconsistentSeed(f"face coordinates multiply to {prod}, not 1")
    if cycles is None:
        cycles = seed.cycles if seed.cycles is not None else basis_cycles(g)
    weights = {e: one for e in range(g.edge_count)}
    for e, chain in fundamental_cycles(g):
        a, h = decompose_cycle(g, chain, cycles)
        weights[e] = _monomial(seed.X, a, seed.qx, seed.qy, h, one)
    return weights


# ---------------------------------------------------------------------------
# square move
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MoveResult:
    graph: TorusGraph
    face_map: dict     # old face index -> new face index
    edge_map: dict     # old edge id -> new edge id, for edges that survive
    local_edges: frozenset  # old edge ids touched by the move


def _other_end(g, v, e):
    b, w = g.endpoints(e)
    return w if v == b else b


def move_region(g, face):
    """Corners, face edges, legs and outer neighbours of a square face."""
    faces = g.faces()
    if not 0 <= face < len(faces):
        raise NotQuadrilateral(f"no face {face}")
    bd = faces[face].boundary
    if len(bd) != 4:
        raise NotQuadrilateral(f"face {face} has {len(bd)} sides")
    corners = [g.tail(d) for d in bd]
    fedges = [d[0] for d in bd]
    if len(set(corners)) != 4 or len(set(fedges)) != 4:
        raise NotQuadrilateral(f"face {face} does not have four distinct corners")
    for c in corners:
        if g.degree(c) != 3:
            raise NotTrivalent(f"corner {c[0]}{c[1]} has degree {g.degree(c)}")
    for e in fedges:
        if g.edges[e].offset != (0, 0):
            raise NonzeroFaceOffsets(f"face edge e{e} has offset {g.edges[e].offset}")
    legs = []
    for i, c in enumerate(corners):
        rot = g.rotation(c)
        leg = [e for e in rot if e not in (fedges[i], fedges[i - 1])]
        if len(leg) != 1:
            raise NotQuadrilateral(f"corner {c[0]}{c[1]} touches the face more than twice")
        legs.append(leg[0])
    return corners, fedges, legs


def square_move_with_maps(g, face):
    corners, fedges, legs = move_region(g, face)
    corner_set = set(corners)

    def cell_of_far(c, e):
        # cell of the far endpoint of edge e, with c placed in cell 0
        off = g.edges[e].offset
        return off if c[0] == "b" else (-off[0], -off[1])

    outer = [_other_end(g, c, legs[i]) for i, c in enumerate(corners)]
    contract = []
    for i, o in enumerate(outer):
        ok = (o not in corner_set and g.degree(o) == 2 and outer.count(o) == 1)
        if ok:
            p_edge = [e for e in g.rotation(o) if e != legs[i]][0]
            p = _other_end(g, o, p_edge)
            ok = p not in corner_set and p_edge not in legs and p not in outer
        contract.append(ok)

    removed = {outer[i] for i in range(4) if contract[i]}
    freed = []
    plan = []   # per corner: ('contract', p, p_edge, offset) or ('insert', o, offset)
    for i, c in enumerate(corners):
        o = outer[i]
        cell_o = cell_of_far(c, legs[i])
        if contract[i]:
            p_edge = [e for e in g.rotation(o) if e != legs[i]][0]
            p = _other_end(g, o, p_edge)
            po = g.edges[p_edge].offset
            cell_p = (cell_o[0] - po[0], cell_o[1] - po[1]) if o[0] == "w" else \
                     (cell_o[0] + po[0], cell_o[1] + po[1])
            plan.append(("contract", p, p_edge, cell_p))
            freed.append(p_edge)
        else:
            plan.append(("insert", o, cell_o))
    freed.sort()

    # new vertex numbering
    flip = {"b": "w", "w": "b"}
    keep_b = [("b", i) for i in range(g.black_count) if ("b", i) not in corner_set | removed]
    keep_w = [("w", j) for j in range(g.white_count) if ("w", j) not in corner_set | removed]
    new_b = keep_b + [("c", i) for i, c in enumerate(corners) if c[0] == "w"]
    new_w = keep_w + [("c", i) for i, c in enumerate(corners) if c[0] == "b"]
    for i, c in enumerate(corners):
        if plan[i][0] == "insert":
            (new_b if c[0] == "b" else new_w).append(("n", i))
    bidx = {v: k for k, v in enumerate(new_b)}
    widx = {v: k for k, v in enumerate(new_w)}

    def color(tag):
        if tag[0] in ("b", "w"):
            return tag[0]
        if tag[0] == "c":
            return flip[corners[tag[1]][0]]
        return corners[tag[1]][0]

    def mk(u, v, off):
        # off is the cell of v relative to u
        if color(u) == "b":
            return Edge(bidx[u], widx[v], off)
        return Edge(bidx[v], widx[u], (-off[0], -off[1]))

    edges = list(g.edges)
    rots = {v: list(g.rotation(v)) for v in g.vertices() if v not in corner_set | removed}
    free_iter = iter(freed)
    extra = []

    def fresh():
        nxt = next(free_iter, None)
        if nxt is not None:
            return nxt
        extra.append(None)
        return len(g.edges) + len(extra) - 1

    new_edge_rows = {}
    for i in range(4):
        # face edge i joins corner i and corner i+1, offset 0
        new_edge_rows[fedges[i]] = mk(("c", i), ("c", (i + 1) % 4), (0, 0))
    for i, c in enumerate(corners):
        kind = plan[i]
        if kind[0] == "contract":
            _, p, p_edge, off = kind
            new_edge_rows[legs[i]] = mk(("c", i), p, off)
            rots[p] = [legs[i] if e == p_edge else e for e in rots[p]]
        else:
            _, o, off = kind
            eid = fresh()
            new_edge_rows[legs[i]] = mk(("c", i), ("n", i), (0, 0))
            # the inserted vertex carries the old corner colour
            new_edge_rows[eid] = mk(("n", i), o, off)
            rots[("n", i)] = [legs[i], eid]
            rots[o] = [eid if e == legs[i] else e for e in rots[o]]
        rots[("c", i)] = [fedges[i], fedges[i - 1], legs[i]]
    total = len(g.edges) + len(extra)
    unused = set(freed) - set(new_edge_rows)
    if unused:
        # renumber the top ids into the holes so ids stay dense
        holes = sorted(unused)
        tops = sorted((e for e in range(total) if e not in unused and e >= total - len(holes)), reverse=True)
        remap = {}
        for h in holes:
            if h >= total - len(holes):
                continue
            t = tops.pop(0)
            remap[t] = h
        total -= len(holes)
    else:
        remap = {}

    def rid(e):
        return remap.get(e, e)

    final = [None] * total
    for e in range(len(edges) + len(extra)):
        if e in unused:
            continue
        row = new_edge_rows.get(e)
        if row is None:
            ed = g.edges[e]
            row = mk(("b", ed.black), ("w", ed.white), ed.offset)
        final[rid(e)] = row
    rot_black = [None] * len(new_b)
    rot_white = [None] * len(new_w)
    for v, rot in rots.items():
        tag = v
        rr = tuple(rid(e) for e in rot)
        if color(tag) == "b":
            rot_black[bidx[tag]] = rr
        else:
            rot_white[widx[tag]] = rr
    g2 = validate(TorusGraph(len(new_b), len(new_w), tuple(final), tuple(rot_black), tuple(rot_white)))

    local = set(fedges) | set(legs) | set(freed)
    edge_map = {e: rid(e) for e in range(g.edge_count) if e not in set(freed)}
    face_map = _map_faces(g, g2, face, corners, fedges, legs, local, edge_map, color, bidx, widx)
    return MoveResult(g2, face_map, edge_map, frozenset(local))


def _map_faces(g, g2, face, corners, fedges, legs, local, edge_map, color, bidx, widx):
    left2 = g2.dart_faces()

    def new_vertex(i):
        tag = ("c", i)
        return ("b", bidx[tag]) if color(tag) == "b" else ("w", widx[tag])

    out = {}
    for k, f in enumerate(g.faces()):
        if k == face:
            out[k] = left2[g2.leaving(new_vertex(0), edge_map[fedges[0]])]
            continue
        target = None
        for e, d in f.boundary:
            if e not in local:
                target = left2[(edge_map[e], d)]
                break
        if target is None:
            # face made of local edges only: use a dart leaving a corner
            for i, c in enumerate(corners):
                for e in (legs[i], fedges[i], fedges[i - 1]):
                    if (e, BW if c[0] == "b" else WB) in f.boundary:
                        target = left2[g2.leaving(new_vertex(i), edge_map[e])]
                        break
                if target is not None:
                    break
        out[k] = target
    if sorted(out.values()) != list(range(len(g2.faces()))):
        raise AssertionError("square move did not induce a bijection of faces")
    return out


def square_move(g, face):
    res = square_move_with_maps(g, face)
    expected = mutate_eps(exchange_matrix(g), face)
    got = exchange_matrix(res.graph)
    fm = res.face_map
    n = len(expected)
    for i in range(n):
        for j in range(n):
            assert got[fm[i]][fm[j]] == expected[i][j], "quiver of the moved graph is not the mutation"
    return res.graph


def transport_seed(seed, face_map, cycles=None):
    """Renumber a seed's faces through a face map (old index -> new index)."""
    n = len(seed.X)
    inv = {v: k for k, v in face_map.items()}
    X = tuple(seed.X[inv[k]] for k in range(n))
    eps = tuple(tuple(seed.eps[inv[i]][inv[j]] for j in range(n)) for i in range(n))
    return ClusterSeed(X, eps, seed.qx, seed.qy, seed.cycles if cycles is None else cycles)


def transport_orientation(g, g2, kappa, edge_map, local):
    """Kasteleyn signs on the moved graph agreeing with ``kappa`` away from the move."""
    fixed = {edge_map[e]: kappa[e] for e in range(g.edge_count) if e not in local}
    return kasteleyn.kasteleyn_orientation(g2, fixed=fixed)


@dataclass(frozen=True)
class MutationReport:
    before: str
    after: str
    graph: TorusGraph
    seed: ClusterSeed

    @property
    def ok(self):
        return self.before == self.after


def apply_move(g, face, seed):
    """Square move at ``face`` together with the X-transformation of ``seed``.

    The seed's basis cycles must avoid the edges touched by the move; they
    are carried over to the new graph unchanged.
    """
    res = square_move_with_maps(g, face)
    if seed.cycles is None or any(e in res.local_edges for cyc in seed.cycles for e in cyc):
        raise ValueError("basis cycles must avoid the edges of the square move")
    cycles2 = tuple({res.edge_map[e]: c for e, c in cyc.items()} for cyc in seed.cycles)
    return res, transport_seed(x_transform(seed, face), res.face_map, cycles2)


def mutation_invariance_check(g, face, seed=None, weights=None):
    """Normalized spectral curves before and after (square move, X-transform)."""
    local = move_region_edges(g, face)
    cycles = basis_cycles(g, avoid=local)
    if seed is None:
        if weights is None:
            weights = kasteleyn.unit_weights(g)
        seed = face_coordinates(g, weights, cycles)
    else:
        seed = ClusterSeed(seed.X, seed.eps, seed.qx, seed.qy, cycles)
    w1 = reconstruct_weights(g, seed, cycles)
    kappa = kasteleyn.kasteleyn_orientation(g)
    before = kasteleyn.normalize_spectral(
        kasteleyn.spectral_polynomial(kasteleyn.kasteleyn_matrix(g, w1, kappa))).render()
    res, seed2 = apply_move(g, face, seed)
    g2 = res.graph
    w2 = reconstruct_weights(g2, seed2)
    kappa2 = transport_orientation(g, g2, kappa, res.edge_map, res.local_edges)
    after = kasteleyn.normalize_spectral(
        kasteleyn.spectral_polynomial(kasteleyn.kasteleyn_matrix(g2, w2, kappa2))).render()
    return MutationReport(before, after, g2, seed2)


def move_region_edges(g, face):
    """Edge ids the square move at ``face`` touches."""
    return square_move_with_maps(g, face).local_edges


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hamiltonians:
    H: dict
    casimirs: dict

    def render(self):
        return render_hamiltonians(self)


def _point_text(p):
    return f"({p[0]},{p[1]})"


def split_coefficients(f):
    """Coefficients of a polynomial at interior / boundary lattice points of its Newton polygon."""
    if not f:
        return {}, {}
    interior, boundary = polygon.lattice_points(f.newton())
    H = {p: f.coeff(*p) for p in interior}
    C = {p: f.coeff(*p) for p in boundary}
    return H, C


def hamiltonians(g, weights=None, kd=None):
    if kd is None:
        kd = kasteleyn.kasteleyn_matrix(g, weights)
    det = kasteleyn.spectral_polynomial(kd)
    if not det:
        raise ZeroDeterminant("determinant vanishes identically")
    f = kasteleyn.normalize_spectral(det)
    H, C = split_coefficients(f)
    return Hamiltonians(H, C)


def render_hamiltonians(h):
    lines = [f"interior {_point_text(p)}: {v}" for p, v in sorted(h.H.items())]
    lines += [f"boundary {_point_text(p)}: {v}" for p, v in sorted(h.casimirs.items())]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commutativity
# ---------------------------------------------------------------------------

def casimir_strands(g, zigzags=None):
    """Two zig-zags with independent classes, a lattice basis when possible."""
    zz = extract_zigzags(g) if zigzags is None else zigzags
    best = None
    for i in range(len(zz)):
        for j in range(i + 1, len(zz)):
            d = abs(polygon.cross(zz[i].cls, zz[j].cls))
            if d and (best is None or d < best[0]):
                best = (d, zz[i], zz[j])
    if best is None:
        raise ValueError("all zig-zag classes are parallel")
    return best[1], best[2]


def quasimomenta_from_casimirs(g, X, z_values, strands, cycles, base):
    """Jets for (qx, qy) keeping two zig-zag holonomies fixed.

    ``base`` holds the values of (qx, qy) at the expansion point. Only the
    first order part is solved for: the classes h1, h2 give a 2x2 system for
    the logarithmic derivatives of qx and qy.
    """
    rows = []
    for z, val in zip(strands, z_values):
        a, h = decompose_cycle(g, zigzag_chain(z), cycles)
        rest = val
        for xf, k in zip(X, a):
            if k:
                rest = rest / xf ** k
        rows.append((h, [d / rest.value for d in rest.partials]))
    (h1, r1), (h2, r2) = rows
    det = h1[0] * h2[1] - h1[1] * h2[0]
    dlx = [(h2[1] * u - h1[1] * v) / det for u, v in zip(r1, r2)]
    dly = [(h1[0] * v - h2[0] * u) / det for u, v in zip(r1, r2)]
    qx0, qy0 = Fraction(base[0]), Fraction(base[1])
    return Jet(qx0, [qx0 * d for d in dlx]), Jet(qy0, [qy0 * d for d in dly])


@dataclass(frozen=True)
class CommutationReport:
    points: int
    hamiltonians: int
    brackets: tuple          # exact values of {H_i, H_j}
    casimir_brackets: tuple  # exact values of {H, boundary ratio}

    @property
    def ok(self):
        return all(b == 0 for b in self.brackets) and all(b == 0 for b in self.casimir_brackets)


def jet_coefficients(g, seed, strands=None, cycles=None):
    """Normalized determinant coefficients as jets in the first F-1 face coordinates.

    The last face coordinate is fixed by the product relation; the
    holonomies of two basis zig-zags (Casimirs) are held constant.
    """
    if cycles is None:
        cycles = seed.cycles if seed.cycles is not None else basis_cycles(g)
    if strands is None:
        strands = casimir_strands(g)
    nf = len(seed.X)
    nv = nf - 1
    one = Jet.constant(1, nv)
    Xj = [Jet.variable(seed.X[k], k, nv) for k in range(nv)]
    last = one
    for x in Xj:
        last = last / x
    Xj.append(last)
    w0 = reconstruct_weights(g, seed, cycles)
    zvals = [Jet.constant(holonomy(w0, zigzag_chain(z)), nv) for z in strands]
    qx, qy = quasimomenta_from_casimirs(g, Xj, zvals, strands, cycles, (seed.qx, seed.qy))
    jseed = ClusterSeed(tuple(Xj), seed.eps, qx, qy, cycles)
    weights = reconstruct_weights(g, jseed, cycles, one=one)
    kd = kasteleyn.kasteleyn_matrix(g, weights, det=False)
    det = exactalg.det_expand([list(r) for r in kd.matrix], one=exactalg.LaurentPoly2.constant(one))
    f = kasteleyn.normalize_spectral(det)
    return split_coefficients(f)


def jet_bracket(seed, a, b):
    nv = len(seed.X) - 1
    total = Fraction(0)
    for i in range(nv):
        if not a.partials[i]:
            continue
        for j in range(nv):
            e = seed.eps[i][j]
            if e:
                total += e * seed.X[i] * seed.X[j] * a.partials[i] * b.partials[j]
    return total


def _as_jet(v, nv):
    return v if isinstance(v, Jet) else Jet.constant(v, nv)


def commutativity_check(g, seeds):
    """Exact brackets of Hamiltonians (and of Hamiltonians with Casimir ratios)."""
    strands = casimir_strands(g)
    brackets = []
    cbrackets = []
    nh = set()
    for seed in seeds:
        nv = len(seed.X) - 1
        H, C = jet_coefficients(g, seed, strands)
        Hs = [_as_jet(H[p], nv) for p in sorted(H)]
        nh.add(len(Hs))
        for i in range(len(Hs)):
            for j in range(i + 1, len(Hs)):
                brackets.append(jet_bracket(seed, Hs[i], Hs[j]))
        cs = [_as_jet(C[p], nv) for p in sorted(C) if C[p]]
        ratios = [cs[k] / cs[0] for k in range(1, len(cs))]
        for r in ratios:
            for h in Hs:
                cbrackets.append(jet_bracket(seed, h, r))
    return CommutationReport(len(seeds), max(nh, default=0), tuple(brackets), tuple(cbrackets))


def random_seed(g, rng, cycles=None):
    """Seed of a random positive weighting."""
    return face_coordinates(g, kasteleyn.random_weights(g, rng), cycles)
