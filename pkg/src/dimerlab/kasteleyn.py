"""Kasteleyn orientations and operator, spectral curve, matchings oracle, coranks."""
import random
from dataclasses import dataclass
from fractions import Fraction

from . import exactalg, polygon, zigzag
from .errors import CheckFailed, Infeasible, NoOrientation, NonSquare, ZeroDeterminant
from .exactalg import LaurentPoly2
from .torusgraph import offset_gauge


def unit_weights(g):
    return {e: Fraction(1) for e in range(g.edge_count)}


def random_weight(rng):
    return Fraction(rng.randint(1, 24), rng.randint(1, 24))


def random_weights(g, rng):
    """Positive random rationals; ``rng`` is a :class:`random.Random`."""
    return {e: random_weight(rng) for e in range(g.edge_count)}


def _check_weights(g, weights):
    for e in range(g.edge_count):
        if not weights[e]:
            raise ValueError(f"weight of e{e} is zero")


# ---------------------------------------------------------------------------
# orientation
# ---------------------------------------------------------------------------

def face_sign_system(g):
    """One parity equation per face: the number of -1 signs on its boundary."""
    rows, targets = [], []
    for f in g.faces():
        rows.append([e for e, _ in f.boundary])
        targets.append(1 if len(f) % 4 == 0 else 0)
    return rows, targets


def kasteleyn_orientation(g, fixed=None):
    """Edge signs with face products -1 on faces of length 0 mod 4, +1 otherwise.

    ``fixed`` optionally pins some edges to a given sign.
    """
    rows, targets = face_sign_system(g)
    for e, sign in sorted((fixed or {}).items()):
        rows.append([e])
        targets.append(1 if sign < 0 else 0)
    try:
        bits = exactalg.gf2_solve(rows, targets, g.edge_count)
    except Infeasible as exc:
        raise NoOrientation(f"no Kasteleyn orientation; face rows {list(exc.certificate)} "
                            f"are contradictory (vertex count {g.vertex_count} is odd)") from exc
    return tuple(-1 if b else 1 for b in bits)


def check_orientation(g, kappa):
    for k, f in enumerate(g.faces()):
        prod = 1
        for e, _ in f.boundary:
            prod *= kappa[e]
        want = -1 if len(f) % 4 == 0 else 1
        if prod != want:
            return False
    return True


# ---------------------------------------------------------------------------
# operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KasteleynData:
    kappa: tuple
    weights: dict
    matrix: tuple  # rows indexed by white vertices, columns by black
    det: object = None

    @property
    def square(self):
        return len(self.matrix) == len(self.matrix[0]) if self.matrix else False


def build_matrix(g, weights, kappa):
    rows = [[{} for _ in range(g.black_count)] for _ in range(g.white_count)]
    for e, ed in enumerate(g.edges):
        cell = rows[ed.white][ed.black]
        c = weights[e] * kappa[e]
        cell[ed.offset] = cell[ed.offset] + c if ed.offset in cell else c
    return tuple(tuple(LaurentPoly2(t) for t in row) for row in rows)


def kasteleyn_matrix(g, weights=None, kappa=None, det=True):
    if weights is None:
        weights = unit_weights(g)
    if kappa is None:
        kappa = kasteleyn_orientation(g)
    m = build_matrix(g, weights, kappa)
    d = None
    if det and g.black_count == g.white_count:
        d = exactalg.ff_det([list(r) for r in m])
    return KasteleynData(tuple(kappa), dict(weights), m, d)


def spectral_polynomial(kd):
    if kd.det is not None:
        return kd.det
    if not kd.square:
        raise NonSquare("Kasteleyn matrix is not square")
    return exactalg.ff_det([list(r) for r in kd.matrix])


def normalize_spectral(f):
    """Shift to min exponents (0, 0) and make the lex-least coefficient 1."""
    if not f:
        raise ZeroDeterminant("determinant vanishes identically")
    sup = f.support()
    lo_i = min(i for i, _ in sup)
    lo_j = min(j for _, j in sup)
    g = f.shift(-lo_i, -lo_j)
    lead = g.coeff(*min(g.support()))
    return g.map_coefficients(lambda c: c / lead)


def spectral_rendering(g, weights=None):
    return normalize_spectral(spectral_polynomial(kasteleyn_matrix(g, weights))).render()


def apply_gauge(g, weights, g_b, g_w):
    """w'(E) = g_w(white) * w(E) / g_b(black); missing vertices count as 1."""
    out = {}
    for e, ed in enumerate(g.edges):
        gb = g_b.get(ed.black, 1)
        gw = g_w.get(ed.white, 1)
        if not gb or not gw:
            raise ValueError("gauge values must be nonzero")
        out[e] = gw * weights[e] / gb
    return out


# ---------------------------------------------------------------------------
# matchings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    edges: frozenset
    cls: tuple
    weight: object


def enumerate_matchings(g, weights=None):
    """All perfect matchings, by backtracking over black vertices in index order."""
    if weights is None:
        weights = unit_weights(g)
    if g.black_count != g.white_count:
        return []
    by_black = [[] for _ in range(g.black_count)]
    for e, ed in enumerate(g.edges):
        by_black[ed.black].append(e)
    used = [False] * g.white_count
    chosen = []
    out = []

    def go(b):
        if b == g.black_count:
            cx = sum(g.edges[e].offset[0] for e in chosen)
            cy = sum(g.edges[e].offset[1] for e in chosen)
            wt = Fraction(1)
            for e in chosen:
                wt = wt * weights[e]
            out.append(Matching(frozenset(chosen), (cx, cy), wt))
            return
        for e in by_black[b]:
            w = g.edges[e].white
            if used[w]:
                continue
            used[w] = True
            chosen.append(e)
            go(b + 1)
            chosen.pop()
            used[w] = False

    go(0)
    return out


def matching_table(matchings):
    """class -> (count, weight sum), sorted by class."""
    table = {}
    for mt in matchings:
        n, s = table.get(mt.cls, (0, 0))
        table[mt.cls] = (n + 1, s + mt.weight)
    return dict(sorted(table.items()))


@dataclass(frozen=True)
class SignReport:
    signs: dict      # parity class (i % 2, j % 2) -> +1 / -1 / None
    rows: tuple      # (class, det coefficient, matching weight sum)

    def render(self):
        lines = ["OK"]
        for p in ((0, 0), (0, 1), (1, 0), (1, 1)):
            s = self.signs.get(p)
            lines.append(f"sign{p}: " + ("n/a" if s is None else f"{s:+d}"))
        return "\n".join(lines)


def sign_theorem_check(g, weights=None, kd=None):
    """Compare det coefficients with class-wise signed matching sums.

    Each coefficient of the raw determinant at exponent (i, j) must equal
    the weighted count of matchings of class (i, j) up to a sign that depends
    only on (i mod 2, j mod 2). Raises :class:`CheckFailed` otherwise.
    """
    if weights is None:
        weights = unit_weights(g)
    if kd is None:
        kd = kasteleyn_matrix(g, weights)
    det = spectral_polynomial(kd)
    table = matching_table(enumerate_matchings(g, weights))
    signs = {}
    rows = []
    for cls in sorted(set(det.support()) | set(table)):
        c = det.coeff(*cls)
        s = table.get(cls, (0, 0))[1]
        if c == s and c == 0:
            continue
        if c == s:
            eps = 1
        elif c == -s:
            eps = -1
        else:
            raise CheckFailed(f"class {cls}: det coefficient {c} vs matching sum {s}")
        par = (cls[0] % 2, cls[1] % 2)
        if signs.setdefault(par, eps) != eps:
            raise CheckFailed(f"class {cls}: sign {eps:+d} differs from parity class {par}")
        rows.append((cls, c, s))
    return SignReport(signs, tuple(rows))


def polygon_agreement(g, weights=None):
    """(zig-zag polygon, determinant polygon), both moved to the origin."""
    zz = zigzag.newton_polygon(zigzag.extract_zigzags(g))
    f = normalize_spectral(spectral_polynomial(kasteleyn_matrix(g, weights)))
    return zz, polygon.translate_to_origin(f.newton())


def random_unit(rng):
    q = random_weight(rng)
    return q if rng.random() < 0.5 else -q


def gauge_invariance_check(g, rng, gauges=50, offsets=20, weights=None):
    """Canonical renderings under vertex gauges and offset re-gaugings.

    Returns the reference rendering; raises :class:`CheckFailed` on the first
    transformation that changes it.
    """
    if weights is None:
        weights = random_weights(g, rng)
    ref = spectral_rendering(g, weights)
    for k in range(gauges):
        gb = {i: random_unit(rng) for i in range(g.black_count)}
        gw = {j: random_unit(rng) for j in range(g.white_count)}
        got = spectral_rendering(g, apply_gauge(g, weights, gb, gw))
        if got != ref:
            raise CheckFailed(f"vertex gauge {k} changed the curve: {got} != {ref}")
    for k in range(offsets):
        f = {v: (rng.randint(-3, 3), rng.randint(-3, 3)) for v in g.vertices()}
        got = spectral_rendering(offset_gauge(g, f), weights)
        if got != ref:
            raise CheckFailed(f"offset gauge {k} changed the curve: {got} != {ref}")
    return ref


# ---------------------------------------------------------------------------
# pointwise corank
# ---------------------------------------------------------------------------

def evaluate_matrix(kd, x0, y0):
    x0, y0 = Fraction(x0), Fraction(y0)
    if not x0 or not y0:
        raise ValueError("evaluation point must lie in the torus (nonzero coordinates)")
    return [[entry.evaluate(x0, y0) for entry in row] for row in kd.matrix]


def evaluate_corank(kd, x0, y0):
    m = evaluate_matrix(kd, x0, y0)
    return len(m) - exactalg.rank(m)


def curve_point_weighting(g, x0, y0, rng, kappa=None, tries=50):
    """A random weighting whose spectral curve passes through ``(x0, y0)``.

    The determinant is affine in each single edge weight, so after drawing
    the other weights at random the last one is solved for exactly.
    """
    if kappa is None:
        kappa = kasteleyn_orientation(g)
    for _ in range(tries):
        w = random_weights(g, rng)
        e = rng.randrange(g.edge_count)
        w0 = dict(w)
        w0[e] = Fraction(0)
        w1 = dict(w)
        w1[e] = Fraction(1)
        a = _det_at(g, w0, kappa, x0, y0)
        b = _det_at(g, w1, kappa, x0, y0) - a
        if b and a:
            w[e] = -a / b
            return w
    raise ZeroDeterminant("could not place a curve through the requested point")


def _det_at(g, weights, kappa, x0, y0):
    kd = kasteleyn_matrix(g, weights, kappa, det=False)
    m = evaluate_matrix(kd, x0, y0)
    return _scalar_det(m)


def _scalar_det(m):
    a = [list(r) for r in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[p], a[c] = a[c], a[p]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[c])]
    return det


def random_point(rng):
    def q():
        v = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        return v if rng.random() < 0.5 else -v
    return q(), q()


def make_rng(seed):
    return random.Random(seed)
