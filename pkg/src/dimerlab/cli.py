"""``dimerlab`` command line.

Every subcommand reads one ``.tg`` file and prints a deterministic text
report. Exit status: 0 success, 1 invalid input or failed check, 2 usage.
"""
import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import cluster, kasteleyn, polygon, svg, zigzag
from .errors import CheckFailed, DimerError, TGSyntaxError, ValidationError
from .torusgraph import load_graph, serialize_graph

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    input: str
    seed: int = 0
    out: str = None
    weights: str = "unit"
    t: Fraction = Fraction(1)
    face: int = None
    svg: bool = False
    width: int = 400
    jobs: int = 1
    points: int = 20


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser():
    p = _Parser(prog="dimerlab", description="Dimer model pipeline on bipartite torus graphs.")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def cmd(name, help, weights=False):
        c = sub.add_parser(name, help=help)
        c.add_argument("input", help="torus graph file (.tg)")
        c.add_argument("--seed", type=_seed, default=0)
        c.add_argument("--out", default=None, help="write the main output here instead of stdout")
        c.add_argument("--jobs", type=int, default=1)
        if weights:
            c.add_argument("--weights", choices=("unit", "random"), default="unit")
        return c

    cmd("validate", "parse and check structural invariants")
    cmd("zigzags", "list zig-zag strands and the consistency verdict")
    cmd("consistency", "decide consistency (exit 1 if inconsistent)")
    c = cmd("newton", "Newton polygon from zig-zag classes")
    c.add_argument("--svg", action="store_true")
    c.add_argument("--width", type=int, default=400)
    cmd("fan", "stacky fan of the Newton polygon")
    cmd("kasteleyn", "Kasteleyn signs and operator", weights=True)
    cmd("detcurve", "normalized spectral polynomial", weights=True)
    cmd("matchings", "perfect matchings by homology class", weights=True)
    cmd("check", "sign theorem, polygon agreement and gauge invariance")
    c = cmd("squaremove", "square move plus cluster transformation", weights=True)
    c.add_argument("--face", type=int, required=True)
    cmd("hamiltonians", "interior and boundary coefficients", weights=True)
    c = cmd("commute", "Poisson brackets of Hamiltonians at random points")
    c.add_argument("--points", type=int, default=20)
    c = cmd("fronts", "geodesic front arrangement of the stacky fan")
    c.add_argument("--t", type=_rational, default=Fraction(1))
    c.add_argument("--svg", action="store_true")
    c.add_argument("--width", type=int, default=400)
    return p


def config_from_args(argv):
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(ns.command, ns.input, seed=ns.seed, out=ns.out, jobs=ns.jobs)
    for name in ("weights", "t", "face", "svg", "width", "points"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if cfg.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if cfg.width < 1:
        raise UsageError("--width must be positive")
    if not 0 <= cfg.t <= 1:
        raise UsageError("--t must lie in [0, 1]")
    if cfg.points < 1:
        raise UsageError("--points must be at least 1")
    return cfg


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, text)
# ---------------------------------------------------------------------------

def _weights(g, cfg):
    if cfg.weights == "random":
        return kasteleyn.random_weights(g, kasteleyn.make_rng(cfg.seed))
    return kasteleyn.unit_weights(g)


def _pt(p):
    return f"({p[0]},{p[1]})"


def do_validate(g, cfg):
    return OK, (f"valid: black={g.black_count} white={g.white_count} "
                f"edges={g.edge_count} faces={len(g.faces())}")


def do_zigzags(g, cfg):
    zz = zigzag.extract_zigzags(g)
    lines = [f"zz{k}: class={_pt(z.cls)} len={len(z.passes)}" for k, z in enumerate(zz)]
    lines.append(zigzag.check_consistency(g, zz).render())
    return OK, "\n".join(lines)


def do_consistency(g, cfg):
    v = zigzag.check_consistency(g)
    return (OK if v.consistent else FAILED), v.render()


def do_newton(g, cfg):
    poly = zigzag.newton_polygon(zigzag.extract_zigzags(g))
    if cfg.svg:
        return OK, svg.polygon_svg(poly, cfg.width)
    interior, boundary = polygon.lattice_points(poly)
    return OK, "\n".join([
        "polygon: " + " ".join(_pt(p) for p in poly),
        f"interior points: {len(interior)}",
        f"boundary points: {len(boundary)}",
    ])


def do_fan(g, cfg):
    fan = zigzag.stacky_fan(zigzag.newton_polygon(zigzag.extract_zigzags(g)))
    return OK, "\n".join(f"ray {_pt(r)} mult={m}" for r, m in fan.rays)


def do_kasteleyn(g, cfg):
    kd = kasteleyn.kasteleyn_matrix(g, _weights(g, cfg), det=False)
    lines = ["kappa: " + " ".join(f"e{e}={s:+d}" for e, s in enumerate(kd.kappa))]
    for w, row in enumerate(kd.matrix):
        for b, entry in enumerate(row):
            if entry:
                lines.append(f"K[w{w}][b{b}] = {entry.render()}")
    return OK, "\n".join(lines)


def do_detcurve(g, cfg):
    return OK, kasteleyn.spectral_rendering(g, _weights(g, cfg))


def do_matchings(g, cfg):
    table = kasteleyn.matching_table(kasteleyn.enumerate_matchings(g, _weights(g, cfg)))
    return OK, "\n".join(f"class={_pt(c)} count={n} weight-sum={s}" for c, (n, s) in table.items())


def do_check(g, cfg):
    rng = kasteleyn.make_rng(cfg.seed)
    try:
        report = kasteleyn.sign_theorem_check(g)
        kasteleyn.sign_theorem_check(g, kasteleyn.random_weights(g, rng))
        zz_poly, det_poly = kasteleyn.polygon_agreement(g)
        if zz_poly != det_poly:
            raise CheckFailed(f"polygons differ: zig-zag {zz_poly} vs determinant {det_poly}")
        kasteleyn.gauge_invariance_check(g, rng)
    except CheckFailed as exc:
        return FAILED, f"FAIL: {exc}"
    return OK, report.render()


def do_squaremove(g, cfg):
    if not 0 <= cfg.face < len(g.faces()):
        raise UsageError(f"face {cfg.face} out of range 0..{len(g.faces()) - 1}")
    rep = cluster.mutation_invariance_check(g, cfg.face, weights=_weights(g, cfg))
    moved = cluster.square_move_with_maps(g, cfg.face).face_map[cfg.face]
    if not rep.ok:
        return FAILED, f"FAIL: curve changed\nbefore: {rep.before}\nafter: {rep.after}"
    tg = serialize_graph(rep.graph)
    seed = f"face={moved}\n" + rep.seed.render()
    if cfg.out is not None:
        # the graph goes to --out, the seed to stdout
        return OK, (tg, seed)
    return OK, tg + "".join(f"# {line}\n" for line in seed.splitlines())


def do_hamiltonians(g, cfg):
    return OK, cluster.hamiltonians(g, _weights(g, cfg)).render()


def _commute_one(args):
    g, seed = args
    s = cluster.random_seed(g, kasteleyn.make_rng(seed))
    return cluster.commutativity_check(g, [s])


def do_commute(g, cfg):
    # per-point seeds derived from the run seed keep --jobs output identical
    tasks = [(g, cfg.seed * 1000003 + k) for k in range(cfg.points)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            reports = list(ex.map(_commute_one, tasks))
    else:
        reports = [_commute_one(t) for t in tasks]
    hb = [b for r in reports for b in r.brackets]
    cb = [b for r in reports for b in r.casimir_brackets]
    nh = max(r.hamiltonians for r in reports)
    bad = sum(1 for b in hb + cb if b != 0)
    lines = [f"points={cfg.points} hamiltonians={nh}",
             f"brackets={len(hb)} casimir-brackets={len(cb)} nonzero={bad}",
             "OK" if bad == 0 else "FAIL"]
    return (OK if bad == 0 else FAILED), "\n".join(lines)


def do_fronts(g, cfg):
    fan = zigzag.stacky_fan(zigzag.newton_polygon(zigzag.extract_zigzags(g)))
    geos = zigzag.front_arrangement(fan, cfg.t)
    if cfg.svg:
        return OK, svg.fronts_svg(geos, cfg.width)
    return OK, "\n".join(f"ray{g_.ray} n={g_.n} normal={_pt(g_.normal)} level={g_.level} "
                         f"coorientation={_pt(g_.coorientation)}" for g_ in geos)


COMMANDS = {
    "validate": do_validate,
    "zigzags": do_zigzags,
    "consistency": do_consistency,
    "newton": do_newton,
    "fan": do_fan,
    "kasteleyn": do_kasteleyn,
    "detcurve": do_detcurve,
    "matchings": do_matchings,
    "check": do_check,
    "squaremove": do_squaremove,
    "hamiltonians": do_hamiltonians,
    "commute": do_commute,
    "fronts": do_fronts,
}


def run(cfg):
    """Execute a config; returns (exit code, stdout text, stderr text)."""
    try:
        g = load_graph(cfg.input)
    except OSError as exc:
        return USAGE, "", f"dimerlab: cannot read {cfg.input}: {exc.strerror}"
    except (TGSyntaxError, ValidationError) as exc:
        return FAILED, f"invalid: {exc}\n", ""
    try:
        code, text = COMMANDS[cfg.command](g, cfg)
    except UsageError as exc:
        return USAGE, "", f"dimerlab: {exc}"
    except DimerError as exc:
        return FAILED, f"error: {type(exc).__name__}: {exc}\n", ""
    if isinstance(text, tuple):
        main_text, extra = text
    else:
        main_text, extra = text, None
    if not main_text.endswith("\n"):
        main_text += "\n"
    if cfg.out is not None:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(main_text)
        out = "" if extra is None else extra + "\n"
    else:
        out = main_text
    return code, out, ""


def main(argv=None):
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"dimerlab: {exc}", file=sys.stderr)
        return USAGE
    code, out, err = run(cfg)
    if out:
        sys.stdout.write(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
