"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import checks, group, spherical
from .config import Tolerances
from .errors import EmbeddingViolated, SimplexFlowsError
from .geometry import (
    Configuration,
    Hyperplane,
    Simplex,
    classify,
    embedding_margin,
    greatest_solid_angle,
)
from .regularize import (
    OmegaPath,
    basis_of,
    inradius_flow,
    phi,
    regularize_bimedian,
    vertices_of,
)
from .retract_k import plan_psi, psi_trajectory, pyramid_k_decomposition
from .retract_l import lambda_trajectory, pyramid_l_decomposition
from .samples import random_k_config, random_l_config, rng_from
from .trajectory import Trajectory, uniform_times

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _samples(text):
    k = int(text)
    if k < 2:
        raise argparse.ArgumentTypeError("sample count must be at least 2")
    return k


def _positive(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return x


def _fmt(x):
    return f"{x:.12g}"


def _tolerances(args):
    base = Tolerances()
    return Tolerances(rank=args.tol_rank or base.rank, geom=args.tol_geom or base.geom,
                      flow=base.flow)


def _load(args):
    if not args.input:
        raise UsageError("--in is required")
    try:
        return Configuration.load(args.input)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read configuration {args.input!r}: {exc}") from exc


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _emit(traj, args, out):
    with _output(args.out) as fh:
        traj.write_jsonl(fh)
    if getattr(args, "obj_dir", None):
        paths = traj.write_obj_frames(args.obj_dir)
        print(f"wrote {len(paths)} OBJ frames to {args.obj_dir}", file=out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args, out):
    tol = _tolerances(args)
    cfg = _load(args)
    cls = classify(cfg, tol)
    name = type(cls).__name__
    fields = {k: v for k, v in vars(cls).items() if k != "margin"}
    desc = ", ".join(f"{k}={v}" for k, v in fields.items())
    print(f"class: {name}({desc})", file=out)
    print(f"margin: {_fmt(embedding_margin(cfg, tol))}", file=out)
    if cfg.kind == "K":
        v = spherical.half_sphere_volume(cfg.n)
        if isinstance(cls, Hyperplane):
            print(f"alpha: V = {_fmt(v)} at vertex {cls.interior}", file=out)
        else:
            alpha, vertex = greatest_solid_angle(Simplex(cfg.points, tol), tol)
            print(f"alpha: {_fmt(alpha)} = {_fmt(alpha / v)} V at vertex {vertex}", file=out)
    return EXIT_OK


def cmd_regularize(args, out):
    tol = _tolerances(args)
    cfg = _load(args)
    if cfg.kind != "K":
        raise UsageError("regularize expects a kind-K configuration (a simplex)")
    pts = np.asarray(cfg.points)
    if args.method == "flow":
        res = inradius_flow(Simplex(pts, tol), step=args.step, max_iters=args.max_iters,
                            tol=tol)
        frames = res.frames
        traj = Trajectory("K", uniform_times(max(len(frames), 2)),
                          frames if len(frames) > 1 else frames * 2)
        print(f"converged in {res.iterations} steps, residual {res.residual:.3e}, "
              f"potential {_fmt(res.potentials[0])} -> {_fmt(res.potentials[-1])}",
              file=sys.stderr if args.out in (None, "-") else out)
    else:
        times = uniform_times(args.samples)
        if args.method == "omega":
            path = OmegaPath(pts)
            frames = [path.at(float(t)) for t in times]
        elif args.method == "phi":
            x = basis_of(pts)
            g = pts.mean(axis=0)
            frames = [vertices_of(phi(x, float(t)), g) for t in times]
        else:
            frames = [regularize_bimedian(pts, float(t)) for t in times]
        traj = Trajectory("K", times, frames)
    _emit(traj, args, out)
    return EXIT_OK


def _report_membership(decomp, out):
    if decomp is None:
        print("endpoint: not a pyramid", file=out)
        return EXIT_VERIFY
    print(f"endpoint: pyramid, apex {decomp.apex}, height {_fmt(decomp.height)} "
          f"(edge units)", file=out)
    return EXIT_OK


def _status_stream(args, out):
    return sys.stderr if args.out in (None, "-") else out


def cmd_retract_k(args, out):
    tol = _tolerances(args)
    cfg = _load(args)
    if cfg.kind != "K":
        raise UsageError("retract-k expects a kind-K configuration")
    status = _status_stream(args, out)
    plan = plan_psi(cfg, tol, literal_scale=args.literal_scale)
    print(f"branch: {plan.branch}, eta = {_fmt(plan.eta)}", file=status)
    try:
        traj = psi_trajectory(cfg, args.samples, tol, literal_scale=args.literal_scale)
    except EmbeddingViolated as exc:
        print(f"embedding violated at t = {_fmt(exc.t)}", file=status)
        return EXIT_VERIFY
    _emit(traj, args, status)
    return _report_membership(pyramid_k_decomposition(traj.final, 1e-6), status)


def cmd_retract_l(args, out):
    tol = _tolerances(args)
    cfg = _load(args)
    if cfg.kind != "L":
        raise UsageError("retract-l expects a kind-L configuration")
    status = _status_stream(args, out)
    try:
        traj = lambda_trajectory(cfg, args.samples, tol, literal_scale=args.literal_scale,
                                 stage=args.stage)
    except EmbeddingViolated as exc:
        print(f"embedding violated at t = {_fmt(exc.t)}", file=status)
        return EXIT_VERIFY
    _emit(traj, args, status)
    if args.stage != "all":
        return EXIT_OK
    decomp = pyramid_l_decomposition(traj.final, 1e-6)
    if decomp is None:
        print("endpoint: not a doubled pyramid", file=status)
        return EXIT_VERIFY
    print(f"endpoint: doubled pyramid, extra point {decomp.apex} over face {decomp.face}, "
          f"height {_fmt(decomp.height)} (edge units)", file=status)
    return EXIT_OK


def cmd_group(args, out):
    if args.action == "verify":
        results = group.verify_all()
        for c in results:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {c.family:<14} {c.label}", file=out)
        failed = sum(not c.passed for c in results)
        print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
        return EXIT_VERIFY if failed else EXIT_OK
    if args.word is None or args.on is None:
        raise UsageError("group act needs --word and --on")
    try:
        word = group.parse_group_word(args.word)
        target = group.parse_free_word(args.on)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(group.act_word(word, target), file=out)
    return EXIT_OK


def cmd_selfcheck(args, out):
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError as exc:
            raise UsageError("--only takes a comma-separated list of criterion numbers") from exc
    results = checks.run_all(seed=args.seed, only=only)
    for r in results:
        print(r.line() if args.timings else r.line().rsplit(" (", 1)[0], file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed", file=out)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_sample(args, out):
    rng = rng_from(args.seed)
    if args.kind == "K":
        cfg = random_k_config(rng, args.n, flat_fraction=0.0)
    else:
        cfg = random_l_config(rng, args.n, args.cls)
    with _output(args.out) as fh:
        json.dump(cfg.to_json(), fh)
        fh.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="configuration JSON")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-geom", type=_positive, default=None)
    common.add_argument("--tol-rank", type=_positive, default=None)

    parser = _Parser(prog="simplexflows", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="degeneracy class and greatest solid angle")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("regularize", parents=[common], help="regularize a simplex")
    p.add_argument("--method", choices=["phi", "omega", "bimedian", "flow"], default="omega")
    p.add_argument("--samples", type=_samples, default=16)
    p.add_argument("--step", type=_positive, default=1e-2)
    p.add_argument("--max-iters", type=int, default=20000)
    p.add_argument("--obj-dir", metavar="DIR", help="also write one OBJ file per sample (n = 3)")
    p.set_defaults(func=cmd_regularize)

    for name, default, func, helptext in (
            ("retract-k", 64, cmd_retract_k, "retract a simplex configuration onto pyramids"),
            ("retract-l", 96, cmd_retract_l, "retract an n + 2 point configuration")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--samples", type=_samples, default=default)
        p.add_argument("--literal-scale", action="store_true",
                       help="use the height scale (1 - eta) t instead of 1 - eta t")
        p.add_argument("--obj-dir", metavar="DIR", help="also write one OBJ file per sample (n = 3)")
        if name == "retract-l":
            p.add_argument("--stage", choices=["1", "2", "3", "all"], default="all")
        p.set_defaults(func=func)

    p = sub.add_parser("group", help="fundamental group checks and the free-group action")
    p.add_argument("action", choices=["verify", "act"])
    p.add_argument("--word", help='group word, e.g. "y1 y2^-1"')
    p.add_argument("--on", help='free word, e.g. "a2"')
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("selfcheck", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--timings", action="store_true", help="print wall-clock time per criterion")
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("sample", parents=[common], help="write a random configuration")
    p.add_argument("--kind", choices=["K", "L"], default="K")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--class", dest="cls", choices=["I", "E", "B"], default="I")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"simplexflows: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"simplexflows: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SimplexFlowsError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"simplexflows: numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
