"""Command line front end: ``ckgeom <eval|sample|plot|verify> [flags]``.

Exit codes: 0 ok, 1 verification failure, 2 usage or domain error, 3 I/O.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import compact as cp
from . import conformal as cf
from . import cycles as cy
from . import render, samples, trig, verify
from .errors import CKGeomError
from .space import SPACE_NAMES, Chart, canonical_name, ChartPoint, KappaPair, metric_at, the_nine, to_weierstrass

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
FORMATS = ("json", "csv", "svg")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    kp: KappaPair | None
    ell: float = 1.0
    chart: str = "parallel1"
    output: str | None = None
    out: str | None = None
    seed: int = 7
    tol: float | None = None

    def require_space(self) -> KappaPair:
        if self.kp is None:
            raise UsageError("this command needs --space or --k1/--k2")
        return self.kp


def resolve_space(name: str | None, k1: float | None, k2: float | None) -> KappaPair | None:
    if name is not None and (k1 is not None or k2 is not None):
        raise UsageError("give either --space or --k1/--k2, not both")
    if name is not None:
        try:
            return the_nine(name)
        except KeyError:
            raise UsageError(f"unknown space {name!r}; choose from {', '.join(SPACE_NAMES)}") from None
    if k1 is None and k2 is None:
        return None
    if k1 is None or k2 is None:
        raise UsageError("--k1 and --k2 go together")
    return KappaPair(k1, k2)


def config_from(args) -> RunConfig:
    space = getattr(args, "space", None)
    if args.command == "verify":
        space = None  # verify takes a list of named spaces instead
    kp = resolve_space(space, args.k1, args.k2)
    if args.ell == 0 or not math.isfinite(args.ell):
        raise UsageError("--ell must be finite and non-zero")
    Chart.parse(args.chart)
    output = args.format
    if output is None and args.out not in (None, "-"):
        suffix = Path(args.out).suffix.lower().lstrip(".")
        output = suffix if suffix in FORMATS else None
    return RunConfig(kp, args.ell, Chart.parse(args.chart).value, output, args.out, args.seed, args.tol)


# ------------------------------------------------------------------- eval

def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    return "%.17g" % float(value)


def _pair(text: str | None, flag: str) -> tuple[float, float]:
    if text is None:
        raise UsageError(f"{flag} is required")
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{flag} takes two comma-separated numbers")
    return float(parts[0]), float(parts[1])


def _point(args, cfg: RunConfig, flag: str = "--p") -> ChartPoint:
    return ChartPoint(cfg.chart, *_pair(getattr(args, flag.lstrip("-")), flag))


def _cycle_from_flags(args, cfg: RunConfig) -> cy.Cycle:
    kp = cfg.require_space()
    given = [f for f in ("circle_rho", "geodesic", "equidistant", "coefficients") if getattr(args, f) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --circle-rho, --geodesic, --equidistant, --coefficients")
    if args.circle_rho is not None:
        center = ChartPoint(cfg.chart, *_pair(args.center, "--center")) if args.center else ChartPoint(cfg.chart, 0.0, 0.0)
        return cy.circle(kp, center, args.circle_rho)
    if args.geodesic is not None:
        return cy.geodesic_from_betas(kp, *_pair(args.geodesic, "--geodesic"))
    if args.equidistant is not None:
        parts = [float(v) for v in args.equidistant.split(",")]
        if len(parts) != 3:
            raise UsageError("--equidistant takes beta0,beta1,d")
        return cy.equidistant(kp, *parts, timelike_base=args.timelike_base)[0]
    parts = [float(v) for v in args.coefficients.split(",")]
    if len(parts) != 4:
        raise UsageError("--coefficients takes c_xi,alpha1,alpha2,c0")
    return cy.Cycle(*parts)


def _trig_op(fn):
    def op(args, cfg):
        if args.kappa is None or args.x is None:
            raise UsageError("trig operations need --kappa and --x")
        return [fn(args.kappa, args.x)]
    return op


def _embed1d(args, cfg):
    if args.a is None:
        raise UsageError("embed1d needs --a")
    if args.k1l2 is not None:
        k1 = args.k1l2 / (cfg.ell * cfg.ell)
    elif cfg.kp is not None:
        k1 = cfg.kp.k1
    else:
        raise UsageError("embed1d needs --k1l2 or a space")
    tsp, ts1, _ = cp.embed_1d(k1, cfg.ell, args.a)
    return [tsp, ts1]


def _embed2d(args, cfg):
    s, q = cp.embed_2d(cfg.require_space(), cfg.ell, _point(args, cfg))
    return [q.ts_plus, q.ts1, q.ts2, q.at_infinity]


def _metric(args, cfg):
    g = metric_at(cfg.require_space(), _point(args, cfg))
    return [g.g11, g.g12, g.g22]


def _weierstrass(args, cfg):
    return list(to_weierstrass(cfg.require_space(), _point(args, cfg)).as_array())


def _distance(args, cfg):
    return [cy.distance(cfg.require_space(), _point(args, cfg), _point(args, cfg, "--q"))]


def _conformal_factor(args, cfg):
    if args.generator is None:
        raise UsageError("conformal.factor needs --generator")
    return [cf.conformal_factor(cfg.require_space(), args.generator, cfg.chart, _point(args, cfg))]


def _lambda_extended(args, cfg):
    if args.kappa is None or args.x is None:
        raise UsageError("lambda.extended needs --kappa and --x")
    value, branch = trig.lambda_extended(args.kappa, args.x)
    return [value, branch]


EVAL_OPS = {
    "trig.ck": _trig_op(trig.ck), "trig.sk": _trig_op(trig.sk),
    "trig.vk": _trig_op(trig.vk), "trig.tk": _trig_op(trig.tk),
    "trig.arc_ck": _trig_op(trig.arc_ck), "trig.arc_sk": _trig_op(trig.arc_sk),
    "trig.arc_vk": _trig_op(trig.arc_vk), "trig.arc_tk": _trig_op(trig.arc_tk),
    "trig.lambda": _trig_op(trig.lambda_fn), "trig.d_lambda": _trig_op(trig.d_lambda),
    "lambda.extended": _lambda_extended,
    "cycles.kg": lambda a, c: [cy.geodesic_curvature(_cycle_from_flags(a, c), c.kp)],
    "cycles.kg2": lambda a, c: [cy.geodesic_curvature_squared(_cycle_from_flags(a, c), c.kp)],
    "cycles.kind": lambda a, c: [cy.classify(_cycle_from_flags(a, c), c.kp).value],
    "cycles.power": lambda a, c: [cy.power_of_origin(_cycle_from_flags(a, c), c.kp)],
    "cycles.coefficients": lambda a, c: list(_cycle_from_flags(a, c).as_array()),
    "distance": _distance,
    "metric": _metric,
    "weierstrass": _weierstrass,
    "embed1d": _embed1d,
    "embed2d": _embed2d,
    "conformal.factor": _conformal_factor,
}


def cmd_eval(args, cfg: RunConfig) -> int:
    if args.op not in EVAL_OPS:
        raise UsageError(f"unknown operation {args.op!r}; choose from {', '.join(sorted(EVAL_OPS))}")
    values = EVAL_OPS[args.op](args, cfg)
    _emit(" ".join(fmt(v) for v in values) + "\n", cfg.out)
    return EXIT_OK


# ----------------------------------------------------------------- sample

SAMPLE_KINDS = ("geodesic", "embedding", "embed1d", "dilation-orbit", "census")


def cmd_sample(args, cfg: RunConfig) -> int:
    kind = args.kind
    if kind == "geodesic":
        table = samples.sample_geodesic(cfg.require_space(), args.n or 200, args.offset, args.angle,
                                        args.span or 1.0, cfg.chart)
    elif kind == "embedding":
        table = samples.sample_embedding(cfg.require_space(), cfg.ell, args.grid or 21, args.span or 1.0, cfg.chart)
    elif kind == "embed1d":
        k1 = args.k1l2 / (cfg.ell * cfg.ell) if args.k1l2 is not None else cfg.require_space().k1
        table = samples.sample_embed1d(k1, cfg.ell, args.n or 101, args.span)
    elif kind == "dilation-orbit":
        center = _pair(args.center, "--center") if args.center else (0.1, 0.2)
        table = samples.sample_dilation_orbit(cfg.require_space(), args.n or 50, args.circle_rho or 0.5,
                                              center, args.span or 1.0)
    else:
        table = samples.sample_census(cfg.require_space(), cfg.ell, args.grid or 200)
    output = cfg.output or "json"
    if output == "svg":
        raise UsageError("sample writes json or csv; use plot for svg")
    text = samples.dumps_json(table) if output == "json" else samples.dumps_csv(table)
    _emit(text, cfg.out)
    return EXIT_OK


# ------------------------------------------------------------------- plot

PLOT_KINDS = ("embed1d", "cycles", "census", "file")


def cmd_plot(args, cfg: RunConfig) -> int:
    if cfg.output not in (None, "svg"):
        raise UsageError("plot writes svg only")
    kind = args.kind
    if kind == "embed1d":
        values = (1.0, 0.0, -1.0) if args.k1l2 is None else (args.k1l2,)
        text = render.embed1d_figure(values, cfg.ell)
    elif kind == "cycles":
        text = render.cycle_gallery(cfg.require_space())
    elif kind == "census":
        text = render.census_heatmap(cfg.require_space(), cfg.ell, args.grid or 200)
    else:
        if args.input is None:
            raise UsageError("plot file needs --input")
        table = samples.read_table(args.input)
        xcol, ycol = (args.columns.split(",") + [None])[:2] if args.columns else (None, None)
        text = render.table_plot(table, xcol, ycol)
    _emit(text, cfg.out)
    return EXIT_OK


# ----------------------------------------------------------------- verify

def cmd_verify(args, cfg: RunConfig) -> int:
    suite = verify.SUITE_ALIASES.get(args.suite, args.suite)
    if suite != "all" and suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(verify.SUITES)}")
    spaces = None
    if args.space:
        try:
            spaces = [canonical_name(name.strip()) for name in args.space.split(",")]
        except KeyError as exc:
            raise UsageError(f"unknown space {exc.args[0]!r}; choose from {', '.join(SPACE_NAMES)}") from None
    checks = verify.run(suite, cfg.seed, spaces)
    if cfg.tol is not None:
        # an override applies to residual checks, not to exact counts
        checks = [dataclasses.replace(c, tol=cfg.tol) if c.tol > 0 else c for c in checks]
    report = verify.format_report(checks)
    _emit(report, cfg.out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


# ----------------------------------------------------------------- parser

def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help=f"space name or alias ({', '.join(SPACE_NAMES)}); verify takes a comma list")
    common.add_argument("--k1", type=float, help="curvature label (with --k2, instead of --space)")
    common.add_argument("--k2", type=float, help="signature label")
    common.add_argument("--ell", type=float, default=1.0, help="length scale of the conformal embedding")
    common.add_argument("--chart", default="parallel1", help="parallel1, parallel2 or polar")
    common.add_argument("--out", help="output file; '-' or absent for stdout")
    common.add_argument("--format", choices=FORMATS, help="output format (default from --out suffix)")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--tol", type=float, help="override the tolerance of residual checks")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ckgeom", description="Cayley-Klein plane numerics")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    ev = sub.add_parser("eval", parents=[common], help="evaluate one operation")
    ev.add_argument("op", help="operation: " + ", ".join(sorted(EVAL_OPS)))
    ev.add_argument("--kappa", type=float)
    ev.add_argument("--x", type=float)
    ev.add_argument("--k1l2", type=float, help="k1 ell^2 for embed1d")
    ev.add_argument("--a", type=float, help="line coordinate for embed1d")
    ev.add_argument("--p", help="chart point u1,u2 (use --p=-1,2 for a leading minus)")
    ev.add_argument("--q", help="second chart point for distance")
    ev.add_argument("--generator", help="conformal generator name")
    _cycle_flags(ev)

    sm = sub.add_parser("sample", parents=[common], help="write a sample table (json or csv)")
    sm.add_argument("kind", choices=SAMPLE_KINDS)
    sm.add_argument("--n", type=int)
    sm.add_argument("--grid", type=int)
    sm.add_argument("--span", type=float)
    sm.add_argument("--offset", type=float, default=0.3, help="geodesic: P2 offset of the line")
    sm.add_argument("--angle", type=float, default=0.4, help="geodesic: J12 rotation of the line")
    sm.add_argument("--k1l2", type=float)
    sm.add_argument("--circle-rho", type=float)
    sm.add_argument("--center")

    pl = sub.add_parser("plot", parents=[common], help="write an SVG figure")
    pl.add_argument("kind", choices=PLOT_KINDS)
    pl.add_argument("--input", help="sample file for 'plot file'")
    pl.add_argument("--columns", help="x,y columns for 'plot file'")
    pl.add_argument("--grid", type=int)
    pl.add_argument("--k1l2", type=float)

    vf = sub.add_parser("verify", parents=[common], help="run verification suites")
    vf.add_argument("suite", help="all, " + ", ".join(verify.SUITES) + " or cone")
    return parser


def _cycle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--circle-rho", type=float, help="circle of this radius (about --center, default origin)")
    p.add_argument("--center")
    p.add_argument("--geodesic", help="beta0,beta1")
    p.add_argument("--equidistant", help="beta0,beta1,d")
    p.add_argument("--timelike-base", action="store_true")
    p.add_argument("--coefficients", help="c_xi,alpha1,alpha2,c0")


COMMANDS = {"eval": cmd_eval, "sample": cmd_sample, "plot": cmd_plot, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from(args)
        return COMMANDS[args.command](args, cfg)
    except samples.MalformedSampleError as exc:
        print(f"ckgeom: malformed sample file: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"ckgeom: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, CKGeomError, ValueError, KeyError, ArithmeticError) as exc:
        print(f"ckgeom: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
