"""Command-line interface: ``pisotile <subcommand> --poly A B ...``.

Exit codes: 0 success, 2 usage error, 3 mathematical precondition failure
(reported on stderr as ``ERR <code>: <detail>``).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction

from . import kernels
from .errors import NotDividingNorm, PisotileError
from .gamma import DEFAULT_TOL, Enclosure, gamma, gamma_scan
from .graphs import adm_graph, boundary_graph, start_nodes, to_dot, to_json
from .numeration import (density_report, expand, is_purely_periodic, quadratic_pisot_criterion,
                         satisfies_F, t_orbit_of_one)
from .qfield import pisot_new
from .tiles import hensel_root, stripe_diagnostic, tile_points, write_csv

_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _digits(ds) -> str:
    return "[" + ",".join(map(str, ds)) + "]"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_fraction(text: str) -> Fraction:
    v = _fraction(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pisotile",
                                 description="beta-numeration for quadratic Pisot numbers")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--poly", nargs=2, type=int, metavar=("A", "B"), required=True,
                       help="beta^2 = A*beta + B")
        return p

    cmd("info", "Parry data, arithmetic conditions and orbit of 1")
    p = cmd("expand", "beta-expansion of a non-negative rational")
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--max", type=int, default=10**6, help="iteration cap")
    p = cmd("periodic", "pure periodicity of x in [0,1)")
    p.add_argument("--x", type=_fraction, required=True)
    for name in ("adm-graph", "boundary-graph"):
        p = cmd(name, f"{name.replace('-', ' ')} (DOT/JSON export)")
        p.add_argument("--dot")
        p.add_argument("--json")
    p = cmd("gamma", "the threshold gamma(beta)")
    p.add_argument("--tol", type=_positive_fraction, default=DEFAULT_TOL)
    p.add_argument("--no-scan", action="store_true")
    p.add_argument("--scan-qmax", type=int, default=60)
    p = cmd("scan", "brute-force pure periodicity scan")
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--upper", type=_positive_fraction, required=True)
    p.add_argument("--threads", type=int, default=1)
    p = cmd("tile", "tile points as CSV")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--padic-prec", type=int, default=4)
    p.add_argument("--prime", type=int)
    p.add_argument("--x-shift", type=_fraction)
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--stripe", type=float, metavar="W",
                   help="print the residue coverage of points with |real| < W instead")
    return ap


def _split_prime(ctx) -> int:
    for p, _, _, split in density_report(ctx).per_prime:
        if split:
            return p
    raise NotDividingNorm("no split prime divides N(beta); the tile has no p-adic part")


def _cmd_info(ctx, args, out):
    parry = ctx.parry
    out(f"beta^2 = {ctx.a}*beta + {ctx.b}: beta = {ctx.beta.surd_str()} ≈ {float(ctx.beta):.12g}")
    out(f"beta2 = {ctx.beta2.surd_str()} ≈ {float(ctx.beta2):.12g}")
    out(f"N(beta) = {ctx.norm_beta}  unit = {'yes' if ctx.is_unit else 'no'}")
    out(f"Q(beta) = Q(sqrt({ctx.d}))  disc = {ctx.disc}")
    tail = f" ({_digits(parry.d_one_period)})^inf" if parry.d_one_period else ""
    out(f"d_beta(1) = {_digits(parry.d_one)}{tail}")
    m, per = parry.d_star
    out(f"d*_beta(1) = {_digits(parry.t[:m])} ({_digits(per)})^inf  m = {m}  n = {parry.n}")
    out(f"property (F): {'yes' if satisfies_F(ctx) else 'no'}"
        f"  (Pisot coefficient test: {'yes' if quadratic_pisot_criterion(ctx) else 'no'})")
    rep = density_report(ctx)
    out(f"density: b square-free={rep.b_squarefree} coprime to disc={rep.b_coprime_disc}"
        f" QR={rep.qr_all_odd_primes} mod8={rep.mod8_ok} overall={rep.overall}")
    for p, e, f, split in rep.per_prime:
        kind = "split" if split else ("ramified" if e > 1 else "inert")
        out(f"  prime {p}: e={e} f={f} {kind}")
    values, order = t_orbit_of_one(ctx)
    for k, v in enumerate(values):
        out(f"T^{k}(1) = {v.coords()} ≈ {float(v):.12g}")
    out("ascending nodes: " + " < ".join(map(str, order)))


def _cmd_expand(ctx, args, out):
    e = expand(args.x, ctx, cap=args.max)
    out(f"integer part: {_digits(e.integer_part)}")
    out(f"preperiod: {_digits(e.preperiod)}")
    out(f"period: {_digits(e.period)}")


def _cmd_periodic(ctx, args, out):
    ok, per = is_purely_periodic(args.x, ctx)
    out(f"purely periodic: yes (period {per})" if ok else "purely periodic: no")


def _export(g, args, out):
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(g))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(to_json(g) + "\n")


def _cmd_adm(ctx, args, out):
    g = adm_graph(ctx)
    out(f"nodes: {g.n}  edges: {len(g.edges)}")
    for f, lab, t in g.edges:
        out(f"  {f} -{lab}-> {t}")
    _export(g, args, out)


def _cmd_boundary(ctx, args, out):
    g = boundary_graph(ctx)
    starts = start_nodes(g, ctx)
    out(f"nodes: {len(g.nodes)}  edges: {len(g.edges)}")
    for nd in g.nodes:
        out(f"  {nd}")
    out(f"start nodes: {len(starts)}  reachable: {len(g.reachable(starts).nodes)}")
    for nd in starts:
        out(f"  {nd}")
    _export(g, args, out)


def _cmd_gamma(ctx, args, out):
    res = gamma(ctx, tol=args.tol, scan=not args.no_scan, scan_qmax=args.scan_qmax)
    v = res.value
    if isinstance(v, Enclosure):
        out(f"gamma in {v}")
    elif v.is_rational():
        out(f"gamma = {v.surd_str()}")
    else:
        out(f"gamma = {v.surd_str()} ≈ {float(v):.6f}")
    if not isinstance(v, Enclosure):
        out(f"coordinates: {v.coords()}")
        out(f"decimal: {float(v):.15g}")
    out(f"situation: {res.situation}")
    if res.witness is not None:
        out(f"witness: {res.witness}")
    out(f"mode: {res.mode}")
    if res.cross_check is not None:
        lo, first = res.cross_check
        out(f"scan: all tested rationals <= {lo} purely periodic; "
            f"first failure {first if first is not None else 'none'}")


def _cmd_scan(ctx, args, out):
    lo, first = gamma_scan(ctx, args.qmax, args.upper, threads=args.threads)
    out(f"lower bracket: {lo} ≈ {float(lo):.12g}")
    out(f"first failure: {first} ≈ {float(first):.12g}" if first is not None else
        "first failure: none")


def _cmd_tile(ctx, args, out):
    if args.depth < 0 or args.padic_prec < 1:
        raise _Usage("--depth must be >= 0 and --padic-prec >= 1")
    p = args.prime if args.prime is not None else _split_prime(ctx)
    pc = hensel_root(ctx, p, args.padic_prec)
    if args.stripe is not None:
        rep = stripe_diagnostic(ctx, pc, args.depth, args.stripe)
        out(f"points: {rep.total}  modulus: {rep.modulus}")
        out(f"residues hit with |real| < {args.stripe}: {rep.modulus - len(rep.missing)}")
        out("missing: " + (",".join(map(str, rep.missing)) or "none"))
        return
    pts = tile_points(ctx, pc, args.depth, args.x_shift, threads=args.threads)
    rows = write_csv(pts, args.out if args.out else sys.stdout)
    if args.out:
        out(f"wrote {rows} rows to {args.out}")


class _Usage(Exception):
    pass


_COMMANDS = {
    "info": _cmd_info, "expand": _cmd_expand, "periodic": _cmd_periodic,
    "adm-graph": _cmd_adm, "boundary-graph": _cmd_boundary, "gamma": _cmd_gamma,
    "scan": _cmd_scan, "tile": _cmd_tile,
}


def main(argv=None) -> int:
    level = _LEVELS.get(os.environ.get("PISOTILE_LOG", "").lower(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(name)s: %(message)s")
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.getLogger("pisotile").info("kernel backend: %s", kernels.BACKEND)

    def out(line):
        print(line, flush=True)

    try:
        ctx = pisot_new(*args.poly)
        _COMMANDS[args.cmd](ctx, args, out)
    except PisotileError as exc:
        print(f"ERR {exc.code}: {exc}", file=sys.stderr)
        return 3
    except _Usage as exc:
        print(f"pisotile: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the final flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
