"""
Definite Bounds - Four-ball genus bounds from definite fillings of branched double covers
Supports: lens spaces, Seifert fibered spaces, two-bridge and Montesinos links
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from config_manager import ConfigManager, OUTPUT_FORMATS
from dinv import SeifertData, correction_table, lens_d, lens_table
from links import (GRAMMAR, DescriptorError, format_rational, genus_obstruction,
                   link_invariants, parse_descriptor, slice_check)
from obstruction import ObstructionReport, check_bound
from render import MONTESINOS_COLUMNS, SLICE_COLUMNS, TWO_BRIDGE_COLUMNS, render
from scans import (ScanRow, ScanRows, reproduce_large_example, reproduce_small_example,
                   scan_montesinos, scan_slice, scan_twobridge)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

SIGN_NOTE = ("Sign convention: S(p,q) is oriented as the boundary of its checkerboard surface "
             "and has branched double cover L(p,q); S(3,1) has signature +2.")

REPRODUCE_TARGETS = ("table1", "table2", "sec5-1", "sec5-2")


def setup_logging(config):
    """Setup logging configuration"""
    log_level = str(config.get("logging", {}).get("level", "WARNING")).upper()
    log_file = config.get("logging", {}).get("file", "")

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, log_level),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="definite-bounds",
        description="Obstruct negative definite fillings and bound the four-ball genus of links.",
        epilog=f"Link descriptors: {GRAMMAR}. {SIGN_NOTE}",
    )
    parser.add_argument("--config", help="path to settings.json")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, help="output format")
    parser.add_argument("--jobs", type=int, help="worker processes for scans")
    parser.add_argument("--taylor-bound", type=int, help="coefficient box for the Taylor search")
    parser.add_argument("--no-orbit-reduction", action="store_true",
                        help="test every class instead of one per conjugation orbit")
    verbs = parser.add_subparsers(dest="verb", required=True)

    dinv = verbs.add_parser("dinv", help="correction terms").add_subparsers(dest="target", required=True)
    lens = dinv.add_parser("lens", help="d(L(p,q), i) for i = 0..p-1")
    lens.add_argument("p", type=int)
    lens.add_argument("q", type=int)
    seifert = dinv.add_parser("seifert", help="correction terms of Y(e; pairs)")
    seifert.add_argument("e", type=int)
    seifert.add_argument("pairs", help='tangle list such as "3/1,3/1,5/2"')

    obstruct = verbs.add_parser("obstruct", help="run the definite filling check").add_subparsers(
        dest="target", required=True)
    for name in ("lens", "seifert"):
        sub = obstruct.add_parser(name)
        if name == "lens":
            sub.add_argument("p", type=int)
            sub.add_argument("q", type=int)
        else:
            sub.add_argument("e", type=int)
            sub.add_argument("pairs")
        sub.add_argument("--b", type=int, required=True, help="second Betti number of the filling")
        sub.add_argument("--reverse", action="store_true", help="use the reversed orientation")

    link = verbs.add_parser("link", help="invariants and genus bounds of one link").add_subparsers(
        dest="target", required=True)
    for name in ("info", "genus", "slice"):
        link.add_parser(name).add_argument("descriptor")

    scan = verbs.add_parser("scan", help="scan a family of links").add_subparsers(dest="target", required=True)
    twobridge = scan.add_parser("twobridge")
    twobridge.add_argument("--pmax", type=int)
    twobridge.add_argument("--pmin", type=int, default=2)
    twobridge.add_argument("--sigma-max", type=int)
    montesinos = scan.add_parser("montesinos")
    montesinos.add_argument("--emin", type=int)
    montesinos.add_argument("--emax", type=int)
    montesinos.add_argument("--alpha-max", type=int)
    montesinos.add_argument("--det-max", type=int)
    montesinos.add_argument("--sigma-max", type=int)
    slice_scan = scan.add_parser("slice")
    slice_scan.add_argument("--tmax", type=int)

    reproduce = verbs.add_parser("reproduce", help="worked examples and tables")
    reproduce.add_argument("target", choices=REPRODUCE_TARGETS,
                           help="table1: two-bridge table, table2: Montesinos table, "
                                "sec5-1: rank-2 worked example, sec5-2: rank-4 worked example")
    return parser


def _pairs(text: str):
    return parse_descriptor(f"M(0;{text})").pairs


def _report_text(report: ObstructionReport) -> str:
    if report.obstructed:
        return "obstructed\n"
    return f"not obstructed\nwitness: {report.witness.describe()}\n"


def _settings(args, config):
    search = config["search"]
    return {
        "fmt": args.format or config["output"]["format"],
        "jobs": args.jobs if args.jobs is not None else int(search["jobs"]),
        "taylor_bound": args.taylor_bound if args.taylor_bound is not None else int(search["taylor_bound"]),
        "orbit_reduction": False if args.no_orbit_reduction else bool(search["orbit_reduction"]),
        "max_order": int(search["tristram_levine_max_order"]),
    }


def _render_scan(rows: ScanRows, fmt: str, columns) -> str:
    if rows.skipped:
        link, error = rows.skipped[0]
        print(f"warning: skipped {len(rows.skipped)} links, first {link}: {error}", file=sys.stderr)
    return render(rows, fmt, columns)


def _pick(value, default):
    return default if value is None else value


def dispatch(args, config) -> str:
    """Output text for a parsed command line"""
    opts = _settings(args, config)
    scan_cfg = config["scan"]
    fmt = opts["fmt"]

    if args.verb == "dinv":
        if args.target == "lens":
            return "[" + ", ".join(format_rational(v) for v in lens_d(args.p, args.q)) + "]\n"
        table = correction_table(SeifertData.of(args.e, _pairs(args.pairs)))
        values = ", ".join(format_rational(v) for v in table.values())
        return f"H1 = {table.group}\n[{values}]\n"

    if args.verb == "obstruct":
        if args.target == "lens":
            table = lens_table(args.p, args.q)
        else:
            table = correction_table(SeifertData.of(args.e, _pairs(args.pairs)))
        if args.reverse:
            table = table.reversed()
        return _report_text(check_bound(table, args.b, opts["orbit_reduction"]))

    if args.verb == "link":
        d = parse_descriptor(args.descriptor)
        if args.target == "info":
            inv = link_invariants(d, taylor_bound=opts["taylor_bound"], max_order=opts["max_order"])
            m = str(inv.taylor) if inv.taylor is not None else None
            row = ScanRow(str(d), inv.mu, inv.sigma, str(inv.h1), m)
            if fmt == "text":
                return f"{d}  mu={inv.mu}  sigma={inv.sigma}  det={inv.h}  H1={inv.h1}  m={m or '-'}\n"
            return render([row], fmt, ("link", "mu", "sigma", "h1", "m"))
        if args.target == "genus":
            report = genus_obstruction(d, opts["orbit_reduction"])
            inv = report.invariants
            row = ScanRow(str(d), inv.mu, inv.sigma, str(inv.h1),
                          genus_gt=format_rational(report.murasugi_bound) if report.obstructed else None)
            if fmt == "text":
                return f"{d}  mu={inv.mu}  sigma={inv.sigma}  H1={inv.h1}  {report.conclusion}\n"
            return render([row], fmt, MONTESINOS_COLUMNS)
        report = slice_check(d)
        return "not slice\n" if report.obstructed else f"inconclusive\n{_report_text(report)}"

    if args.verb == "scan":
        if args.target == "twobridge":
            rows = scan_twobridge(_pick(args.pmax, scan_cfg["pmax"]), _pick(args.sigma_max, scan_cfg["sigma_max"]),
                                  opts["jobs"], opts["taylor_bound"], opts["max_order"],
                                  opts["orbit_reduction"], args.pmin)
            return _render_scan(rows, fmt, TWO_BRIDGE_COLUMNS)
        if args.target == "montesinos":
            rows = scan_montesinos(_pick(args.emin, scan_cfg["emin"]), _pick(args.emax, scan_cfg["emax"]),
                                   _pick(args.alpha_max, scan_cfg["alpha_max"]),
                                   _pick(args.det_max, scan_cfg["det_max"]),
                                   _pick(args.sigma_max, scan_cfg["sigma_max"]),
                                   opts["jobs"], opts["orbit_reduction"])
            return _render_scan(rows, fmt, MONTESINOS_COLUMNS)
        rows = scan_slice(_pick(args.tmax, scan_cfg["slice_tmax"]), opts["jobs"])
        return _render_scan(rows, fmt, SLICE_COLUMNS)

    if args.target == "table1":
        rows = scan_twobridge(120, 4, opts["jobs"], opts["taylor_bound"], opts["max_order"], opts["orbit_reduction"])
        return _render_scan(rows, fmt, TWO_BRIDGE_COLUMNS)
    if args.target == "table2":
        rows = scan_montesinos(-2, 1, 5, 150, 4, opts["jobs"], opts["orbit_reduction"])
        return _render_scan(rows, fmt, MONTESINOS_COLUMNS)
    if args.target == "sec5-1":
        return reproduce_small_example(opts["orbit_reduction"], opts["taylor_bound"])
    return reproduce_large_example(opts["orbit_reduction"])


def run(argv: List[str], out: Optional[TextIO] = None) -> int:
    """Parse argv, compute and write the result; returns the exit code"""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        config = ConfigManager(args.config).load_config()
        setup_logging(config)
        out.write(dispatch(args, config))
    except DescriptorError as e:
        logger.error(str(e))
        print(f"error: {str(e)}", file=sys.stderr)
        print(f"expected {e.hint}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error(f"Fatal error: {str(e)}", exc_info=True)
        return 1

    return 0


def main():
    """Main entry point"""
    return run(sys.argv[1:])


if __name__ == "__main__":
    exit(main())
