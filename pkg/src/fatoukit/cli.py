"""Command-line surface.

Subcommands: classify (rasters + JSON), report (full analysis JSON),
algebra (law report for two families), verify (built-in oracle suite).

Exit codes: 0 success; 1 verify failures; 2 parse/config errors; 3 I/O
errors.  Algebra findings (laws a family pair genuinely breaks) are results,
not errors.  Tunables resolve flags > FATOUKIT_* environment > defaults.
"""

from __future__ import annotations

import argparse
import sys

from .config import env_overrides, make_escape_params, make_normality_params
from .escape import check_algebra_laws
from .parser import ParseError, parse_family
from .window import DiskMask, Window

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3


class ConfigError(ValueError):
    pass


def _parse_window(text: str, grid: str, disk: str | None) -> Window:
    try:
        parts = [float(v) for v in text.split(",")]
        if len(parts) != 4:
            raise ValueError
    except ValueError:
        raise ConfigError(f"bad --window {text!r} (want re0,re1,im0,im1)")
    try:
        w_str, h_str = grid.lower().split("x")
        width, height = int(w_str), int(h_str)
    except ValueError:
        raise ConfigError(f"bad --grid {grid!r} (want WxH)")
    mask = None
    if disk:
        try:
            cx, cy, r = (float(v) for v in disk.split(","))
        except ValueError:
            raise ConfigError(f"bad --disk {disk!r} (want cx,cy,r)")
        mask = DiskMask(complex(cx, cy), r)
    try:
        return Window(parts[0], parts[1], parts[2], parts[3],
                      width, height, disk=mask)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _add_common(p: argparse.ArgumentParser, family2: bool = False):
    p.add_argument("--family", required=True, help="family description")
    if family2:
        p.add_argument("--family2", required=True,
                       help="second family description")
    p.add_argument("--window", default="-2,2,-2,2",
                   metavar="re0,re1,im0,im1")
    p.add_argument("--grid", default="256x256", metavar="WxH")
    p.add_argument("--disk", default=None, metavar="cx,cy,r",
                   help="restrict the domain to a disk inside the window")
    p.add_argument("--nmax", type=int, default=None,
                   help="members per infinite part (default 256)")
    p.add_argument("--escape-radius", type=float, default=None)
    p.add_argument("--marty-threshold", type=float, default=None)
    p.add_argument("--tail-window", type=int, default=None)
    p.add_argument("--out", default="fatoukit_out",
                   help="output path prefix")
    p.add_argument("--emit", default="pgm,json",
                   help="comma list of outputs: pgm,json")
    p.add_argument("--threads", type=int, default=None,
                   help="cap worker threads (numba backend)")


def _apply_threads(threads):
    if threads is None:
        threads = env_overrides().get("threads")
    if threads is None:
        return
    from . import backends as bk
    if bk.active_backend() == "numba":
        import numba
        numba.set_num_threads(max(1, threads))


def _params_from_args(args):
    nparams = make_normality_params(
        n_max=args.nmax, window_len=args.tail_window,
        marty_threshold=args.marty_threshold)
    eparams = make_escape_params(
        n_max=args.nmax, escape_radius=args.escape_radius,
        tail_window=args.tail_window)
    return nparams, eparams


def _cmd_classify(args) -> int:
    from .pipeline import build_report, classify, dumps_report
    from .raster import bool_to_bytes, labels_to_bytes, write_pgm

    spec = parse_family(args.family)
    w = _parse_window(args.window, args.grid, args.disk)
    nparams, eparams = _params_from_args(args)
    _apply_threads(args.threads)
    cls = classify(spec, w, nparams, eparams)
    emit = {e.strip() for e in args.emit.split(",") if e.strip()}
    try:
        if "pgm" in emit:
            write_pgm(f"{args.out}.fj.pgm", labels_to_bytes(cls.labels))
            write_pgm(f"{args.out}.i.pgm", bool_to_bytes(cls.in_i))
            write_pgm(f"{args.out}.u.pgm", bool_to_bytes(cls.in_u))
        if "json" in emit:
            report = build_report(spec, w, nparams, eparams, cls)
            with open(f"{args.out}.json", "w") as fh:
                fh.write(dumps_report(report))
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    counts = cls.counts()
    print(f"julia={counts['julia']} undecided={counts['undecided']} "
          f"fatou={counts['fatou']} masked={counts['masked']} "
          f"I={int(cls.in_i.sum())} U={int(cls.in_u.sum())}")
    return EXIT_OK


def _cmd_report(args) -> int:
    from .pipeline import analyze, dumps_report

    spec = parse_family(args.family)
    w = _parse_window(args.window, args.grid, args.disk)
    nparams, eparams = _params_from_args(args)
    _apply_threads(args.threads)
    _, report = analyze(spec, w, nparams, eparams)
    try:
        with open(f"{args.out}.json", "w") as fh:
            fh.write(dumps_report(report))
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.out}.json")
    return EXIT_OK


def _cmd_algebra(args) -> int:
    from .pipeline import dumps_report

    spec_a = parse_family(args.family)
    spec_b = parse_family(args.family2)
    w = _parse_window(args.window, args.grid, args.disk)
    nparams, eparams = _params_from_args(args)
    _apply_threads(args.threads)
    report = check_algebra_laws(spec_a, spec_b, w, eparams, nparams=nparams)
    doc = {"schema_version": "1", "family": args.family,
           "family2": args.family2, "laws": report.to_dict()["laws"]}
    try:
        with open(f"{args.out}.json", "w") as fh:
            fh.write(dumps_report(doc))
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    for law in report.laws:
        print(f"{law.name}: {law.status} (violations={law.violations}, "
              f"strict_extra={law.strict_extra})")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_verify

    _apply_threads(getattr(args, "threads", None))
    return run_verify(names=args.cases or None, list_only=args.list)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fatoukit",
        description="Fatou/Julia-like and escaping-set analysis for "
                    "families of holomorphic functions")
    sub = ap.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify",
                                help="rasterize labels and escape maps")
    _add_common(p_classify)
    p_classify.set_defaults(fn=_cmd_classify)

    p_report = sub.add_parser("report", help="full analysis report (JSON)")
    _add_common(p_report)
    p_report.set_defaults(fn=_cmd_report)

    p_algebra = sub.add_parser("algebra",
                               help="set-algebra law report for two families")
    _add_common(p_algebra, family2=True)
    p_algebra.set_defaults(fn=_cmd_algebra)

    p_verify = sub.add_parser("verify", help="run the built-in oracle suite")
    p_verify.add_argument("--list", action="store_true",
                          help="list case names without running")
    p_verify.add_argument("--threads", type=int, default=None)
    p_verify.add_argument("cases", nargs="*",
                          help="run only the named cases")
    p_verify.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
