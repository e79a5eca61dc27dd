"""Command-line entry point: ``quenchlat run`` and ``quenchlat reproduce``."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigError, UnknownFigure

log = logging.getLogger("quenchlat")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quenchlat", description="Entanglement growth after free-fermion quenches.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one JSON experiment config")
    run.add_argument("config", help="path to the experiment JSON")
    run.add_argument("--threads", type=_positive_int, default=1, help="worker threads per engine")
    run.add_argument("--out", default=None, help="output directory (overrides the config)")
    run.add_argument("--no-plot", action="store_true", help="skip the PNG figure")

    rep = sub.add_parser("reproduce", help="regenerate a standard figure at desk scale")
    rep.add_argument("figure", help="fig3a, fig3b, fig5, fig6 or fig7")
    rep.add_argument("--threads", type=_positive_int, default=1)
    rep.add_argument("--out", default=None, help="parent directory (default ./reproduce)")
    rep.add_argument("--quick", action="store_true", help="tiny budgets for smoke tests")
    rep.add_argument("--no-plot", action="store_true")
    return parser


def _cmd_run(args) -> None:
    from .experiment import load_config, run_experiment

    cfg = load_config(args.config)
    out = args.out if args.out is not None else cfg.output
    report = run_experiment(cfg, out, threads=args.threads, plot=not args.no_plot)
    print(f"# output: {out}")
    print(f"# stationary: {report['stationary']:.8f}")
    print("engine,csv,points")
    for engine, info in report["engines"].items():
        print(f"{engine},{info['csv']},{info['points']}")
    for c in report["comparisons"]:
        z = c["max_diff_over_stderr"]
        print(f"# {c['a']} vs {c['b']}: max|diff|={c['max_abs_diff']:.3g}" + ("" if z is None else f" max|diff|/stderr={z:.3g}"))


def _cmd_reproduce(args) -> None:
    from .figures import reproduce

    index = reproduce(args.figure, args.out, threads=args.threads, quick=args.quick, plot=not args.no_plot)
    print("run,stationary,engines")
    for name, info in index["runs"].items():
        print(f"{name},{info['stationary']:.8f},{'|'.join(info['engines'])}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            _cmd_run(args)
        else:
            _cmd_reproduce(args)
    except (ConfigError, UnknownFigure) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
