"""Command-line entry point: ``rsav run|refine|compare <config>``.

Exit codes: 0 success, 2 configuration error, 3 divergence or energy-law
violation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import driver
from .config import load_config
from .errors import CatalogError, ConfigError, GridError, IllPosedQError, NumericalError

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_IO = 0, 2, 3, 4


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="key = value configuration file")
    common.add_argument("--out", help="output directory (overrides out_dir)")
    common.add_argument("--seed", type=_seed, help="override the random seed")
    common.add_argument(
        "--no-asserts", action="store_true", help="skip per-step energy-law checks"
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rsav", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run one simulation")
    p_ref = sub.add_parser("refine", parents=[common], help="time-step refinement study")
    p_ref.add_argument("--levels", type=int, default=7)
    sub.add_parser("compare", parents=[common], help="baseline vs relaxed comparison")
    return parser


def _fmt_order(x: float) -> str:
    return "n/a" if x != x else f"{x:.3f}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config)
        changes = {}
        if args.seed is not None:
            changes["seed"] = args.seed
        if args.no_asserts:
            changes["check_law"] = False
        if args.out:
            changes["out_dir"] = args.out
        cfg = replace(cfg, **changes).validate()

        if args.command == "run":
            res = driver.run(cfg)
            last = res.records[-1]
            print(f"completed {last.step} steps to t={last.t:.6g}; E_orig={last.E_orig:.12g}")
        elif args.command == "refine":
            table = driver.refine(cfg, args.levels)
            print("level  dt            err_phi       err_q         order_phi  order_q")
            for i, dt in enumerate(table.dts[:-1]):
                op = table.order_phi[i] if i < len(table.order_phi) else float("nan")
                oq = table.order_q[i] if i < len(table.order_q) else float("nan")
                print(
                    f"{i:<6d} {dt:<13.6e} {table.err_phi[i]:<13.6e} {table.err_q[i]:<13.6e} "
                    f"{_fmt_order(op):<10} {_fmt_order(oq)}"
                )
        else:
            comp = driver.compare(cfg)
            print(f"max|q-Q| baseline: {comp.max_gap('baseline'):.6e}")
            print(f"max|q-Q| relaxed:  {comp.max_gap('relaxed'):.6e}")
    except (ConfigError, CatalogError, GridError, IllPosedQError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
