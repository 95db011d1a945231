"""Command-line interface: ``lcecs run|sweep|timing|validate``.

Exit codes: 0 on success, 1 when validation fails, 2 on usage errors.
All flags override the corresponding config-file keys; the config path
itself defaults to the LCECS_CONFIG environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import runner, validation


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file (default: $LCECS_CONFIG)")
    parser.add_argument("--out", help="directory to write output files into")
    parser.add_argument("--seed", type=int, help="seed for sampled measurement outcomes")
    parser.add_argument("--mode", choices=["idealized", "full"], help="engine mode")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcecs",
        description="Entangled coherent states of two LC modes via a flux qubit: "
        "analytic and truncated-Fock engines side by side.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one protocol and emit a JSON report")
    _add_common(run)

    swp = sub.add_parser("sweep", help="run the protocol over a parameter grid, emit CSV")
    _add_common(swp)
    swp.add_argument("--axis", choices=list(runner.SWEEP_AXES), help="sweep axis (overrides config)")
    swp.add_argument("--grid", help="comma-separated grid values (overrides config)")

    tim = sub.add_parser("timing", help="report pulse and free-evolution durations")
    _add_common(tim)

    val = sub.add_parser("validate", help="run the acceptance criteria")
    _add_common(val)
    val.add_argument("--filter", help="only run criteria whose name contains this substring")
    return parser


def _write_or_print(text: str, out_dir: str | None, filename: str) -> None:
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, filename)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = runner.load_config(args.config)

    if args.command == "timing":
        spec = runner.spec_from_config(cfg, mode=args.mode, seed=args.seed)
        _write_or_print(runner.to_json(runner.timing_report(spec.params)) + "\n", args.out, "timing.json")
        return 0

    if args.command == "run":
        spec = runner.spec_from_config(cfg, mode=args.mode, seed=args.seed)
        report = runner.run_protocol(spec)
        _write_or_print(runner.report_to_json(report), args.out, "run.json")
        return 0

    if args.command == "sweep":
        spec = runner.spec_from_config(cfg, mode=args.mode, seed=args.seed)
        axis = args.axis or cfg["sweep"]["axis"]
        if args.grid:
            grid = [float(v) for v in args.grid.split(",") if v.strip()]
        else:
            grid = [float(v) for v in cfg["sweep"]["grid"]]
        rows = runner.sweep(spec, axis, grid)
        _write_or_print(runner.sweep_to_csv(rows), args.out, "sweep.csv")
        return 0

    if args.command == "validate":
        spec = runner.spec_from_config(cfg, seed=args.seed)
        return validation.validate(
            name_filter=args.filter,
            out_dir=args.out,
            seed=spec.seed,
            tail_tol=spec.tail_tol,
        )

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
