"""Command-line entry point.

    channel-limits run <config> [--seed S] [--out PATH] [--format csv|json]
                                [--threads T]

Results go to the path from the config's outputPath key unless --out
overrides it ('-' writes to stdout).  Progress is printed on stderr so
piped output stays clean.  Exit codes: 0 success, 1 configuration
error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config, with_overrides
from .errors import ConfigError
from .experiments import emit_results, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="channel-limits",
        description="Run channel output-set experiments from a config file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("config", help="path to a flat key-value config file")
    run.add_argument("--seed", type=int, default=None, help="override masterSeed")
    run.add_argument("--out", default=None, help="override outputPath ('-' = stdout)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--threads", type=int, default=1, help="worker thread count")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = with_overrides(cfg, master_seed=args.seed, output_path=args.out)
        if args.threads < 1:
            raise ConfigError(f"threads: must be positive, got {args.threads}")
        dest = cfg.output_path
        if dest is None:
            raise ConfigError("outputPath: not set in config and no --out given")
        print(
            f"[channel-limits] {cfg.experiment}: k={cfg.k} seed={cfg.master_seed}",
            file=sys.stderr,
        )
        records = run_experiment(cfg, threads=args.threads)
        text = emit_results(records, args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if dest == "-":
            sys.stdout.write(text)
        else:
            with open(dest, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            print(
                f"[channel-limits] wrote {len(records)} records to {dest}",
                file=sys.stderr,
            )
    except OSError as exc:
        print(f"error: cannot write {dest!r}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
