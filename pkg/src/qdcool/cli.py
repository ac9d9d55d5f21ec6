"""Command-line experiment runner: one subcommand per experiment.

    qdcool <experiment> --config cfg.toml --out results/ [--threads N] [--check]

Exit codes: 0 success, 1 configuration or I/O failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .experiments import EXPERIMENTS, ConfigError, config_from_dict, run_experiment
from .tables import write_csv, write_meta


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdcool",
        description="Run digital-cooling experiments and write CSV result tables.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="experiment")
    for exp_id in EXPERIMENTS:
        p = sub.add_parser(exp_id, help=f"run the {exp_id} experiment")
        p.add_argument("--config", required=True, help="TOML config file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        p.add_argument(
            "--check", action="store_true", help="validate the config and exit"
        )
    return parser


def _load_config(experiment: str, path: str):
    cfg_path = Path(path)
    if not cfg_path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = tomllib.loads(cfg_path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_dict(experiment, data)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        cfg = _load_config(args.experiment, args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 1
    if args.check:
        print(f"{args.experiment}: config ok")
        return 0

    try:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        tables = run_experiment(args.experiment, cfg, threads=args.threads)
        cfg_echo = dataclasses.asdict(cfg)
        for table in tables:
            csv_path = write_csv(table, out_dir)
            write_meta(table, out_dir, config=cfg_echo, version=__version__)
            print(f"wrote {csv_path}")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
