"""Command-line entry point: ``popdyn {simulate,analyze,pipeline}``.

Exit codes: 0 success, 2 config or input validation error, 3 I/O error,
4 numerical error (e.g. a singular design).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Any, Optional, Sequence

import numpy as np
import scipy

from . import __version__, analysis
from .config import ConfigError, load_config, market_config, merge
from .ingest import ParseError, parse_mirrors, parse_trades, write_mirrors, write_trades
from .pipeline import BIN_MODES, CONDITIONS, AnalysisOutput, analyze_logs
from .simulator import emit_logs, simulate_market, write_ground_truth

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4

SIM_FILES = ("trades.csv", "mirrors.csv", "ground_truth.csv")
ANALYSIS_FILES = ("regression.csv", "bins.csv", "lines.csv")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (or a previous manifest.json)")
    common.add_argument("--seed", type=int, help="64-bit master seed")
    common.add_argument("--out", required=True, help="output directory")
    common.add_argument("--window", type=int, help="rolling performance window in business days")
    common.add_argument("--condition", choices=("zero-one", "not-top100", "both"))
    common.add_argument("--bin-mode", dest="bin_mode", choices=("left", "right", "both"))

    parser = _ArgumentParser(prog="popdyn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    sub.add_parser("simulate", parents=[common], help="simulate a market and write its logs")
    p_an = sub.add_parser("analyze", parents=[common], help="analyze trades.csv and mirrors.csv")
    p_an.add_argument("--input", help="directory holding trades.csv and mirrors.csv")
    sub.add_parser("pipeline", parents=[common], help="simulate then analyze")
    return parser


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out: str, command: str, cfg: dict, outputs: Sequence[str], inputs=()) -> None:
    manifest = {
        "command": command,
        "versions": {"popdyn": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
        "config": cfg,
        "inputs": {os.path.basename(p): _sha256(p) for p in inputs},
        "outputs": {name: _sha256(os.path.join(out, name)) for name in outputs},
    }
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve(args) -> dict[str, Any]:
    cfg = load_config(args.config)
    overrides = {
        "seed": args.seed,
        "window": args.window,
        "condition": args.condition,
        "bin_mode": args.bin_mode,
    }
    if getattr(args, "input", None) is not None:
        overrides["input"] = args.input
    return merge(cfg, overrides)


def _selection(cfg, key, everything):
    return tuple(everything) if cfg[key] == "both" else (cfg[key],)


def run_simulate(cfg: dict, out: str) -> None:
    market = market_config(cfg)
    truth = simulate_market(market)
    trades, mirrors = emit_logs(truth)
    os.makedirs(out, exist_ok=True)
    write_trades(trades, os.path.join(out, "trades.csv"))
    write_mirrors(mirrors, os.path.join(out, "mirrors.csv"))
    write_ground_truth(truth, os.path.join(out, "ground_truth.csv"))


def run_analyze(cfg: dict, input_dir: str, out: str) -> AnalysisOutput:
    market_config(cfg)  # validates the shared fields
    trades = parse_trades(os.path.join(input_dir, "trades.csv"))
    mirrors = parse_mirrors(os.path.join(input_dir, "mirrors.csv"))
    result = analyze_logs(
        trades,
        mirrors,
        window_len=cfg["window"],
        conditions=_selection(cfg, "condition", CONDITIONS),
        bin_modes=_selection(cfg, "bin_mode", BIN_MODES),
        cutoff=cfg["cutoff"],
    )
    os.makedirs(out, exist_ok=True)
    analysis.write_regression_csv(result.regressions, os.path.join(out, "regression.csv"))
    analysis.write_bins_csv(result.cells, os.path.join(out, "bins.csv"))
    analysis.write_lines_csv(result.lines, os.path.join(out, "lines.csv"))
    return result


def cmd_simulate(cfg: dict, out: str) -> None:
    run_simulate(cfg, out)
    _write_manifest(out, "simulate", cfg, SIM_FILES)


def cmd_analyze(cfg: dict, out: str) -> AnalysisOutput:
    input_dir = cfg.get("input")
    if input_dir is None:
        raise ConfigError("input", "analyze needs --input DIR")
    result = run_analyze(cfg, input_dir, out)
    inputs = [os.path.join(input_dir, n) for n in ("trades.csv", "mirrors.csv")]
    _write_manifest(out, "analyze", cfg, ANALYSIS_FILES, inputs)
    return result


def cmd_pipeline(cfg: dict, out: str) -> AnalysisOutput:
    run_simulate(cfg, out)
    result = run_analyze(cfg, out, out)
    _write_manifest(out, "pipeline", cfg, SIM_FILES + ANALYSIS_FILES)
    return result


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        if args.command == "simulate":
            cmd_simulate(cfg, args.out)
        elif args.command == "analyze":
            cmd_analyze(cfg, args.out)
        else:
            cmd_pipeline(cfg, args.out)
    except (ConfigError, ParseError) as exc:
        print(f"popdyn: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        where = exc.filename if exc.filename else ""
        print(f"popdyn: I/O error: {where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"popdyn: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"popdyn: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
