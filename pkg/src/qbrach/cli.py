"""Command-line entry point.

Each subcommand runs one scenario kind, configured either from a JSON
document (``--config``) or from inline flags; inline flags override values
read from the document. Exit codes: 0 success, 1 validation error,
2 numeric/domain error, 3 I/O error. A sweep in which some rows failed still
writes every row (failures carry an ``error`` cell) and then exits with 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .errors import ConfigError, QbrachError
from .harness import build_config, emit, run_scenario, write
from .harness.config import GRID_KEY, KINDS

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _triple(text: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return [float(v) for v in parts]


def _range(text: str) -> tuple[float, float, Optional[int]]:
    """``value`` or ``start:stop:count``."""
    parts = text.split(":")
    if len(parts) == 1:
        v = float(parts[0])
        return v, v, None
    if len(parts) == 3:
        return float(parts[0]), float(parts[1]), int(parts[2])
    raise argparse.ArgumentTypeError(f"expected VALUE or START:STOP:COUNT, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qbrach", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind in KINDS:
        cmd = sub.add_parser(kind, help=f"run a {kind} scenario")
        cmd.add_argument("--config", metavar="PATH", help="JSON scenario document")
        cmd.add_argument("--delta-e", type=float, dest="deltaE", help="half the spectral gap")
        cmd.add_argument("--alpha", type=_range, help="alpha value or START:STOP:COUNT (pt-sweep)")
        cmd.add_argument("--theta", type=float, help="great-circle selector / first theta")
        cmd.add_argument("--o0", type=float, dest="O0", help="trace part of the Hamiltonian")
        cmd.add_argument("--steps", type=int, help="RK4 steps (evolve)")
        cmd.add_argument("--t-max", type=float, dest="t_max", help="end of the time scan")
        cmd.add_argument("--grid", type=int, help=f"grid size ({GRID_KEY[kind]})")
        cmd.add_argument("--seed", type=int, help="seed for randomized grids")
        cmd.add_argument("--p-i", type=_triple, dest="P_I", metavar="X,Y,Z", help="initial Bloch vector")
        cmd.add_argument("--p-f", type=_triple, dest="P_F", metavar="X,Y,Z", help="final Bloch vector")
        cmd.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        cmd.add_argument("--format", choices=("csv", "json"), help="output format")
        cmd.add_argument("--workers", type=int, default=None, help="evaluate rows in a thread pool")
    return parser


def _document(args) -> dict:
    doc: dict = {"kind": args.kind, "parameters": {}, "output": {}}
    if args.config:
        with open(args.config, "rb") as fh:
            try:
                loaded = json.loads(fh.read().decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ConfigError("<root>", f"cannot parse {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("<root>", "scenario document must be a JSON object")
        if loaded.get("kind", args.kind) != args.kind:
            raise ConfigError("kind", f"config is for {loaded['kind']!r}, not {args.kind!r}")
        doc.update(loaded)
        doc["parameters"] = dict(loaded.get("parameters", {}))
        doc["output"] = dict(loaded.get("output", {}))
    params = doc["parameters"]
    for key in ("deltaE", "theta", "O0", "steps", "t_max", "seed", "P_I", "P_F"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    if args.grid is not None:
        params[GRID_KEY[args.kind]] = args.grid
    if args.alpha is not None:
        lo, hi, count = args.alpha
        params["alpha_min"], params["alpha_max"] = lo, hi
        params["alpha_count"] = count if count is not None else 1
    if args.out is not None:
        doc["output"]["path"] = args.out
    if args.format is not None:
        doc["output"]["format"] = args.format
    return doc


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(_document(args))
    except ConfigError as exc:
        print(f"qbrach: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"qbrach: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        result = run_scenario(cfg, workers=args.workers)
    except QbrachError as exc:
        print(f"qbrach: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        if cfg.output_path:
            write(result, cfg.output_path, cfg.output_format)
        else:
            sys.stdout.buffer.write(emit(result, cfg.output_format))
            sys.stdout.flush()
    except OSError as exc:
        print(f"qbrach: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = [row["index"] for row in result.rows if row.get("error")]
    if failed:
        print(f"qbrach: {len(failed)} row(s) failed: indices {failed}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
