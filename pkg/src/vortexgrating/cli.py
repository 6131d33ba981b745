"""``simulate`` command: run one scenario and write its tables.

Exit status is 0 on success, 1 for configuration problems and 2 when the
numerics fail (singular cells above threshold, overflow, non-convergence).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__, kernels
from .atomic import CoefficientSource, SignConvention, VortexSquare
from .config import SCENARIO_NAMES, dump_config, load_config
from .errors import ConfigError, SimulationError
from .output import write_csv, write_heatmap
from .runner import run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simulate", description=__doc__.splitlines()[0])
    p.add_argument("config", help="TOML scenario file")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--scenario", choices=SCENARIO_NAMES, help="override the scenario name")
    p.add_argument("--coefficients", choices=[e.value for e in CoefficientSource])
    p.add_argument("--sign", choices=[e.value for e in SignConvention])
    p.add_argument("--vortex-square", choices=[e.value for e in VortexSquare])
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _apply_overrides(s, args):
    flags = s.flags
    if args.coefficients:
        flags = replace(flags, coefficients=CoefficientSource(args.coefficients))
    if args.sign:
        flags = replace(flags, sign=SignConvention(args.sign))
    if args.vortex_square:
        flags = replace(flags, vortex=VortexSquare(args.vortex_square))
    s = replace(s, flags=flags)
    if args.out:
        s = replace(s, output_dir=args.out)
    return s


def write_outputs(s, tables, out_dir: Path, runtime: float) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for t in tables:
        path = out_dir / f"{t.name}.csv"
        write_csv(t, path)
        written.append(path)
        if s.kind != "length":
            pgm = out_dir / f"{t.name}.pgm"
            write_heatmap(t, pgm)
            written.append(pgm)
    cfg = out_dir / "resolved_config.toml"
    cfg.write_text(dump_config(s), encoding="utf-8")
    manifest = {
        "scenario": s.name,
        "code_version": __version__,
        "kernel_backend": kernels.BACKEND,
        "runtime_s": round(runtime, 6),
        "tables": {t.name: {"nan_count": t.nan_count} for t in tables},
    }
    (out_dir / "run_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return written + [cfg]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("simulate: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        s = _apply_overrides(load_config(args.config, args.scenario), args)
    except (ConfigError, ValueError) as exc:
        print(f"simulate: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    try:
        tables = run_scenario(s, threads=args.threads)
    except (SimulationError, ArithmeticError) as exc:
        print(f"simulate: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConfigError as exc:
        print(f"simulate: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    runtime = time.perf_counter() - start
    try:
        write_outputs(s, tables, Path(s.output_dir), runtime)
    except OSError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{s.name}: {len(tables)} tables in {runtime:.2f} s -> {s.output_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
