"""Command line front end: ``elastica run ...``.

Exit codes: 0 success, 2 any solver failure during the run, 3 failed
lower-bound check (--check-lower).
"""

from __future__ import annotations

import argparse
import sys

from . import lab

_CFG_KEYS = {
    "experiment": str,
    "method": str,
    "order": int,
    "nu": float,
    "E": float,
    "delta": float,
    "levels": str,
    "eigs": int,
    "format": str,
    "out": str,
    "nus": str,
    "check_lower": lambda s: s.lower() in ("1", "true", "yes"),
}


def _parse_levels(text: str):
    return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)


def _load_config_file(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CFG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            out[key] = _CFG_KEYS[key](value.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elastica")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a benchmark experiment")
    run.add_argument("--experiment", choices=sorted(lab.EXPERIMENTS))
    run.add_argument("--method", choices=["wg", "cr"])
    run.add_argument("--order", type=int, help="WG polynomial order k")
    run.add_argument("--nu", type=float, help="Poisson ratio")
    run.add_argument("--E", type=float, help="Young's modulus")
    run.add_argument("--delta", type=float, help="stabilization exponent")
    run.add_argument("--levels", type=str, help="comma-separated list of n (h=1/n)")
    run.add_argument("--eigs", type=int, help="number of eigenpairs")
    run.add_argument("--format", choices=["csv", "md"])
    run.add_argument("--out", type=str, help="output file path")
    run.add_argument("--check-lower", action="store_true", default=None,
                     dest="check_lower",
                     help="fail (exit 3) unless the gamma ladder is monotone")
    run.add_argument("--nus", type=str,
                     help="comma-separated Poisson ratios for a locking sweep")
    run.add_argument("--config", type=str, help="key=value config file")
    return parser


_DEFAULTS = {
    "experiment": "square",
    "method": "wg",
    "order": 1,
    "nu": 0.49,
    "E": 1.0,
    "delta": 0.05,
    "levels": "16,32,64",
    "eigs": 4,
    "format": "csv",
    "out": "table.csv",
    "check_lower": False,
    "nus": None,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    merged = dict(_DEFAULTS)
    if args.config:
        merged.update(_load_config_file(args.config))
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value

    domain, boundary = lab.EXPERIMENTS[merged["experiment"]]
    cfg = lab.ExperimentConfig(
        domain=domain,
        boundary=boundary,
        method=merged["method"],
        order=merged["order"],
        E=merged["E"],
        nu=merged["nu"],
        delta=merged["delta"],
        levels=_parse_levels(merged["levels"]),
        num_eigs=merged["eigs"],
    )

    if merged["nus"]:
        nus = [float(tok) for tok in merged["nus"].split(",") if tok]
        sweep = lab.locking_sweep(cfg, nus)
        table = sweep["tables"][nus[0]]
        dev = sweep["max_rel_deviation"]
        print("max relative eigenfrequency deviation across nu values:")
        for j in range(dev.shape[0]):
            row = "  ".join(f"{d:.3e}" for d in dev[j])
            print(f"  omega_{j + 1}: {row}")
    else:
        table = lab.run_experiment(cfg)

    lab.emit(table, merged["format"], merged["out"])
    print(f"wrote {merged['out']}")
    if table.failures:
        for level, msg in sorted(table.failures.items()):
            print(f"solver failure at level {level}: {msg}", file=sys.stderr)
        return 2
    if merged["check_lower"] and not lab.check_lower_bounds(table):
        print("lower-bound check failed: gamma ladder not monotone", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
