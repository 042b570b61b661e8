"""Command-line entry point: ``pinchsem <subcommand> [options]``."""

from __future__ import annotations

import argparse
import sys

from .benchmarks import solve_schemes
from .config import ExperimentConfig, config_from_mapping, load_config, parse_assignment
from .geometry import InvalidParameterError, Position3
from .harness import records_to_csv, run_sweep, write_csv
from .optimizer import ConfigurationError

# subcommand -> (sweep variable, default grid, default schemes)
SWEEPS = {
    "sweep-power": ("P_max_dBm", (0, 5, 10, 15, 20, 25, 30), ("proportional", "equal", "cas")),
    "outage": ("P_max_dBm", (0, 5, 10, 15, 20, 25, 30), ("proportional", "cas")),
    "sweep-qos": ("R_B_min", (0.1, 0.5, 1.0, 1.5, 2.0), ("proportional", "cas")),
    "distance-ratio": ("distance_ratio_bucket", tuple(i / 5 for i in range(11)), ("proportional",)),
    "phase-precision": (
        "phase_precision_pair",
        tuple((a, b) for a in (0.02, 0.5, 100.0) for b in (0.02, 0.5, 100.0)),
        ("proportional",),
    ),
}


def _parse_grid(text: str, sweep_var: str):
    items = [t for t in text.split(",") if t.strip()]
    try:
        if sweep_var == "phase_precision_pair":
            return tuple(tuple(float(v) for v in item.split("/")) for item in items)
        return tuple(float(v) for v in items)
    except ValueError:
        raise ConfigurationError(f"cannot parse grid {text!r}") from None


def _point(text: str) -> Position3:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise ConfigurationError(f"expected 'x,y' in metres, got {text!r}") from None
    return Position3(x, y, 0.0)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML key-value file with ExperimentConfig fields")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config field (repeatable)")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--schemes", help="comma-separated subset of proportional,equal,cas")
    p.add_argument("--p-max", type=float, dest="p_max_dbm", help="transmit power in dBm")
    p.add_argument("--side", type=float, dest="region_side", help="region side D in metres")
    p.add_argument("--antennas", type=int, dest="antenna_count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pinchsem", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SWEEPS:
        p = sub.add_parser(name, help=f"Monte Carlo sweep over {SWEEPS[name][0]}")
        _add_common(p)
        p.add_argument("--grid", help="comma-separated sweep values (pairs as dS/dB)")
        p.add_argument("-o", "--output", help="CSV path (stdout when omitted)")
    p = sub.add_parser("solve-one", help="solve a single drop and print the solutions")
    _add_common(p)
    p.add_argument("--user-s", required=True, help="semantic user 'x,y' in metres")
    p.add_argument("--user-b", required=True, help="bit user 'x,y' in metres")
    return parser


def _config(args, sweep=None) -> ExperimentConfig:
    base = ExperimentConfig()
    if sweep is not None:
        var, grid, schemes = SWEEPS[sweep]
        base = base.replace(sweep_var=var, grid=grid, schemes=schemes)
    cfg = load_config(args.config, base) if args.config else base
    overrides = dict(parse_assignment(a) for a in args.set)
    for key in ("trials", "seed", "schemes", "p_max_dbm", "region_side", "antenna_count"):
        v = getattr(args, key, None)
        if v is not None:
            overrides[key] = v
    if getattr(args, "grid", None):
        overrides["grid"] = _parse_grid(args.grid, overrides.get("sweep_var", cfg.sweep_var))
    if getattr(args, "output", None):
        overrides["output"] = args.output
    return config_from_mapping(overrides, cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve-one":
            cfg = _config(args).validate()
            sols = solve_schemes(cfg.schemes, _point(args.user_s), _point(args.user_b), cfg.system_params(),
                                 cfg.solver_options(), cfg.semantic_params(), cfg.coupling_params(), cfg.profile)
            print("\n\n".join(s.summary() for s in sols.values()))
            return 0
        cfg = _config(args, args.command).validate()
        target = cfg.output
        records = run_sweep(cfg.replace(output=None))
        if target:
            write_csv(records, target)
        else:
            sys.stdout.write(records_to_csv(records))
        return 0
    except (ConfigurationError, InvalidParameterError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
