"""Command-line harness.

    stigswarm validate --config scenario.ini
    stigswarm run      --config scenario.ini --out results/ [--dump-ticks] [--collision-mode per-tick]
    stigswarm sweep    speed_frequency.sweep --config scenario.ini --out results/ [--jobs 4]

Every error goes to stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import config as cfg
from . import sweep as sw
from .collision_metrics import COLLISION_MODES
from .sim_engine import SimConfig, run
from .swarm_dynamics import ConfigError


def _load_config(path: Optional[str], collision_mode: Optional[str]) -> SimConfig:
    config = cfg.load(path) if path else SimConfig()
    if collision_mode is not None:
        config = dataclasses.replace(config, collision_mode=collision_mode)
    return config


def events_csv(result) -> str:
    lines = ["time,drone_a,drone_b,xa,ya,xb,yb"]
    for e in result.events:
        (xa, ya), (xb, yb) = e.positions
        lines.append(f"{e.time:.9f},{e.pair[0]},{e.pair[1]},{xa:.9f},{ya:.9f},{xb:.9f},{yb:.9f}")
    return "\n".join(lines) + "\n"


def cmd_validate(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args.collision_mode)
    sys.stdout.write(cfg.dumps(config))
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args.collision_mode)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.ini").write_text(cfg.dumps(config))
    if args.dump_ticks:
        with open(out / "ticks.jsonl", "w") as fh:
            result = run(config, tick_sink=lambda rec: fh.write(json.dumps(rec, sort_keys=True) + "\n"))
    else:
        result = run(config)
    (out / "result.json").write_text(result.to_json())
    (out / "events.csv").write_text(events_csv(result))
    m = result.metrics
    row = sw.SweepRow(0, m.v, m.f, m.C, m.T, result.termination_reason, result.ticks)
    (out / "metrics.csv").write_text(sw.format_csv([row]))
    print(f"{result.termination_reason}: C={m.C} T={m.T:.3f} s C/T={m.C_over_T:.4f} 1/s")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = sw.load_sweep_spec(args.spec)
    base = _load_config(args.config, args.collision_mode)
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    rows = sw.run_sweep(spec, base, jobs=args.jobs)
    csv_path = sw.write_sweep(rows, args.out, spec.output)
    for r in rows:
        print(f"{r.id:3d} v={r.v:g} f={r.f:g} C={r.C} T={r.T:.3f} C/T={r.C_over_T:.4f} ({r.termination_reason})")
    print(f"wrote {csv_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stigswarm", description="Stigmergic firefighting swarm simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="scenario config file (defaults when omitted)")
        p.add_argument("--collision-mode", choices=COLLISION_MODES, help="override the config's collision mode")

    p = sub.add_parser("validate", help="parse a config and print its canonical form")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run one scenario")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dump-ticks", action="store_true", help="write a per-tick JSON-lines state stream")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a (v, f) sweep")
    p.add_argument("spec", help="sweep spec file")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel runs (default 1)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
