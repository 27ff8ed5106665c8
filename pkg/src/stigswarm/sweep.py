"""Parameter sweeps over (cruise speed, sampling frequency) and their outputs."""

from __future__ import annotations

import configparser
import dataclasses
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .sim_engine import RunResult, SimConfig, run
from .swarm_dynamics import ConfigError

CSV_HEADER = "id,v,f,C,T,f_over_v,C_over_T"
STATUS_HEADER = "id,termination_reason,ticks"


@dataclass(frozen=True)
class SweepSpec:
    pairs: tuple[tuple[float, float], ...]
    repetitions: int = 1
    output: Optional[str] = None  # CSV file name inside the output directory

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ConfigError(f"repetitions = {self.repetitions} violates repetitions >= 1")
        for v, f in self.pairs:
            if not (v > 0 and f > 0):
                raise ConfigError(f"sweep pair (v={v}, f={f}) violates v > 0 and f > 0")


@dataclass(frozen=True)
class SweepRow:
    id: int
    v: float
    f: float
    C: int
    T: float
    termination_reason: str
    ticks: int

    @property
    def f_over_v(self) -> float:
        return self.f / self.v

    @property
    def C_over_T(self) -> float:
        return self.C / self.T


def load_sweep_spec(path: str | Path) -> SweepSpec:
    """Read ``[sweep]`` with ``pairs`` (one ``v, f`` per line or ``;``-separated),
    ``repetitions`` and ``output``."""
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        parser.read_string(path.read_text(), source=str(path))
    except FileNotFoundError:
        raise ConfigError(f"sweep spec not found: {path}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: malformed sweep spec: {exc}") from None
    if parser.sections() != ["sweep"]:
        raise ConfigError(f"{path}: expected exactly one [sweep] section, found {parser.sections()}")
    sec = parser["sweep"]
    unknown = set(sec) - {"pairs", "repetitions", "output"}
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) in [sweep]: {', '.join(sorted(unknown))}")
    pairs = []
    for chunk in re.split(r"[;\n]", sec.get("pairs", "")):
        if not chunk.strip():
            continue
        parts = [p for p in re.split(r"[,\s]+", chunk.strip()) if p]
        if len(parts) != 2:
            raise ConfigError(f"{path}: sweep pair must be 'v, f', got {chunk.strip()!r}")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"{path}: sweep pair must be numeric, got {chunk.strip()!r}") from None
    try:
        repetitions = sec.getint("repetitions", fallback=1)
    except ValueError:
        raise ConfigError(f"{path}: repetitions must be an integer") from None
    return SweepSpec(tuple(pairs), repetitions, sec.get("output"))


def configs_for(spec: SweepSpec, base: SimConfig) -> list[SimConfig]:
    """One config per run, in row order (each pair repeated ``repetitions`` times)."""
    out = []
    for v, f in spec.pairs:
        pso = dataclasses.replace(base.pso, cruise_speed=float(v), sampling_frequency=float(f))
        out.extend([dataclasses.replace(base, pso=pso)] * spec.repetitions)
    return out


def _run_one(config: SimConfig) -> RunResult:
    return run(config)


def run_sweep(spec: SweepSpec, base: SimConfig, jobs: int = 1) -> list[SweepRow]:
    """Run every configuration; rows keep spec order regardless of ``jobs``.

    Runs that hit the time budget are kept, tagged with their termination reason.
    """
    configs = configs_for(spec, base)
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, configs))
    else:
        results = [_run_one(c) for c in configs]
    return [
        SweepRow(
            id=k,
            v=r.metrics.v,
            f=r.metrics.f,
            C=r.metrics.C,
            T=r.metrics.T,
            termination_reason=r.termination_reason,
            ticks=r.ticks,
        )
        for k, r in enumerate(results)
    ]


def _num(x: float) -> str:
    return f"{x:.9f}"


def format_csv(rows: Sequence[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([str(r.id), _num(r.v), _num(r.f), str(r.C), _num(r.T), _num(r.f_over_v), _num(r.C_over_T)]))
    return "\n".join(lines) + "\n"


def format_status(rows: Sequence[SweepRow]) -> str:
    lines = [STATUS_HEADER] + [f"{r.id},{r.termination_reason},{r.ticks}" for r in rows]
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    keys = CSV_HEADER.split(",")
    out = []
    for ln in lines[1:]:
        vals = ln.split(",")
        row = dict(zip(keys, vals))
        out.append({k: (int(v) if k in ("id", "C") else float(v)) for k, v in row.items()})
    return out


def _fixed_f_series(rows: Sequence[dict]) -> list[tuple[float, float]]:
    """C/T vs v for the frequency shared by the most rows (first seen wins ties)."""
    counts: dict[float, int] = {}
    for r in rows:
        counts[r["f"]] = counts.get(r["f"], 0) + 1
    f_fixed = max(counts, key=lambda f: counts[f])  # dict order = first seen
    pts = [(r["v"], r["C_over_T"]) for r in rows if r["f"] == f_fixed]
    return sorted(pts, key=lambda p: p[0])


def emit_plot_data(rows: Sequence[SweepRow | dict], out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``ct_vs_v.dat`` (fixed f) and ``ct_vs_f_over_v.dat`` (all rows), two columns each."""
    if not rows:
        raise ValueError("no rows to plot")
    dicts = [
        r if isinstance(r, dict) else {"v": r.v, "f": r.f, "f_over_v": r.f_over_v, "C_over_T": r.C_over_T}
        for r in rows
    ]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_v = out_dir / "ct_vs_v.dat"
    by_ratio = out_dir / "ct_vs_f_over_v.dat"
    by_v.write_text("".join(f"{_num(x)} {_num(y)}\n" for x, y in _fixed_f_series(dicts)))
    ratio_pts = sorted(((d["f_over_v"], d["C_over_T"]) for d in dicts), key=lambda p: p[0])
    by_ratio.write_text("".join(f"{_num(x)} {_num(y)}\n" for x, y in ratio_pts))
    return by_v, by_ratio


def write_sweep(rows: Sequence[SweepRow], out_dir: str | Path, csv_name: Optional[str] = None) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / (csv_name or "sweep.csv")
    csv_path.write_text(format_csv(rows))
    (out_dir / "sweep_status.csv").write_text(format_status(rows))
    if rows:
        emit_plot_data(rows, out_dir)
    return csv_path
