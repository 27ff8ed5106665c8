"""Scenario config files: INI-style sections of flat ``key = value`` pairs.

Grammar (every key optional, unknown sections or keys are rejected)::

    [swarm]      omega, phi_fraction, k_ca, k_sigma, cruise_speed,
                 sampling_frequency, r_ref, stencil_spacing
    [scenario]   width, height, cell_size, drone_count, ignition_points,
                 water_source, dock, waiting_area
    [fire]       ambient_temperature, ignition_temperature, flame_temperature,
                 fuel_per_cell, burn_rate, heating_rate, diffusion_rate,
                 cooling_rate, quench_per_unit
    [mission]    water_threshold, battery_threshold, flight_time, ...
    [sim]        r_col, max_sim_time, collision_mode, random_free

Points are written ``x, y``; ``ignition_points`` holds one point per line
(or ``;``-separated) and may be left empty. ``waiting_area`` is
``x_min, y_min, x_max, y_max``. When ``stencil_spacing`` is omitted it
defaults to ``2 * r_ref``.
"""

from __future__ import annotations

import configparser
import dataclasses
import re
from pathlib import Path
from typing import Any

from .environment import FireParams, ScenarioLayout
from .mission_control import MissionParams
from .sim_engine import SimConfig
from .swarm_dynamics import ConfigError, PsoParams

SECTIONS: dict[str, type] = {
    "swarm": PsoParams,
    "scenario": ScenarioLayout,
    "fire": FireParams,
    "mission": MissionParams,
    "sim": SimConfig,
}
_SIM_NESTED = {"pso", "layout", "fire", "mission"}
_POINT_KEYS = {"water_source", "dock"}


def _field_defaults(cls: type) -> dict[str, Any]:
    out = {}
    for f in dataclasses.fields(cls):
        if f.default is not dataclasses.MISSING:
            out[f.name] = f.default
        elif f.default_factory is not dataclasses.MISSING:  # type: ignore[misc]
            out[f.name] = f.default_factory()  # type: ignore[misc]
    return out


def _section_keys(section: str) -> list[str]:
    keys = [k for k in _field_defaults(SECTIONS[section]) if k not in _SIM_NESTED and k != "drone_count"]
    if section == "scenario":
        keys.append("drone_count")
    return keys


def _locate(lines: list[str], section: str, key: str) -> int | None:
    current = None
    for n, line in enumerate(lines, start=1):
        stripped = line.strip()
        m = re.match(r"\[(.+)\]$", stripped)
        if m:
            current = m.group(1).strip()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return n
    return None


def _floats(text: str, count: int, key: str) -> tuple[float, ...]:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if len(parts) != count:
        raise ValueError(f"{key} expects {count} numbers, got {text.strip()!r}")
    return tuple(float(p) for p in parts)


def _convert(key: str, default: Any, raw: str) -> Any:
    if key == "ignition_points":
        chunks = [c for c in re.split(r"[;\n]", raw) if c.strip()]
        return tuple(_floats(c, 2, key) for c in chunks)
    if key in _POINT_KEYS:
        return _floats(raw, 2, key)
    if key == "waiting_area":
        return _floats(raw, 4, key)
    if isinstance(default, bool):
        low = raw.strip().lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ValueError(f"{key} expects a boolean, got {raw.strip()!r}")
    if isinstance(default, int):
        return int(raw.strip())
    if isinstance(default, float):
        return float(raw.strip())
    return raw.strip()


def loads(text: str, source: str = "<string>") -> SimConfig:
    """Parse config text; every omitted key takes its documented default."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str  # keep key case
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: malformed config: {exc}") from None
    lines = text.splitlines()

    values: dict[str, dict[str, Any]] = {name: {} for name in SECTIONS}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"{source}: unknown section [{section}] (line {_locate_section(lines, section)})")
        defaults = _field_defaults(SECTIONS[section])
        allowed = _section_keys(section)
        for key, raw in parser.items(section):
            line = _locate(lines, section, key)
            if key not in allowed:
                raise ConfigError(f"{source}: unknown key '{key}' in [{section}] (line {line})")
            default = defaults[key] if key != "drone_count" else _field_defaults(SimConfig)["drone_count"]
            try:
                values[section][key] = _convert(key, default, raw)
            except ValueError as exc:
                raise ConfigError(f"{source}: bad value for '{key}' in [{section}] (line {line}): {exc}") from None

    def build(section: str, cls: type, extra: dict | None = None):
        kwargs = dict(values[section])
        if extra:
            kwargs.update(extra)
        try:
            return cls(**kwargs)
        except ConfigError as exc:
            key = str(exc).split(" ", 1)[0]
            line = _locate(lines, section, key)
            where = f" (line {line})" if line else ""
            raise ConfigError(f"{source}: [{section}] {exc}{where}") from None

    swarm_vals = values["swarm"]
    if "stencil_spacing" not in swarm_vals and "r_ref" in swarm_vals:
        swarm_vals["stencil_spacing"] = 2.0 * swarm_vals["r_ref"]
    pso = build("swarm", PsoParams)
    scenario_vals = values["scenario"]
    drone_count = scenario_vals.pop("drone_count", None)
    layout = build("scenario", ScenarioLayout)
    fire = build("fire", FireParams)
    mission = build("mission", MissionParams)
    extra: dict[str, Any] = {"pso": pso, "layout": layout, "fire": fire, "mission": mission}
    if drone_count is not None:
        extra["drone_count"] = drone_count
    return build("sim", SimConfig, extra)


def _locate_section(lines: list[str], section: str) -> int | None:
    for n, line in enumerate(lines, start=1):
        if line.strip() == f"[{section}]":
            return n
    return None


def load(path: str | Path) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return loads(text, source=str(path))


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return "".join(f"\n    {_fmt(p)}" for p in value)
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def dumps(config: SimConfig) -> str:
    """Canonical text form; ``loads(dumps(c)) == c``."""
    objects = {
        "swarm": config.pso,
        "scenario": config.layout,
        "fire": config.fire,
        "mission": config.mission,
        "sim": config,
    }
    out = []
    for section, obj in objects.items():
        out.append(f"[{section}]")
        for key in _section_keys(section):
            value = getattr(obj, key) if key != "drone_count" else config.drone_count
            rendered = _fmt(value)
            out.append(f"{key} ={rendered}" if rendered.startswith("\n") or rendered == "" else f"{key} = {rendered}")
        out.append("")
    return "\n".join(out)
