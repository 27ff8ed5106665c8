import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stigswarm import config as cfg
from stigswarm import sweep as sw
from stigswarm.cli import main
from stigswarm.sim_engine import SimConfig
from stigswarm.swarm_dynamics import ConfigError, PsoParams

from conftest import SCENARIOS, tiny_config


# --- config parsing ---------------------------------------------------------


def test_empty_file_gives_defaults():
    c = cfg.loads("")
    assert c == SimConfig()
    assert c.drone_count == 100
    assert (c.layout.width, c.layout.height) == (100.0, 100.0)
    assert len(c.layout.ignition_points) == 3


def test_k_ca_bound_reported_with_line():
    with pytest.raises(ConfigError, match=r"0 <= k_ca < 1.*line 3"):
        cfg.loads("[swarm]\nomega = 0.7\nk_ca = 1.2\n")


def test_speed_frequency_override_echoes():
    c = cfg.loads("[swarm]\ncruise_speed = 20\nsampling_frequency = 50\n")
    assert (c.pso.cruise_speed, c.pso.sampling_frequency) == (20.0, 50.0)
    again = cfg.loads(cfg.dumps(c))
    assert (again.pso.cruise_speed, again.pso.sampling_frequency) == (20.0, 50.0)


def test_unknown_key_fails_closed():
    with pytest.raises(ConfigError, match=r"unknown key 'speed'.*line 2"):
        cfg.loads("[swarm]\nspeed = 3\n")


def test_unknown_section_fails_closed():
    with pytest.raises(ConfigError, match=r"unknown section \[wind\]"):
        cfg.loads("[wind]\nspeed = 3\n")


def test_malformed_syntax():
    with pytest.raises(ConfigError, match="malformed"):
        cfg.loads("k_ca = 0.5\n")  # key before any section


def test_bad_value_names_key():
    with pytest.raises(ConfigError, match=r"'water_source'.*line 2"):
        cfg.loads("[scenario]\nwater_source = 1, 2, 3\n")


def test_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        cfg.load("/nonexistent/scenario.ini")


def test_spacing_follows_r_ref_when_omitted():
    c = cfg.loads("[swarm]\nr_ref = 0.2\n")
    assert c.pso.stencil_spacing == pytest.approx(0.4)


def test_empty_ignition_list():
    c = cfg.loads("[scenario]\nignition_points =\n")
    assert c.layout.ignition_points == ()


def test_desk_scenario_file_parses():
    c = cfg.load(SCENARIOS / "desk_scale.ini")
    assert c.drone_count == 20
    assert (c.layout.width, c.layout.height) == (50.0, 50.0)
    assert len(c.layout.ignition_points) == 1


@settings(max_examples=30, deadline=None)
@given(
    st.floats(0.05, 0.95),
    st.floats(0.0, 0.99),
    st.floats(1.0, 40.0),
    st.floats(10.0, 100.0),
    st.integers(1, 16),
    st.sampled_from(["event", "per-tick"]),
)
def test_round_trip(omega, k_ca, v, f, n, mode):
    c = dataclasses.replace(
        tiny_config(drones=n, collision_mode=mode),
        pso=PsoParams(omega=omega, k_ca=k_ca, cruise_speed=v, sampling_frequency=f),
    )
    assert cfg.loads(cfg.dumps(c)) == c


def test_dump_is_canonical():
    text = cfg.dumps(SimConfig())
    assert cfg.dumps(cfg.loads(text)) == text


# --- sweeps -----------------------------------------------------------------


def test_empty_sweep_is_header_only():
    rows = sw.run_sweep(sw.SweepSpec(()), tiny_config())
    assert sw.format_csv(rows) == "id,v,f,C,T,f_over_v,C_over_T\n"


def test_sweep_rejects_bad_pair():
    with pytest.raises(ConfigError):
        sw.SweepSpec(((5.0, 0.0),))


def test_duplicate_pair_gives_identical_rows():
    rows = sw.run_sweep(sw.SweepSpec(((10.0, 30.0), (10.0, 30.0))), tiny_config(ignitions=[(14.5, 14.5)]))
    a, b = sw.format_csv(rows).splitlines()[1:]
    assert a.split(",")[1:] == b.split(",")[1:]


def test_sweep_rows_in_spec_order_and_time_budget_kept():
    spec = sw.SweepSpec(((10.0, 30.0), (5.0, 40.0)), repetitions=2)
    rows = sw.run_sweep(spec, tiny_config(ignitions=[(14.5, 14.5)], max_sim_time=2.0))
    assert [(r.v, r.f) for r in rows] == [(10.0, 30.0), (10.0, 30.0), (5.0, 40.0), (5.0, 40.0)]
    assert [r.id for r in rows] == [0, 1, 2, 3]
    assert all(r.termination_reason == "time budget exceeded" for r in rows)


def test_csv_ratios_recomputed_from_counts():
    row = sw.SweepRow(0, 15.0, 30.0, 244, 182.0, "mission complete", 5460)
    line = sw.format_csv([row]).splitlines()[1]
    assert line == "0,15.000000000,30.000000000,244,182.000000000,2.000000000,1.340659341"
    parsed = sw.parse_csv(sw.format_csv([row]))[0]
    assert parsed["C"] == 244 and parsed["f_over_v"] == 2.0


REFERENCE_ROWS = [
    (1, 5, 30, 0, 551), (2, 10, 30, 7, 264), (3, 15, 30, 244, 182), (4, 20, 30, 1019, 169),
    (5, 20, 40, 243, 167), (6, 20, 50, 36, 159), (7, 30, 80, 1, 127),
]


def table_rows(ids):
    return [sw.SweepRow(i, float(v), float(f), c, float(t), "mission complete", 0) for i, v, f, c, t in REFERENCE_ROWS if i in ids]


def read_series(path):
    return [tuple(map(float, ln.split())) for ln in path.read_text().splitlines()]


def test_plot_series_speed_trend(tmp_path):
    by_v, by_ratio = sw.emit_plot_data(table_rows({1, 2, 3, 4}), tmp_path)
    pts = read_series(by_v)
    assert [p[0] for p in pts] == [5.0, 10.0, 15.0, 20.0]
    assert all(a[1] < b[1] for a, b in zip(pts, pts[1:]))
    assert len(read_series(by_ratio)) == 4


def test_plot_series_single_row(tmp_path):
    by_v, by_ratio = sw.emit_plot_data(table_rows({6}), tmp_path)
    assert len(read_series(by_v)) == 1 and len(read_series(by_ratio)) == 1


def test_plot_series_equal_ratio_rows(tmp_path):
    _, by_ratio = sw.emit_plot_data(table_rows({3, 5}), tmp_path)
    (x1, y1), (x2, y2) = read_series(by_ratio)
    assert x1 == x2 == 2.0
    assert abs(y1 - y2) / max(y1, y2) < 0.1


def test_plot_rejects_empty(tmp_path):
    with pytest.raises(ValueError):
        sw.emit_plot_data([], tmp_path)


def test_load_sweep_spec(tmp_path):
    p = tmp_path / "s.sweep"
    p.write_text("[sweep]\npairs =\n    5, 30\n    20, 50\nrepetitions = 2\noutput = t.csv\n")
    spec = sw.load_sweep_spec(p)
    assert spec == sw.SweepSpec(((5.0, 30.0), (20.0, 50.0)), 2, "t.csv")
    assert len(sw.load_sweep_spec(SCENARIOS / "speed_frequency.sweep").pairs) == 7


# --- command line -----------------------------------------------------------


def write_tiny(tmp_path, extra=""):
    text = cfg.dumps(tiny_config(ignitions=[(14.5, 14.5)], drones=3)) + extra
    p = tmp_path / "tiny.ini"
    p.write_text(text)
    return p


def test_cli_validate_prints_canonical(tmp_path, capsys):
    p = write_tiny(tmp_path)
    assert main(["validate", "--config", str(p)]) == 0
    assert capsys.readouterr().out == p.read_text()


def test_cli_validate_error_exit(tmp_path, capsys):
    p = tmp_path / "bad.ini"
    p.write_text("[swarm]\nk_ca = 1.2\n")
    assert main(["validate", "--config", str(p)]) != 0
    assert "0 <= k_ca < 1" in capsys.readouterr().err


def test_cli_run_outputs(tmp_path):
    p = write_tiny(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--config", str(p), "--out", str(out), "--dump-ticks", "--collision-mode", "per-tick"]) == 0
    assert {f.name for f in out.iterdir()} == {"config.ini", "result.json", "events.csv", "metrics.csv", "ticks.jsonl"}
    assert "collision_mode = per-tick" in (out / "config.ini").read_text()
    assert (out / "metrics.csv").read_text().startswith("id,v,f,C,T,f_over_v,C_over_T\n0,")
    assert len((out / "ticks.jsonl").read_text().splitlines()) > 0


def test_cli_sweep_byte_identical(tmp_path):
    p = write_tiny(tmp_path)
    spec = tmp_path / "s.sweep"
    spec.write_text("[sweep]\npairs = 5, 30; 10, 30\n")
    assert main(["sweep", str(spec), "--config", str(p), "--out", str(tmp_path / "a")]) == 0
    assert main(["sweep", str(spec), "--config", str(p), "--out", str(tmp_path / "b"), "--jobs", "2"]) == 0
    for name in ("sweep.csv", "sweep_status.csv", "ct_vs_v.dat", "ct_vs_f_over_v.dat"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_missing_spec(tmp_path):
    assert main(["sweep", str(tmp_path / "none.sweep"), "--out", str(tmp_path)]) != 0
