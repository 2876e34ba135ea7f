import json
import math

import numpy as np
import pytest

from pbgsim.cli import RunConfig, main


def read_csv(path):
    header, columns, rows = [], None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line)
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append(line.split(","))
    return header, columns, rows


def header_value(header, key):
    prefix = f"# {key} = "
    for line in header:
        if line.startswith(prefix):
            return line[len(prefix):]
    raise KeyError(key)


def test_trap_reference_row(tmp_path):
    out = tmp_path / "trap.csv"
    assert main(["trap", "--out", str(out)]) == 0
    header, columns, rows = read_csv(out)
    row = dict(zip(columns, rows[0]))
    assert float(row["height_um"]) == pytest.approx(200.0, rel=1e-12)
    assert float(row["gradient_G_per_cm"]) == pytest.approx(500.0, rel=1e-12)
    assert float(row["m0"]) == pytest.approx(1.1695e-8, rel=1e-3)
    assert float(row["N0"]) == pytest.approx(7.917e-5, rel=1e-3)
    assert float(row["thermal_tuning_Hz"]) == pytest.approx(0.2e9)


def test_header_states_drive_convention(tmp_path):
    out = tmp_path / "trap.csv"
    main(["trap", "--out", str(out)])
    header, _, _ = read_csv(out)
    assert any("n_drive = (E/kappa)^2" in line for line in header)


def test_transit_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["transit", "--detunings", "10,10", "--n-drive", "2", "--seed", "9"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_transit_seed_changes_samples(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["transit", "--n-drive", "1", "--seed", "1", "--out", str(a)])
    main(["transit", "--n-drive", "1", "--seed", "2", "--out", str(b)])
    _, cols, ra = read_csv(a)
    _, _, rb = read_csv(b)
    i = cols.index("sampled_counts_per_bin")
    j = cols.index("expected_counts_per_bin")
    assert [r[j] for r in ra] == [r[j] for r in rb]
    assert [r[i] for r in ra] != [r[i] for r in rb]


def test_qfunc_undriven_is_vacuum_gaussian(tmp_path):
    out = tmp_path / "q.csv"
    assert main(["qfunc", "--n-drive", "0", "--qfunc-points", "61",
                 "--out", str(out)]) == 0
    header, columns, rows = read_csv(out)
    assert float(header_value(header, "normalization")) == pytest.approx(1.0,
                                                                         abs=1e-2)
    assert int(header_value(header, "n_local_maxima")) == 1
    vals = {(float(r[0]), float(r[1])): float(r[2]) for r in rows}
    assert vals[(0.0, 0.0)] == pytest.approx(1.0 / math.pi, rel=1e-10)
    r = float(header_value(header, "grid_radius"))
    assert vals[(r, 0.0)] == pytest.approx(math.exp(-r * r) / math.pi, rel=1e-6)


def test_force_undriven_is_zero(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["force", "--n-drive", "0", "--z-points", "11",
                 "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    i = columns.index("force_N")
    assert all(float(r[i]) == 0.0 for r in rows)


def test_sweep_drive_columns(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep-drive", "--drive-points", "5", "--detunings", "10,0",
                 "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    assert columns[:4] == ["n_drive", "n_photons_atom", "n_photons_empty",
                           "fano_atom"]
    assert len(rows) == 5
    # empty-cavity column is the analytic Lorentzian (theta = 0 here)
    for r in rows:
        assert float(r[2]) == pytest.approx(float(r[0]), rel=1e-9)


def test_bistability_reports_interval(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bistability", "--detunings", "10,0", "--drive-min", "1",
                 "--drive-max", "4", "--drive-points", "200",
                 "--out", str(out)]) == 0
    header, columns, rows = read_csv(out)
    interval = header_value(header, "bistable_intervals_n_drive")
    assert interval.startswith("[")
    lo = float(interval.strip("[]").split(",")[0])
    assert lo == pytest.approx(1.886, abs=0.05)
    assert {r[columns.index("n_roots")] for r in rows} == {"1", "3"}


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"current": 2.0, "bias_gauss": 10.0}))
    out = tmp_path / "t.csv"
    assert main(["trap", "--config", str(cfg), "--bias-gauss", "20",
                 "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    row = dict(zip(columns, rows[0]))
    assert float(row["current_A"]) == 2.0
    assert float(row["bias_field_G"]) == 20.0


def test_unknown_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert main(["trap", "--config", str(cfg), "--out", "-"]) == 2


def test_bad_detunings_is_usage_error(capsys):
    assert main(["trap", "--detunings", "10;0", "--out", "-"]) == 2


def test_numerical_failure_exit_code(tmp_path):
    out = tmp_path / "s.csv"
    rc = main(["sweep-drive", "--drive-points", "2", "--drive-min", "79",
               "--nmax-cap", "10", "--out", str(out)])
    assert rc == 1


def test_jobs_worker_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("PBGSIM_MAX_WORKERS", "1")
    out = tmp_path / "s.csv"
    assert main(["sweep-drive", "--drive-points", "4", "--jobs", "8",
                 "--out", str(out)]) == 0


def test_run_config_paper_defaults():
    p = RunConfig().params()
    assert p.n_drive == pytest.approx(2.0)
    assert p.g0 == pytest.approx(2 * math.pi * 17e9)
