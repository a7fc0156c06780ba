import os

import numpy as np
import pytest

from slabmoments import cli, errors


def test_parse_defaults():
    cfg = cli.parse_config("")
    assert cfg.scenario == "plane_source"
    assert cfg.model == "kershaw"
    assert cfg.n_cells == 1000
    assert cfg.cfl == 0.5


def test_parse_full_config():
    text = """
    # a comment
    scenario = source_beam
    model = mn
    order = 2
    n_cells = 50
    cfl = 0.4
    final_time = 0.1
    output_times = 0.05, 0.1
    """
    cfg = cli.parse_config(text)
    assert cfg.scenario == "source_beam"
    assert cfg.model == "mn"
    assert cfg.order == 2
    assert cfg.output_times == (0.05, 0.1)


def test_parse_errors():
    with pytest.raises(errors.ParseError) as e:
        cli.parse_config("model kershaw")
    assert e.value.line == 1
    with pytest.raises(errors.ParseError):
        cli.parse_config("order = 1\norder = 2")
    with pytest.raises(errors.ValidationError):
        cli.parse_config("bogus = 1")
    with pytest.raises(errors.ValidationError):
        cli.parse_config("order = -3")
    with pytest.raises(errors.ValidationError):
        cli.parse_config("cfl = 1.5")
    with pytest.raises(errors.ValidationError):
        cli.parse_config("model = upwind")
    with pytest.raises(errors.ValidationError):
        cli.parse_config("reference_model = pn")


def test_echo_includes_defaults():
    echo = cli.parse_config("order = 3").echo()
    assert "order=3" in echo and "cfl=0.5" in echo and "n_cells=1000" in echo


def run_cli(argv):
    return cli.main(argv)


def write(path, text):
    path.write_text(text)
    return str(path)


def test_run_command_outputs(tmp_path):
    cfg = write(tmp_path / "r.cfg",
                "scenario = plane_source\nmodel = kershaw\norder = 1\n"
                "n_cells = 40\n")
    assert run_cli(["run", cfg, "--out", str(tmp_path / "o")]) == 0
    prof = tmp_path / "o" / "plane_source_kershaw1_profile.csv"
    diag = tmp_path / "o" / "plane_source_kershaw1_diagnostics.csv"
    assert prof.exists() and diag.exists()
    lines = prof.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "# columns: time,z,u_0,u_1"
    assert len(lines) == 2 + 10 * 40


def test_run_deterministic(tmp_path):
    cfg = write(tmp_path / "r.cfg",
                "model = kershaw\nn_cells = 40\norder = 2\n")
    run_cli(["run", cfg, "--out", str(tmp_path / "a")])
    run_cli(["run", cfg, "--out", str(tmp_path / "b")])
    fa = (tmp_path / "a" / "plane_source_kershaw2_profile.csv").read_bytes()
    fb = (tmp_path / "b" / "plane_source_kershaw2_profile.csv").read_bytes()
    assert fa == fb


def test_sweep_command_errors_table(tmp_path):
    cfg = write(tmp_path / "s.cfg",
                "model = kershaw\norders = 1,2\nn_cells = 40\n"
                "reference_model = pn\nreference_order = 9\n")
    assert run_cli(["sweep", cfg, "--out", str(tmp_path / "o")]) == 0
    table = (tmp_path / "o" / "plane_source_errors.csv").read_text()
    rows = [l for l in table.splitlines() if not l.startswith("#")]
    assert len(rows) == 2
    l1 = [float(r.split(",")[2]) for r in rows]
    assert l1[1] < l1[0]


def test_sweep_requires_orders(tmp_path):
    cfg = write(tmp_path / "s.cfg", "model = kershaw\nn_cells = 40\n")
    assert run_cli(["sweep", cfg, "--out", str(tmp_path / "o")]) == 2


def test_sweep_parallel_matches_serial(tmp_path, monkeypatch):
    cfg = write(tmp_path / "s.cfg",
                "model = kershaw\norders = 1,2\nn_cells = 40\n")
    run_cli(["sweep", cfg, "--out", str(tmp_path / "ser")])
    monkeypatch.setenv("SLABMOMENTS_JOBS", "2")
    run_cli(["sweep", cfg, "--out", str(tmp_path / "par")])
    for name in ("plane_source_kershaw1_profile.csv",
                 "plane_source_kershaw2_profile.csv"):
        assert (tmp_path / "ser" / name).read_bytes() == \
            (tmp_path / "par" / name).read_bytes()


def test_surface_command_masking(tmp_path):
    cfg = write(tmp_path / "s.cfg",
                "model = kershaw\norder = 2\nsurface_samples = 30\n")
    assert run_cli(["surface", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = [l.split(",") for l in
            (tmp_path / "o" / "surface_kershaw2.csv").read_text().splitlines()
            if not l.startswith("#")]
    assert len(rows) == 30 * 30
    for p1, p2, p3 in rows:
        realizable = float(p2) >= float(p1) ** 2
        assert (p3 != "") == realizable
        if realizable:
            assert np.isfinite(float(p3))


def test_missing_config_exit_code(tmp_path):
    assert run_cli(["run", str(tmp_path / "absent.cfg")]) == 2


def test_bad_value_exit_code(tmp_path):
    cfg = write(tmp_path / "r.cfg", "cfl = nope\n")
    assert run_cli(["run", cfg, "--out", str(tmp_path / "o")]) == 2
