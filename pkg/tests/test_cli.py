import numpy as np
import pytest

from patchshock import files
from patchshock.analysis import max_error
from patchshock.cli import main
from patchshock.oracle import ColeHopfOracle
from patchshock.model import make_archetype

SHORT_M1 = """\
[problem]
name = M1
t_final = 0.3

[stepper]
outputs = 4
"""


@pytest.fixture
def short_config(tmp_path):
    path = tmp_path / "m1.ini"
    path.write_text(SHORT_M1)
    return path


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert out.count("\n") == 4 and out.startswith("M1:")


def test_run_writes_trajectory(short_config, tmp_path):
    out = tmp_path / "run"
    assert main(["run", "--config", str(short_config), "--out", str(out)]) == 0
    lines = (out / "macro.csv").read_text().splitlines()
    assert lines[0] == "time,node_position,node_role,value"
    assert len(lines) == 1 + 4 * 6
    assert {ln.split(",")[2] for ln in lines[1:]} == {"centre", "shock_left", "shock_right"}


def test_unknown_archetype(tmp_path, capsys):
    assert main(["run", "--problem", "M9", "--out", str(tmp_path)]) == 1
    assert "M9" in capsys.readouterr().err


def test_bad_layout_line(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text(SHORT_M1 + "\n[layout]\ngamma = 1\npatches =\n    0.0, 0.1, 4, standard\n")
    assert main(["run", "--config", str(path), "--out", str(tmp_path)]) == 1
    assert "odd" in capsys.readouterr().err


def test_quadrature_refused_for_nonlinear_diffusivity(tmp_path, capsys):
    assert main(["compare", "--problem", "M3", "--oracle", "quadrature", "--out", str(tmp_path)]) == 1
    assert "nonlinear" in capsys.readouterr().err


def test_blowup_exit_code(tmp_path, capsys):
    path = tmp_path / "fast.ini"
    path.write_text(SHORT_M1 + "dt = 0.05\n")
    assert main(["run", "--config", str(path), "--out", str(tmp_path)]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_runs_are_byte_identical(short_config, tmp_path):
    for name in ("a", "b"):
        assert main(["run", "--config", str(short_config), "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "a" / "macro.csv").read_bytes() == (tmp_path / "b" / "macro.csv").read_bytes()


def test_compare_report_reproducible_from_file(short_config, tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", "--config", str(short_config), "--out", str(out)]) == 0
    report = (out / "report.txt").read_text()
    assert "oracle: quadrature" in report

    trajectory = files.read_trajectory_csv(out / "macro.csv")
    oracle = ColeHopfOracle(make_archetype("M1").with_final_time(0.3))
    again = max_error(trajectory, oracle)
    assert f"global_max: {again.global_max:.12g}" in report
    assert again.global_max < 2e-4


def test_print_config_round_trip(short_config, tmp_path, capsys):
    assert main(["run", "--config", str(short_config), "--print-config"]) == 0
    expanded = capsys.readouterr().out
    assert "[stepper]" in expanded and "double 1 1" in expanded

    path = tmp_path / "expanded.ini"
    path.write_text(expanded)
    for name, cfg in (("a", short_config), ("b", path)):
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "a" / "macro.csv").read_bytes() == (tmp_path / "b" / "macro.csv").read_bytes()


def test_oracle_command(short_config, tmp_path):
    out = tmp_path / "orc"
    path = tmp_path / "orc.ini"
    path.write_text(SHORT_M1 + "\n[oracle]\nsamples = 8\n")
    assert main(["oracle", "--config", str(path), "--out", str(out)]) == 0
    lines = (out / "oracle-quadrature.csv").read_text().splitlines()
    assert len(lines) == 1 + 4 * 8
    u = np.array([float(ln.split(",")[2]) for ln in lines[1:]])
    assert np.all(np.abs(u) <= 1.0)
