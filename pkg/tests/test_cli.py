import json
import subprocess
import sys

import numpy as np
import pytest

from sphereadvect.cli import main, read_curve_csv


def run_cli(*argv):
    return main([str(a) for a in argv])


def test_run_writes_all_snapshots(tmp_path):
    assert run_cli("run", "--scheme", "seno3", "--n", 32, "--out", tmp_path) == 0
    snaps = sorted(tmp_path.glob("snapshot_*.csv"))
    assert len(snaps) == 41
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["configs"][0]["n"] == 32
    assert len(manifest["files"]) == 41
    table = read_curve_csv(snaps[-1])
    assert table.shape == (32, 5)
    assert (tmp_path / snaps[0].name).read_text().splitlines()[0] == "s,x,y,z,norm"


def test_final_snapshot_only(tmp_path):
    run_cli("run", "--n", 16, "--snapshots", "final", "--tfinal", 0.5, "--out", tmp_path)
    assert [p.name for p in tmp_path.glob("snapshot_*.csv")] == ["snapshot_00005.csv"]


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--n", "7"],
        ["run", "--dt", "0"],
        ["run", "--ic", "discontinuous", "--n", "33"],
        ["converge", "--nmin", "48", "--nmax", "96"],
        ["converge", "--nmin", "64", "--nmax", "64"],
    ],
)
def test_invalid_arguments_exit_2(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 2


def test_unknown_choices_exit_2(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["figure", "nonsense", "--out", str(tmp_path)])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["run", "--scheme", "weno", "--out", str(tmp_path)])
    assert info.value.code == 2


@pytest.mark.parametrize("scheme", ["linear", "mcubic-proj", "slerp", "seno2", "seno3"])
def test_exact_shift(tmp_path, scheme):
    # c = 1 and dt = 3 ds: every step moves the curve by exactly three nodes
    n, dt = 128, 3 / 128
    run_cli("run", "--scheme", scheme, "--n", n, "--velocity", "constant",
            "--dt", dt, "--tfinal", 40 * dt, "--out", tmp_path)
    first = read_curve_csv(tmp_path / "snapshot_00000.csv")[:, 1:4]
    last = read_curve_csv(tmp_path / "snapshot_00040.csv")[:, 1:4]
    np.testing.assert_allclose(last, np.roll(first, 120, axis=0), atol=1e-12)


def test_converge_csv(tmp_path, capsys):
    assert run_cli("converge", "--scheme", "slerp", "--nmin", 32, "--nmax", 128,
                   "--out", tmp_path) == 0
    lines = (tmp_path / "errors_slerp.csv").read_text().splitlines()
    assert lines[0] == "N,E1,order1,E2,order2"
    assert [line.split(",")[0] for line in lines[1:]] == ["32", "64", "128"]
    assert lines[1].split(",")[2] == ""
    assert "fitted slope" in capsys.readouterr().out


def test_converge_zero_velocity_excluded(tmp_path, capsys):
    run_cli("converge", "--scheme", "seno3", "--nmin", 16, "--nmax", 32,
            "--velocity", "constant", "--speed", 0, "--out", tmp_path)
    assert "excluded" in capsys.readouterr().out
    rows = (tmp_path / "errors_seno3.csv").read_text().splitlines()[1:]
    assert all(float(r.split(",")[1]) <= 1e-13 for r in rows)


def test_figure_smooth(tmp_path):
    assert run_cli("figure", "smooth", "--out", tmp_path) == 0
    csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert len(csvs) == 8 and "exact.csv" in csvs
    table = read_curve_csv(tmp_path / "seno3.csv")
    assert table.shape == (128, 5)
    for name in ("slerp", "seno2", "seno3", "linear-proj", "mcubic-proj"):
        norms = read_curve_csv(tmp_path / f"{name}.csv")[:, 4]
        np.testing.assert_allclose(norms, 1, atol=1e-12)


def test_figure_kinks_seno3_beats_slerp(tmp_path):
    from sphereadvect.metrics import masked_error

    run_cli("figure", "kinks", "--out", tmp_path)
    exact = read_curve_csv(tmp_path / "exact.csv")[:, 1:4]
    seno3 = read_curve_csv(tmp_path / "seno3.csv")[:, 1:4]
    slerp = read_curve_csv(tmp_path / "slerp.csv")[:, 1:4]
    assert masked_error(seno3, exact) < masked_error(slerp, exact)


def test_figure_discontinuous(tmp_path):
    run_cli("figure", "discontinuous", "--out", tmp_path)
    assert read_curve_csv(tmp_path / "seno3.csv").shape == (512, 5)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert {c["velocity"]["kind"] for c in manifest["configs"]} == {"constant"}


def test_figure_convergence_kinks(tmp_path):
    run_cli("figure", "convergence-kinks", "--nmin", 32, "--nmax", 64, "--out", tmp_path)
    assert sorted(p.name for p in tmp_path.glob("errors_*.csv")) == [
        "errors_seno2.csv", "errors_seno3.csv", "errors_slerp.csv"
    ]


def test_digits_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SPHEREADVECT_DIGITS", "5")
    run_cli("run", "--n", 16, "--snapshots", "final", "--tfinal", 0.2, "--out", tmp_path)
    row = (tmp_path / "snapshot_00002.csv").read_text().splitlines()[2]
    assert all(len(f.lstrip("-").replace(".", "").replace("e", "")) <= 8 for f in row.split(","))
    monkeypatch.setenv("SPHEREADVECT_DIGITS", "many")
    assert run_cli("run", "--n", 16, "--out", tmp_path) == 2


def test_deterministic_output(tmp_path):
    for d in ("a", "b"):
        run_cli("run", "--n", 32, "--scheme", "seno3", "--tfinal", 1, "--out", tmp_path / d)
    for f in (tmp_path / "a").glob("snapshot_*.csv"):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_degenerate_input_exit_3(tmp_path, monkeypatch):
    import sphereadvect.solver as solver

    def broken(self, n):
        pts = np.tile([1.0, 0.0, 0.0], (n, 1))
        pts[1::2] *= -1
        return solver.SphereCurve(pts)

    monkeypatch.setattr(solver.CylindricalIC, "sample", broken)
    assert run_cli("run", "--n", 16, "--out", tmp_path) == 3


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "sphereadvect", "run", "--n", "16", "--snapshots", "final",
         "--tfinal", "0.1", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert out.returncode == 0, out.stderr
    assert (tmp_path / "snapshot_00001.csv").exists()
