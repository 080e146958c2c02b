import csv
import io
import json
import math

import pytest

from faraday_bell import bell, cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_maximal_rotation(capsys):
    code, out, _ = run(capsys, "simulate", "--alpha-a", str(math.pi / 2), "--alpha-b", str(math.pi / 2))
    assert code == 0
    report = json.loads(out)
    assert abs(report["chsh_max"] - 2 * math.sqrt(2)) < 1e-9
    assert abs(report["herald_probability"] - 0.25) < 1e-12
    assert abs(report["chsh_at_optimal_settings"] - report["chsh_max"]) < 1e-9


def test_simulate_half_rotation_is_classical(capsys):
    code, out, _ = run(capsys, "simulate", "--alpha-a", str(math.pi / 2), "--alpha-b", "0")
    assert code == 0
    assert abs(json.loads(out)["chsh_max"] - 2) < 1e-9


def test_simulate_singlet_threshold(capsys):
    code, out, _ = run(capsys, "simulate", "--t-over-tau", "0.3466")
    assert abs(json.loads(out)["chsh_max"] - 2) < 1e-3


def test_simulate_degrees(capsys):
    _, out, _ = run(capsys, "simulate", "--degrees", "--alpha-a", "90", "--alpha-b", "90")
    assert abs(json.loads(out)["chsh_max"] - 2 * math.sqrt(2)) < 1e-9


def test_simulate_no_heralding_exits_3(capsys):
    code, _, err = run(capsys, "simulate", "--alpha-a", "0", "--alpha-b", "0")
    assert code == 3
    assert "no heralding possible" in json.loads(err)["message"]


def test_compare_quoted(capsys):
    code, out, _ = run(capsys, "simulate", "--compare-quoted")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 4
    assert {r["chsh_quoted"] for r in rows} == {2.32, 2.45}
    for r in rows:
        assert abs(r["chsh_computed_pure"] - r["chsh_closed_form"]) < 1e-9


def test_unknown_override_exits_2(capsys):
    code, _, err = run(capsys, "plan", "--set", "colour=red")
    assert code == 2
    assert "colour" in err


def test_invalid_override_value_exits_2(capsys):
    code, _, _ = run(capsys, "plan", "--set", "eta_c=1.5")
    assert code == 2


def test_missing_profile_file_exits_2(capsys, tmp_path):
    code, _, _ = run(capsys, "plan", "--profile", str(tmp_path / "nope.yaml"))
    assert code == 2


def test_fig2_table(capsys):
    code, out, _ = run(capsys, "fig2")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert tuple(rows[0]) == bell.FIG2_COLUMNS
    assert len(rows) == 1 + 4 * 200


def test_plan_atoms(capsys):
    code, out, _ = run(capsys, "plan", "--profile", "atoms")
    report = json.loads(out)
    assert code == 0
    assert abs(report["min_d"] - 150) < 5
    assert all(report["constraints_ok"].values())


def test_plan_override_changes_rate(capsys):
    _, out, _ = run(capsys, "plan", "--distance", "300")
    _, out2, _ = run(capsys, "plan", "--distance", "300", "--set", "eta_d=0.6")
    a, b = json.loads(out), json.loads(out2)
    assert math.isclose(b["herald_rate"], 4 * a["herald_rate"], rel_tol=1e-9)


def test_cavity_sweep_ratio_four(capsys):
    code, out, _ = run(capsys, "cavity-sweep")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    row = next(r for r in rows if float(r["ratio"]) == 4)
    assert abs(float(row["sin_rotation_max"])) > 0.99


def test_fig3_positive_at_100_km(capsys):
    code, out, _ = run(capsys, "fig3", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    row = next(r for r in rows if r["distance_km"] == 100)
    assert row["key_rate_bits_per_s"] > 0


@pytest.mark.parametrize("argv", [["fig2", "--n-mean", "20"], ["plan"], ["cavity-sweep"], ["fig3"]])
def test_output_deterministic_with_sidecar(tmp_path, argv):
    paths = [tmp_path / f"run{i}.out" for i in range(2)]
    for p in paths:
        assert cli.main(argv + ["-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    sidecar = json.loads((tmp_path / "run0.out.provenance.json").read_text())
    assert sidecar["command"] == argv[0]
