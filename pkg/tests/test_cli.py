import io
import json
import math
from importlib import resources

import jsonschema
import pytest

from rlpwidth.cli import main, read_sweep_csv, sweep_csv, sweep_rows
from rlpwidth.lp import load_instance


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def schema():
    text = resources.files("rlpwidth").joinpath("schema/run_record.schema.json").read_text()
    return json.loads(text)


def run_json(schema, *argv):
    code, out, err = run(*argv, "--json")
    assert code == 0, err
    record = json.loads(out)
    jsonschema.validate(record, schema)
    return record


def test_theory_text():
    code, out, _ = run("theory", "--alpha", "20", "--a-const", "1")
    assert code == 0
    assert "xi_opt      0.504024" in out


def test_theory_json(schema):
    rec = run_json(schema, "theory", "--alpha", "20")
    assert rec["command"] == "theory"
    assert rec["results"]["xi_opt"] == pytest.approx(0.50402, abs=5e-6)
    assert rec["backend"] in ("python", "cython")
    # round trip through JSON loses nothing
    assert json.loads(json.dumps(rec)) == rec


def test_theory_csv():
    code, out, _ = run("theory", "--alpha", "40", "--csv")
    header, row = out.strip().splitlines()
    assert header.startswith("alpha,xi_opt")
    assert float(row.split(",")[1]) == pytest.approx(0.43907, abs=5e-6)


def test_theory_gaussian_degenerate_matches_constant(schema):
    a = run_json(schema, "theory", "--alpha", "20", "--a-gaussian", "1,0")
    b = run_json(schema, "theory", "--alpha", "20")
    assert a["results"]["xi_opt"] == pytest.approx(b["results"]["xi_opt"], abs=1e-10)


def test_theory_vector_file(tmp_path, schema):
    path = tmp_path / "a.txt"
    path.write_text(" ".join(["1.0"] * 100))
    rec = run_json(schema, "theory", "--alpha", "20", "--a-file", str(path))
    assert rec["config"]["rhs"] == {"kind": "vector", "m": 100, "n": 5}
    assert rec["results"]["xi_opt"] == pytest.approx(0.50402, abs=5e-6)


def test_theory_failure_exit_code():
    code, _, err = run("theory", "--alpha", "1.5")
    assert code == 3
    assert "ConvergenceError" in err and "diagnostics" in err


def test_theory_no_feasible_scale():
    code, _, err = run("theory", "--alpha", "20", "--a-const", "-1")
    assert code == 3 and "NoFeasibleScaleError" in err


@pytest.mark.parametrize("argv", [
    ("theory",),
    ("theory", "--alpha", "-3"),
    ("theory", "--alpha", "20", "--a-const", "1", "--a-gaussian", "1,0"),
    ("theory", "--alpha", "20", "--a-gaussian", "1,-1"),
    ("theory", "--alpha", "20", "--tol", "0.1"),
    ("simulate", "--alpha", "20", "--trials", "1"),
    ("simulate", "--alpha", "20", "--seed", "-1"),
    ("sweep", "--alpha-min", "10", "--alpha-max", "5"),
    ("nope",),
])
def test_usage_errors(argv):
    code, _, _ = run(*argv)
    assert code == 2


def test_missing_a_file(tmp_path):
    code, _, err = run("theory", "--alpha", "20", "--a-file", str(tmp_path / "missing.txt"))
    assert code == 2 and "--a-file" in err


def test_simulate_outputs(tmp_path, schema):
    csv_path, inst_path = tmp_path / "trials.csv", tmp_path / "inst.txt"
    rec = run_json(schema, "simulate", "--alpha", "20", "--n", "5", "--trials", "6", "--seed", "3",
                   "--out", str(csv_path), "--dump-instance", str(inst_path), "--dump-trial", "2")
    res = rec["results"]
    assert len(res["values"]) == 6
    assert res["theory"] == pytest.approx(0.50402, abs=5e-6)
    assert res["relative_difference"] == pytest.approx((res["mean"] - res["theory"]) / res["theory"])
    assert csv_path.read_text().count("\n") == 7
    inst = load_instance(inst_path)
    assert (inst.m, inst.n) == (100, 5)

    code, out, _ = run("solve", "--load-instance", str(inst_path), "--json")
    solved = json.loads(out)
    jsonschema.validate(solved, schema)
    assert solved["results"]["normalized_magnitude"] == pytest.approx(res["values"][2], rel=1e-12)


def test_simulate_text():
    code, out, _ = run("simulate", "--alpha", "20", "--n", "4", "--trials", "4")
    assert code == 0
    assert "simulated" in out and "theory" in out


def test_simulate_csv_deterministic_across_workers(tmp_path):
    paths = [tmp_path / "w1.csv", tmp_path / "w4.csv"]
    for path, workers in zip(paths, ("1", "4")):
        assert run("simulate", "--alpha", "20", "--n", "5", "--trials", "8", "--seed", "11",
                   "--workers", workers, "--out", str(path))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_simulate_warns_on_unbounded(schema):
    code, out, err = run("simulate", "--alpha", "2", "--n", "1", "--trials", "20", "--json")
    assert code == 0
    assert "warning" in err
    rec = json.loads(out)
    jsonschema.validate(rec, schema)
    assert rec["results"]["theory"] is None


def test_dump_trial_range(tmp_path):
    code, _, _ = run("simulate", "--alpha", "20", "--n", "3", "--trials", "2",
                     "--dump-instance", str(tmp_path / "x.txt"), "--dump-trial", "5")
    assert code == 2


def test_solve_missing_file(tmp_path):
    assert run("solve", "--load-instance", str(tmp_path / "none.txt"))[0] == 2


def test_solve_text(tmp_path):
    path = tmp_path / "box.txt"
    path.write_text("2 1\n1\n-1\n1 1\n1\n")
    code, out, _ = run("solve", "--load-instance", str(path))
    assert code == 0
    assert "status     optimal" in out and "objective  -1" in out


def test_table1_skip_sim(schema):
    rec = run_json(schema, "table1", "--skip-sim")
    rows = rec["results"]
    assert [r["alpha"] for r in rows] == [20, 40, 120, 200, 400]
    for r in rows:
        assert r["theory"] == pytest.approx(r["reference_theory"], abs=5e-6)
        assert r["simulated_mean"] is None


def test_table1_small_sim():
    code, out, _ = run("table1", "--trials", "3", "--max-alpha", "20", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2 and lines[1].split()[0] == "20"


def test_sweep_csv_roundtrip(tmp_path, schema):
    path = tmp_path / "sweep.csv"
    rec = run_json(schema, "sweep", "--alpha-min", "0.5", "--alpha-max", "1e6", "--points", "9",
                   "--out", str(path))
    rows = read_sweep_csv(path.read_text())
    assert len(rows) == 9
    assert rows[0]["xi_opt"] is None and rows[0]["asymptote"] is None
    for got, want in zip(rows, rec["results"]):
        assert got == want
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None]
    assert all(a > b > 1 for a, b in zip(ratios, ratios[1:]))


def test_sweep_text_goes_to_stdout():
    code, out, err = run("sweep", "--alpha-min", "1", "--alpha-max", "4", "--points", "3")
    assert code == 0
    assert out.splitlines()[0] == "alpha,xi_opt,asymptote,ratio"
    assert "asymptote undefined" in err


def test_sweep_csv_exact():
    rows = sweep_rows(10, 1000, 3)
    assert read_sweep_csv(sweep_csv(rows)) == rows
    assert rows[1]["alpha"] == pytest.approx(100.0)
    assert rows[1]["ratio"] == pytest.approx(rows[1]["xi_opt"] * math.sqrt(2 * math.log(100)))


def test_version(capsys):
    code, _, _ = run("--version")
    assert code == 0 and "0.1.0" in capsys.readouterr().out


def test_theory_homogeneity_flag(schema):
    two = run_json(schema, "theory", "--alpha", "40", "--a-const", "2.0")["results"]["xi_opt"]
    one = run_json(schema, "theory", "--alpha", "40", "--a-const", "1.0")["results"]["xi_opt"]
    assert two == pytest.approx(2 * one, rel=1e-8)
    assert two == pytest.approx(0.87814, abs=1e-5)


def test_simulate_one_dimensional_smoke(tmp_path):
    path = tmp_path / "t.csv"
    code, _, _ = run("simulate", "--alpha", "20", "--n", "1", "--trials", "5", "--seed", "7", "--out", str(path))
    assert code == 0
    rows = path.read_text().strip().splitlines()[1:]
    assert len(rows) == 5
    assert all(float(r.split(",")[6]) >= 0 for r in rows if r.split(",")[6])


def test_table1_trials_validation():
    assert run("table1", "--trials", "1")[0] == 2


def test_sweep_wide_range_monotone():
    rows = read_sweep_csv(run("sweep", "--alpha-min", "10", "--alpha-max", "1e9", "--points", "19")[1])
    dev = [abs(r["ratio"] - 1) for r in rows]
    assert all(a > b for a, b in zip(dev, dev[1:]))


def test_sweep_single_point():
    rows = read_sweep_csv(run("sweep", "--alpha-min", "20", "--alpha-max", "20", "--points", "1")[1])
    assert len(rows) == 1
    assert rows[0]["xi_opt"] == pytest.approx(0.50402, abs=5e-6)


@pytest.mark.slow
def test_table1_simulation_up_to_120(schema):
    rec = run_json(schema, "table1", "--trials", "200", "--seed", "1", "--max-alpha", "120", "--workers", "4")
    rows = rec["results"]
    assert [r["alpha"] for r in rows] == [20, 40, 120]
    assert all(abs(r["relative_difference"]) < 0.015 for r in rows)
