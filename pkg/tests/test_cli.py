import csv
import io
import json
import subprocess
import sys

import pytest

from loggamma_ldp import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_b_solve_example(capsys):
    code, out, _ = run(capsys, "b-solve", "--s", "0.5", "--theta", "0")
    assert code == 0
    d = json.loads(out)
    assert set(d) == {"s", "theta", "b", "residual_H", "s_star"}
    assert d["b"] == pytest.approx(3.4641016151377544, rel=1e-12)
    assert d["s_star"] == 1.0


def test_rate_table_example(capsys):
    code, out, _ = run(capsys, "rate-table", "--s-min", "0.2", "--s-max", "0.9", "--points", "8", "--theta", "0.3")
    assert code == 0
    r = rows(out)
    assert len(r) == 8
    assert list(r[0]) == ["s", "theta", "b", "f", "F", "residual_H", "refine_delta"]
    assert all(float(x["F"]) > 0 for x in r)
    assert float(r[0]["s"]) == 0.2 and float(r[-1]["s"]) == 0.9


def test_rate_table_bad_rows(capsys):
    code, out, err = run(capsys, "rate-table", "--s-min", "0.5", "--s-max", "2", "--points", "2", "--theta", "0.3")
    assert code == 1
    r = rows(out)
    assert r[0]["F"] != "nan" and r[1]["F"] == "nan"
    assert "DomainError" in err


def test_unknown_flag(capsys):
    code = None
    with pytest.raises(SystemExit) as exc:
        cli.main(["b-solve", "--s", "0.5", "--theta", "0", "--bogus"])
    code = exc.value.code
    out, err = capsys.readouterr()
    assert code == 2 and out == ""
    assert "unrecognized" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["b-solve", "--s", "0.5", "--theta", "1.5"],
        ["b-solve", "--s", "-1", "--theta", "0.3"],
        ["b-solve", "--s", "nan", "--theta", "0.3"],
        ["simulate", "--n", "0", "--theta", "0.3", "--samples", "10"],
        ["simulate", "--n", "5", "--theta", "0", "--samples", "10"],
        ["simulate", "--n", "5", "--theta", "0.3", "--samples", "10", "--seed", "-4"],
        ["fredholm-q", "--s", "0.5", "--n", "4", "--theta", "1"],
        ["ansatz-gap", "--s", "0.5", "--theta", "0.3", "--n-list", "4,x"],
        ["rate-table", "--s-min", "0.2", "--s-max", "0.9", "--points", "8", "--theta", "0.3", "--m-cheb1", "4"],
    ],
)
def test_range_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    out, err = capsys.readouterr()
    assert exc.value.code == 2 and out == ""
    assert "error" in err


def test_domain_error_in_command_exits_2(capsys):
    # s beyond s* is rejected by the solver rather than by the parser
    code, out, err = run(capsys, "b-solve", "--s", "1.5", "--theta", "0.3")
    assert code == 2 and out == ""
    assert "error" in err


def test_verify_bad_criterion(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "11")
    assert code == 2 and out == ""


def test_simulate_deterministic(capsys):
    argv = ["simulate", "--n", "20", "--theta", "0.3", "--samples", "600", "--seed", "5"]
    outs = [run(capsys, *argv, "--threads", t)[1] for t in ("1", "1", "3")]
    assert outs[0] == outs[1] == outs[2]
    r = rows(outs[0])[0]
    assert r["n"] == "20" and r["samples"] == "600" and r["seed"] == "5"
    assert float(r["stderr"]) ** 2 * 600 == pytest.approx(float(r["var_logZ"]), rel=1e-12)


def test_mc_laplace_json(capsys):
    code, out, _ = run(capsys, "mc-laplace", "--n", "2", "--theta", "0.3", "--u", "0", "--samples", "10")
    assert code == 0
    d = json.loads(out)
    assert d["estimate"] == 1.0 and d["stderr"] == 0.0
    assert set(d) == {"n", "theta", "u", "samples", "seed", "estimate", "stderr"}


def test_fredholm_commands(capsys):
    code, out, _ = run(capsys, "fredholm-laplace", "--u", "1", "--n", "1", "--theta", "0.25")
    assert code == 0
    d = json.loads(out)
    assert d["value_re"] == pytest.approx(0.1353352832366127, abs=1e-10)
    assert {"value_re", "value_im", "imag_residual", "refine_delta", "dims"} <= set(d)
    code, out, _ = run(capsys, "fredholm-q", "--s", "0.5", "--n", "2", "--theta", "0.3", "--kind", "smoothed")
    assert code == 0 and 0 < json.loads(out)["value_re"] < 1


def test_ansatz_gap_csv(capsys):
    code, out, _ = run(capsys, "ansatz-gap", "--s", "0.5", "--theta", "0.3", "--n-list", "2,3")
    assert code == 0
    r = rows(out)
    assert [x["n"] for x in r] == ["2", "3"]
    assert {"logQ", "logQtilde", "gap_over_n2"} <= set(r[0])


def test_mp_check_and_phase_grid(capsys):
    code, out, _ = run(capsys, "mp-check", "--n", "20", "--y", "0.5,2")
    assert code == 0
    r = rows(out)
    assert len(r) == 2 and float(r[1]["mp_density"]) == 0.0
    code, out, _ = run(capsys, "phase-grid", "--s", "1", "--nx", "3", "--ny", "3")
    assert code == 0
    r = rows(out)
    assert len(r) == 9
    assert {x["sign"] for x in r} <= {"-1", "0", "1"}


def test_out_flag(tmp_path, capsys):
    path = tmp_path / "b.json"
    code, out, _ = run(capsys, "b-solve", "--s", "0.5", "--theta", "0", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["b"] == pytest.approx(3.4641016151377544)


def test_help_mentions_formulas(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["b-solve", "--help"])
    out, _ = capsys.readouterr()
    assert exc.value.code == 0
    assert "psi" in out or "h'" in out


def test_verify_subset_and_report(tmp_path, capsys):
    rep = tmp_path / "report.json"
    code, out, err = run(capsys, "verify", "--criteria", "1,4,10", "--report", str(rep))
    assert code == 0
    assert out.splitlines() == ["criterion 1: PASS", "criterion 4: PASS", "criterion 10: PASS"]
    data = json.loads(rep.read_text())
    assert [d["criterion_id"] for d in data] == [1, 4, 10]
    assert all(set(d) >= {"criterion_id", "pass", "measured", "expected", "tolerance"} for d in data)
    assert "criterion" in err


def test_console_script_entry():
    out = subprocess.run(
        [sys.executable, "-m", "loggamma_ldp.cli", "b-solve", "--s", "0.5", "--theta", "0"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["b"] == pytest.approx(3.4641016151377544)
