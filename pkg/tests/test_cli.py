import io
import json
import subprocess
import sys

import pytest

from netohm import io as nio
from netohm.cli import main


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_pipe_solve(capsys, monkeypatch):
    code, net_text, _ = run(capsys, "gen", "--example", "g1")
    assert code == 0
    code, out, _ = run(capsys, "solve", "--f", "1,0,0", stdin=net_text, monkeypatch=monkeypatch)
    assert code == 0
    rep = json.loads(out)
    assert abs(rep["experiments"][0]["by_id"]["4"] - 1 / 3) <= 1e-14


def test_console_script_pipeline():
    gen = subprocess.run([sys.executable, "-m", "netohm", "gen", "--example", "g1"],
                         capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "netohm", "solve", "--f", "1,0,0"],
                         input=gen.stdout, capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["experiments"][0]["by_id"]["4"] == pytest.approx(1 / 3, abs=1e-14)


@pytest.mark.parametrize("name", ["g1", "g2", "g3", "g3eps", "grid", "figdet", "path"])
def test_gen_round_trip_is_byte_identical(capsys, tmp_path, name):
    path = tmp_path / "net.json"
    assert main(["gen", "--example", name, "--out", str(path)]) == 0
    capsys.readouterr()
    nf = nio.load_network(path)
    again = nio.dumps_network(nf.net, nf.sigma, nf.sigma_imag, nf.q, nf.q_imag)
    assert again == path.read_text()


def test_certify_g2_mu1(capsys):
    code, out, _ = run(capsys, "certify", "--example", "g2", "--mu", "1.0",
                       "--variant", "real_conductivity", "--bc", "paper")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "fail" and rep["failed"] == ["iii"]
    iii = [a for a in rep["assumptions"] if a["name"] == "iii"][0]
    assert iii["margin"] == pytest.approx(0.0, abs=1e-14)


def test_jacobian_g3(capsys, tmp_path):
    mat = tmp_path / "A.csv"
    code, out, _ = run(capsys, "jacobian", "--example", "g3", "--variant", "two_freq_conductivity",
                       "--N", "3", "--matrix-out", str(mat))
    rep = json.loads(out)
    assert code == 0 and rep["rank"] == 64 and (rep["rows"], rep["cols"]) == (84, 64)
    rows = mat.read_text().splitlines()
    assert len(rows) == 84 and len(rows[0].split(",")) == 64


def test_power_csv(capsys):
    code, out, _ = run(capsys, "power", "--example", "g1", "--variant", "real_conductivity",
                       "--bc", "paper", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "id,H1" and len(lines) == 4


def test_thermal_needs_seed_for_mc(capsys):
    code, out, err = run(capsys, "thermal", "--example", "figdet", "--mode", "mc")
    assert code == 1 and out == "" and "--seed" in err


def test_thermal_reports(capsys, tmp_path):
    code, out, _ = run(capsys, "thermal", "--example", "figdet", "--mode", "analytic")
    assert code == 0 and json.loads(out)["relative_error"]["interior_edges"] <= 1e-10
    cov = tmp_path / "cov.csv"
    argv = ["thermal", "--example", "figdet", "--mode", "mc", "--realizations", "2000",
            "--seed", "5", "--cov-out", str(cov)]
    code, a, _ = run(capsys, *argv)
    code2, b, _ = run(capsys, *argv)
    assert code == code2 == 0 and a == b
    assert cov.read_text().startswith("experiment,row,col,value")


def test_reconstruct_pipeline(capsys, tmp_path):
    net = tmp_path / "net.json"
    data = tmp_path / "data.json"
    hist = tmp_path / "hist.csv"
    table = tmp_path / "table.csv"
    main(["gen", "--example", "grid", "--n", "5", "--out", str(net)])
    capsys.readouterr()
    code, out, _ = run(capsys, "power", "--net", str(net), "--variant", "real_conductivity", "--bc", "paper")
    assert code == 1  # a plain network file has no standard boundary data
    code, out, _ = run(capsys, "power", "--example", "grid", "--n", "5", "--variant", "real_conductivity")
    assert code == 0
    data.write_text(out)
    code, out, _ = run(capsys, "reconstruct", "--net", str(net), "--data", str(data), "--truth", str(net),
                       "--history-out", str(hist), "--table-out", str(table))
    rep = json.loads(out)
    assert code == 0 and rep["relative_error"] <= 1e-6
    assert hist.read_text().startswith("iteration,merit,grad_norm")
    assert table.read_text().startswith("id,true,recovered")
    code, _, err = run(capsys, "reconstruct", "--net", str(net), "--data", str(data), "--noise", "0.05")
    assert code == 1 and "--seed" in err


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "solve", "--net", str(tmp_path / "missing.json"), "--f", "1")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "solve", "--net", str(bad), "--f", "1")[0] == 3
    assert run(capsys, "solve", "--example", "g1", "--f", "1,0")[0] == 1
    assert run(capsys, "solve", "--example", "g1", "--f", "1,0,0", "--q", "-3")[0] == 2
    code, out, _ = run(capsys, "gen", "--example", "nope")
    assert code == 1 and out == ""


def test_invalid_output_only_on_failure(capsys):
    code, out, err = run(capsys, "certify", "--example", "g1", "--variant", "real_schrodinger")
    assert code == 1 and out == "" and err
    code, out, _ = run(capsys, "certify", "--example", "g1", "--variant", "real_schrodinger", "--q", "1")
    assert code == 0 and json.loads(out)["verdict"] == "pass"
