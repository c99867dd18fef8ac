import csv

import pytest

from dpcache.cli import main


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_rate_table(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, cap = run(["rate-table", "--n", "5", "--k", "10", "--out", str(out)], capsys)
    assert code == 0
    assert "51 grid points" in cap.out
    assert len(list(csv.reader(out.open()))) == 52
    assert (tmp_path / "t.exact").exists()


def test_rate_table_example_row(tmp_path, capsys):
    out = tmp_path / "t.csv"
    run(["rate-table", "--n", "2", "--k", "2", "--out", str(out)], capsys)
    rows = {r["M"]: r for r in csv.DictReader(out.open())}
    assert rows["1"]["R_private"] == "0.666666666667"


def test_rate_table_fig3_setting(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _ = run(["rate-table", "--n", "20", "--k", "10", "--out", str(out)], capsys)
    assert code == 0
    assert len(list(csv.reader(out.open()))) == 202


def test_rate_table_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["rate-table", "--n", "3", "--k", "4", "--out", str(a)], capsys)
    run(["rate-table", "--n", "3", "--k", "4", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".exact").read_bytes() == b.with_suffix(".exact").read_bytes()


def test_rate_table_unwritable(capsys):
    code, cap = run(["rate-table", "--out", "/nonexistent-dir/x.csv"], capsys)
    assert code == 2 and "cannot write" in cap.err


def test_verify_sampled(capsys):
    code, cap = run(["verify", "--n", "2", "--k", "3", "--t", "3", "--worlds", "sampled:64", "--seed", "7"], capsys)
    assert code == 0
    assert "result: PASS" in cap.out


def test_verify_budget_exceeded(capsys):
    code, cap = run(["verify", "--n", "2", "--k", "3", "--t", "3"], capsys)
    assert code == 2
    code, cap = run(["verify", "--n", "2", "--k", "3", "--t", "3", "--allow-sampled-fallback"], capsys)
    assert code == 0 and "sampled (64)" in cap.out


def test_verify_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("DPCACHE_ENUM_BUDGET", "4")
    code, _ = run(["verify", "--n", "2", "--k", "2", "--t", "3"], capsys)
    assert code == 2


def test_verify_negative_controls(capsys):
    code, cap = run(["verify", "--negative-control", "cleartext", "--worlds", "fixed", "--witnesses"], capsys)
    assert code == 1
    assert '"kind": "privacy"' in cap.out
    assert "1.000000000000 bits" in cap.out
    code, cap = run(["verify", "--negative-control", "drop", "--worlds", "fixed"], capsys)
    assert code == 1 and "decodability: FAIL" in cap.out


def test_verify_memory_fraction(capsys):
    code, cap = run(["verify", "--m", "3/2", "--worlds", "fixed"], capsys)
    assert code == 0 and "t=3 M=3/2" in cap.out
    code, cap = run(["verify", "--m", "1/3", "--worlds", "fixed"], capsys)
    assert code == 2 and "not an integer" in cap.err


def test_bounds(capsys):
    code, cap = run(["bounds", "--n", "5", "--k", "10"], capsys)
    assert code == 0 and "result: PASS" in cap.out
    code, cap = run(["bounds", "--n", "2", "--k", "2"], capsys)
    assert code == 0 and "R_private((NK-1)/K) = 1/(NK) = cut-set: R = 1/4" in cap.out
    code, cap = run(["bounds", "--n", "20", "--k", "10"], capsys)
    assert code == 0 and "M >= N/K (N > K)" in cap.out


def test_simulate(tmp_path, capsys):
    code, cap = run(["simulate", "--n", "2", "--k", "2", "--t", "2", "--trials", "100", "--seed", "1"], capsys)
    assert code == 0
    lines = [x for x in cap.out.splitlines() if x.startswith("N=")]
    assert len(lines) == 100 and all("rate=2/3 ok=11" in x for x in lines)
    code, cap = run(["simulate", "--n", "3", "--k", "2", "--t", "2", "--trials", "10"], capsys)
    assert code == 0 and "expected rate 19/15" in cap.out
    code, cap = run(["simulate", "--n", "2", "--k", "2", "--t", "4", "--trials", "3"], capsys)
    assert code == 0 and "rate=0 " in cap.out
    a, b = tmp_path / "a.log", tmp_path / "b.log"
    run(["simulate", "--trials", "5", "--seed", "9", "--out", str(a)], capsys)
    run(["simulate", "--trials", "5", "--seed", "9", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# episode settings\nn = 3\nk = 2\nt = 2\ntrials = 2\n")
    code, cap = run(["simulate", "--config", str(cfg)], capsys)
    assert code == 0 and "N=3 K=2 t=2" in cap.out
    code, cap = run(["simulate", "--config", str(cfg), "--k", "1", "--t", "1"], capsys)
    assert code == 0 and "N=3 K=1 t=1" in cap.out
    cfg.write_text("colour = blue\n")
    code, cap = run(["simulate", "--config", str(cfg)], capsys)
    assert code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--n", "x"])
    assert exc.value.code == 2


def test_example1(capsys):
    code, cap = run(["example1"], capsys)
    assert code == 0
    assert cap.out.count("rate: 2/3") == 2
    assert "example 1: PASS" in cap.out
