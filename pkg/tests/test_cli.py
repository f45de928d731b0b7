import json
import subprocess
import sys

import pytest

from itazrp.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_steady_multiline(capsys):
    code, out, _ = run_cli(capsys, "steady", "--n", "2", "--L", "2", "--m", "1,1",
                           "--method", "multiline")
    assert code == 0
    assert json.loads(out) == {"e|12": "w1+w2", "1|2": "w2", "12|e": "w1+w2", "2|1": "w2"}


def test_steady_mpf_three_species(capsys):
    code, out, _ = run_cli(capsys, "steady", "--n", "3", "--L", "2", "--m", "1,1,1")
    assert code == 0
    assert json.loads(out)["e|123"] == "w1^2+2*w1*w2+w1*w3+w2^2+w2*w3"


def test_steady_one_species(capsys):
    code, out, _ = run_cli(capsys, "steady", "--n", "1", "--L", "3", "--m", "2",
                           "--method", "mpf", "--headroom")
    assert code == 0
    assert set(json.loads(out).values()) == {"1"}


def test_steady_kernel_labels_both_normalizations(capsys):
    code, out, _ = run_cli(capsys, "steady", "--L", "3", "--m", "1,1", "--method", "kernel",
                           "--w", "1,1")
    data = json.loads(out)
    assert code == 0
    assert data["unit_sum"]["e|e|12"] == "1/6"
    assert data["polynomial_scale"]["Z_at_w"] == "18"
    assert data["polynomial_normalized"]["e|e|12"] == "3"


def test_steady_terms_format(capsys):
    code, out, _ = run_cli(capsys, "steady", "--L", "2", "--m", "1,1", "--format", "terms")
    assert json.loads(out)["1|2"] == [{"exps": [0, 1], "coeff": "1"}]


def test_output_is_byte_stable(capsys):
    args = ("steady", "--L", "3", "--m", "2,1", "--method", "multiline")
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args)
    assert a == b


@pytest.mark.parametrize("argv", [
    ("steady", "--L", "3", "--m", "1,0"),
    ("steady", "--n", "3", "--L", "3", "--m", "1,1"),
    ("steady", "--m", "1,1"),
    ("steady", "--L", "3", "--m", "1,1", "--method", "kernel"),
    ("steady", "--L", "3", "--m", "1,1", "--method", "kernel", "--w", "1"),
    ("hat-check", "--n", "1"),
    ("simulate", "--L", "3", "--m", "1,1", "--w", "1,2", "--events", "10", "--burn-in", "10"),
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["steady", "--L", "3", "--m", "1,x"])
    assert info.value.code == 2


@pytest.mark.parametrize("L,m", [("4", "1,1"), ("3", "2,2")])
def test_verify_passes(capsys, L, m):
    code, out, _ = run_cli(capsys, "verify", "--L", L, "--m", m, "--deep")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert any(c["check"] == "kernel[mpf]" for c in report["checks"])


def test_verify_tampered_golden_file(capsys, tmp_path):
    _, out, _ = run_cli(capsys, "steady", "--L", "3", "--m", "1,1")
    data = json.loads(out)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(data))
    code, _, _ = run_cli(capsys, "verify", "--L", "3", "--m", "1,1", "--golden", str(good))
    assert code == 0
    data["e|1|2"] = "w2^2+w1*w2"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run_cli(capsys, "verify", "--L", "3", "--m", "1,1", "--golden", str(bad))
    report = json.loads(out)
    assert code == 3 and not report["passed"]
    steady = next(c for c in report["checks"] if c["check"] == "steady[golden]")
    assert steady["witness"]["residual"] != "0"


def test_verify_incomplete_golden_file(capsys, tmp_path):
    f = tmp_path / "partial.json"
    f.write_text(json.dumps({"e|12": "w1+w2"}))
    code, _, err = run_cli(capsys, "verify", "--L", "2", "--m", "1,1", "--golden", str(f))
    assert code == 2 and "lacks" in err


@pytest.mark.parametrize("n,bound", [("2", "2"), ("3", "1")])
def test_hat_check(capsys, n, bound):
    code, out, _ = run_cli(capsys, "hat-check", "--n", n, "--bound", bound)
    assert code == 0 and json.loads(out)["passed"]


def test_simulate_with_exact_reference(capsys, monkeypatch):
    monkeypatch.setenv("TAZRP_THREADS", "2")
    args = ("simulate", "--L", "3", "--m", "1,1", "--w", "1,2", "--events", "60000",
            "--burn-in", "1000", "--seed", "42", "--exact", "--replicas", "2")
    code, out, _ = run_cli(capsys, *args)
    data = json.loads(out)
    assert code == 0
    assert sum(data["fractions"].values()) == pytest.approx(1.0)
    assert data["summary"]["tv_distance"] < 0.05
    monkeypatch.setenv("TAZRP_THREADS", "1")
    _, again, _ = run_cli(capsys, *args)
    assert again == out


def test_pretty_table(capsys):
    code, out, _ = run_cli(capsys, "steady", "--L", "2", "--m", "1,1", "--pretty")
    assert code == 0 and out.splitlines()[0].split() == ["e|12", "w1+w2"]


def test_sector_listing(capsys):
    code, out, _ = run_cli(capsys, "sector", "--L", "3", "--m", "1,1", "--multiline")
    data = json.loads(out)
    assert data["size"] == 9 and data["multiline_size"] == 18
    assert len(data["configs"]) == 9 and len(data["multiline"]) == 18


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "itazrp", "steady", "--L", "2", "--m", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"e|1": "1", "1|e": "1"}
