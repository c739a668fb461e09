import json
import subprocess
import sys

import pytest

from chaoszeta.cli import EXIT_ERROR, EXIT_FAILED, EXIT_OK, main
from chaoszeta.harness.report import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zeta(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "2,0")
    rows = read_csv(out)
    assert code == EXIT_OK
    assert float(rows[0]["value"]) == pytest.approx(1.6449340668482264, abs=1e-12)


def test_pole_is_operational_error(capsys):
    code, _, err = run(capsys, "zeta", "--s", "1,0")
    assert code == EXIT_ERROR and "pole" in err


def test_bad_arguments_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["zeta"])
    assert exc.value.code == EXIT_ERROR
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_ERROR


def test_kernel_json(capsys):
    code, out, _ = run(capsys, "kernel", "--u", "1", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["records"][0]["statistic"] == "log_zeta.re"


def test_chars_dump(capsys, tmp_path):
    p = tmp_path / "table.csv"
    code, _, _ = run(capsys, "chars", "--q", "5", "--dump", str(p))
    lines = p.read_text().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "n,chi0,chi1,chi2,chi3" and lines[2] == "2,0,1/4,1/2,3/4" and lines[5] == "5,-,-,-,-"


def test_moments(capsys, tmp_path):
    t = tmp_path / "t.json"
    t.write_text("[[6, 1, 0], [2, 0, 1], [3, 0, 1]]")
    code, out, _ = run(capsys, "moments", "--q", "101", "--tuples", str(t), "--mc-samples", "500")
    rows = {r["statistic"]: float(r["value"]) for r in read_csv(out)}
    assert code == EXIT_OK
    assert rows["chi_oracle"] == rows["omega_oracle"] == 1
    assert rows["omega_mc.re"] == pytest.approx(1.0)


def test_testfn_out(capsys, tmp_path):
    p = tmp_path / "cache.csv"
    code, out, _ = run(capsys, "testfn", "--nmax", "4", "--out", str(p))
    rows = read_csv(p.read_text())
    assert code == EXIT_OK and out == ""
    assert float(rows[0]["value"]) == pytest.approx(0.443993816168079, abs=1e-14)


@pytest.mark.parametrize("kind", ["LMq", "LMomega", "eulerprod"])
def test_functional(capsys, kind):
    code, out, _ = run(capsys, "functional", "--kind", kind, "--q", "7", "--M", "10", "--N", "10", "--samples", "3")
    assert code == EXIT_OK and len(read_csv(out)) >= 2


def test_functional_bad_character(capsys):
    code, _, err = run(capsys, "functional", "--kind", "LMq", "--q", "5", "--chi", "9")
    assert code == EXIT_ERROR


@pytest.mark.parametrize("which", ["lemma0", "lemma2", "lemma3", "kernel", "em1m2", "cov"])
def test_oracle(capsys, which):
    code, out, _ = run(capsys, "oracle", "--which", which, "--q", "31", "--N", "100")
    assert code == EXIT_OK and read_csv(out)


def test_run_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "M1M2_equivalence", "M1_grid": [1, 8], "M2_grid": [1, 2], "samples": 300}))
    code, out, _ = run(capsys, "run", "--config", str(cfg), "--seed", "3", "--threads", "2")
    rows = read_csv(out)
    assert code == EXIT_OK
    assert {r["seed"] for r in rows if r["seed"]} == {"3"}


def test_run_failed_check_exits_2(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "experiment": "M1M2_equivalence",
                "M1_grid": [8],
                "M2_grid": [2],
                "samples": 300,
                "tolerances": {"se_factor": 0.0},
            }
        )
    )
    code, _, err = run(capsys, "run", "--config", str(cfg))
    assert code == EXIT_FAILED and "FAILED" in err


def test_run_missing_config(capsys, tmp_path):
    code, _, err = run(capsys, "run", "--config", str(tmp_path / "none.json"))
    assert code == EXIT_ERROR and "cannot read config" in err


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "chaoszeta.cli", "zeta", "--s", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "zeta.re" in proc.stdout
