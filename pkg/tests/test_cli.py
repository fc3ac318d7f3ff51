import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path


from qselberg.cli import jsonable, main

ROOT = Path(__file__).resolve().parents[1]


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


def run_main(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return [json.loads(line) for line in text.splitlines()]


def test_check_passes_and_reports_json_lines(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": ["aomoto", "tvs"], "seed": 2})
    code, out, err = run_main(["check", "--config", cfg], capsys)
    assert code == 0
    assert out.endswith("\n") and "\r" not in out
    got = rows(out)
    assert [r["id"] for r in got] == ["aomoto", "tvs"]
    assert all(r["status"] == "PASS" and r["pass"] for r in got)
    assert isinstance(got[0]["lhs"], list) and len(got[0]["lhs"]) == 2
    assert "wall_time" not in got[0]
    assert "2 passed" in err


def test_parse_error_exits_2(tmp_path, capsys):
    code, out, err = run_main(["check", "--config", write(tmp_path, {"q": 3})], capsys)
    assert code == 2 and "'q'" in err and out == ""
    code, _, err = run_main(["sweep", "--config", write(tmp_path, {"zzz": 1})], capsys)
    assert code == 2 and "zzz" in err


def test_constraint_violation_exits_4(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": ["main1"], "tau": 1.0})
    code, out, err = run_main(["check", "--config", cfg], capsys)
    assert code == 4 and "tau not in Z+" in err and out == ""


def test_nonconvergence_exits_3(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": ["aomoto"], "q": 0.6, "n": 2})
    code, out, _ = run_main(["check", "--config", cfg, "--max-radius", "5"], capsys)
    assert code == 3 and rows(out)[0]["status"] == "NONCONVERGED"


def test_failure_exits_1(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": ["aomoto"]})
    code, out, _ = run_main(["check", "--config", cfg, "--tol", "1e-300"], capsys)
    assert code == 1 and rows(out)[0]["status"] == "FAIL"


def test_sweep_grid_rows_sorted(tmp_path, capsys):
    code, out, err = run_main(["sweep", "--config", str(ROOT / "configs/sweep_aomoto.json")],
                              capsys)
    got = rows(out)
    assert code == 0 and len(got) == 18
    assert [r["index"] for r in got] == list(range(18))
    assert got[0]["params"]["q"] == 0.2 and got[-1]["params"]["q"] == 0.6
    assert "18 rows" in err


def test_sweep_skips_violations(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": ["main1", "aomoto"], "grid": {"tau": [0.5, 1.0]}})
    code, out, _ = run_main(["sweep", "--config", cfg], capsys)
    got = rows(out)
    assert code == 0
    assert [(r["id"], r["index"], r["status"]) for r in got] == [
        ("aomoto", 0, "PASS"), ("aomoto", 1, "PASS"), ("main1", 0, "PASS"),
        ("main1", 1, "SKIPPED")]
    assert "tau not in Z+" in got[3]["reason"]


def test_same_seed_same_bytes_any_worker_count(tmp_path):
    cfg = write(tmp_path, {"identities": ["aomoto", "bilateral_A", "evans", "main1"],
                           "grid": {"q": [0.25, 0.35]}})
    outs = []
    for workers in (None, "2", "4"):
        env = dict(os.environ)
        env.pop("QSELBERG_WORKERS", None)
        cmd = [sys.executable, "-m", "qselberg", "sweep", "--config", cfg, "--seed", "9"]
        if workers == "4":
            env["QSELBERG_WORKERS"] = workers
        elif workers:
            cmd += ["--workers", workers]
        proc = subprocess.run(cmd, capture_output=True, env=env, timeout=300)
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    assert outs[0] == outs[1] == outs[2]
    different = subprocess.run(
        [sys.executable, "-m", "qselberg", "sweep", "--config", cfg, "--seed", "10"],
        capture_output=True, timeout=300).stdout
    assert different != outs[0]


def test_csv_and_out_file(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": ["aomoto"], "grid": {"n": [1, 2]}})
    out_path = tmp_path / "report.csv"
    code, out, _ = run_main(["sweep", "--config", cfg, "--format", "csv", "--out",
                             str(out_path)], capsys)
    assert code == 0 and out == ""
    raw = out_path.read_bytes()
    assert b"\r" not in raw
    table = list(csv.DictReader(io.StringIO(raw.decode("utf-8"))))
    assert len(table) == 2 and table[0]["status"] == "PASS"


def test_timing_flag_adds_wall_time(tmp_path, capsys):
    cfg = write(tmp_path, {"identities": ["aomoto"]})
    _, out, _ = run_main(["check", "--config", cfg, "--timing"], capsys)
    assert rows(out)[0]["wall_time"] >= 0


def test_contour_command(tmp_path, capsys):
    code, out, _ = run_main(["contour", "--config", str(ROOT / "configs/contour.json")], capsys)
    got = rows(out)
    assert code == 0 and got[0]["id"] == "contour" and got[0]["detail"]["nodes"] == 512


def test_eval_sum_and_closed_form(tmp_path, capsys):
    code, out, _ = run_main(["eval", "--config", str(ROOT / "configs/eval_selberg.json")], capsys)
    row = rows(out)[0]
    assert code == 0 and row["converged"] and row["quantity"] == "jackson_sum"
    spec = {"q": 0.3, "n": 2, "tau": 0.4, "alpha": 0.8, "a1": 1.1, "b1": 0.4}
    code, out, _ = run_main(["eval", "--config", write(tmp_path, {"evaluate": "c0", **spec})],
                            capsys)
    assert code == 0 and len(rows(out)[0]["value"]) == 2


def test_eval_errors(tmp_path, capsys):
    code, _, err = run_main(["eval", "--config", write(tmp_path, {"evaluate": "c0", "q": 0.3})],
                            capsys)
    assert code == 2 and "'n'" in err
    cfg = write(tmp_path, {"evaluate": "contour_integral", "q": 0.3, "n": 3, "tau": 0.4,
                           "alpha": 1.2, "a1": 0.5, "b1": 0.5, "nodes": 16})
    code, _, err = run_main(["eval", "--config", cfg], capsys)
    assert code == 4 and "DimensionUnsupported" in err
    cfg = write(tmp_path, {"q": 0.3})
    code, _, err = run_main(["eval", "--config", cfg], capsys)
    assert code == 2 and "evaluate" in err


def test_bad_workers_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QSELBERG_WORKERS", "many")
    code, _, err = run_main(["check", "--config", write(tmp_path, {})], capsys)
    assert code == 2 and "QSELBERG_WORKERS" in err


def test_jsonable_handles_non_finite():
    assert jsonable(complex(float("inf"), 1.0)) == ["inf", 1.0]
    assert jsonable({"a": (1, 2.5j)}) == {"a": [1, [0.0, 2.5]]}
