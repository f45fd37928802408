import json
import random
import subprocess
import sys

import pytest

from exint.cli import main, parse_artifact, reemit_artifact, sample_pairs, sample_rationals, sample_triples, _r_pair_ok
from exint.scalar import is_half_integer_pole, parse_scalar
from exint.spin import SpinMatrix


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, json.loads(out.read_text()), out.read_bytes()


def test_rll_suite_passes(tmp_path):
    code, report, _ = run(["check", "rll", "--alpha-max", "8", "--samples", "3", "--seed", "7"], tmp_path)
    assert code == 0
    assert set(report) == {"suite", "config", "checks", "summary"}
    assert report["summary"]["passed"] == 3
    for entry in report["checks"]:
        assert {"check", "params", "status", "label", "witness", "millis"} <= set(entry)
        assert entry["status"] == "exact-pass"


def test_report_is_deterministic(tmp_path):
    args = ["check", "all", "--n", "3", "--alpha-max", "4", "--samples", "2", "--seed", "3"]
    c1, _, b1 = run(args, tmp_path, "a.json")
    c2, _, b2 = run(args + ["--jobs", "2"], tmp_path, "b.json")
    assert c1 == c2 == 0
    assert b1 == b2


def test_checks_sorted(tmp_path):
    _, report, _ = run(["check", "all", "--n", "3", "--alpha-max", "3", "--samples", "1"], tmp_path)
    keys = [(c["check"], json.dumps(c["params"], sort_keys=True)) for c in report["checks"]]
    assert keys == sorted(keys)


def test_timing_flag_records_millis(tmp_path):
    _, report, _ = run(["check", "forms", "--alpha-max", "6", "--samples", "1", "--timing"], tmp_path)
    assert report["checks"][0]["millis"] > 0


def test_raising_check_is_error(tmp_path):
    # U(1/2) is singular, so the transposal sandwich cannot be formed
    code, report, _ = run(["check", "rprops", "--lambda", "1/2", "--mu", "-3/7", "--alpha-max", "3"], tmp_path)
    assert code == 1
    assert report["checks"][0]["status"] == "error"
    assert report["summary"]["errors"] == 1


def test_malformed_scalar_exits_2():
    proc = subprocess.run([sys.executable, "-m", "exint.cli", "check", "rll", "--lambda", "3//7"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "malformed scalar" in proc.stderr


def test_missing_option_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["emit", "ness", "--n", "2"])
    assert exc.value.code == 2


def test_console_script():
    proc = subprocess.run(["exint", "emit", "transfer", "--n", "1", "--lambda", "5"], capture_output=True, text=True)
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert obj["entries"] == [[0, 0, "5/1"], [1, 1, "5/1"]]


@pytest.mark.parametrize("args", [
    ["emit", "rblock", "--alpha", "3", "--lambda", "3/7", "--mu", "1/5"],
    ["emit", "ness", "--n", "2", "--epsilon", "1/2"],
    ["emit", "transfer", "--n", "3", "--lambda", "1/3-2/5*i"],
    ["emit", "charges", "--n", "4", "--kmax", "2"],
])
def test_emit_round_trip(args, tmp_path):
    code, obj, raw = run(args, tmp_path)
    assert code == 0
    again = (json.dumps(reemit_artifact(obj), indent=2) + "\n").encode()
    assert again == raw


def test_emit_ness_is_hermitian(tmp_path):
    _, obj, _ = run(["emit", "ness", "--n", "2", "--epsilon", "1/2"], tmp_path)
    rho = parse_artifact(obj)
    assert isinstance(rho, SpinMatrix) and rho.dagger() == rho
    assert obj["trace"] == "1088/1"


def test_emit_rblock_blocks(tmp_path):
    _, obj, _ = run(["emit", "rblock", "--alpha", "1", "--lambda", "3/7", "--mu", "1/5"], tmp_path)
    assert obj["blocks"][1] == [["7/11", "-4/11"], ["4/11", "15/11"]]


def test_ness_command(tmp_path):
    code, obj, _ = run(["ness", "--n", "3", "--epsilon", "3/5"], tmp_path)
    assert code == 0 and obj["residual_status"] == "exact-pass"


def test_charges_command(tmp_path):
    code, obj, _ = run(["charges", "--n", "2", "--kmax", "2"], tmp_path)
    assert code == 0
    assert obj["charges"]["1"]["entries"] == [[1, 2, "0/1+1/1*i"]]
    assert obj["charges"]["2"]["entries"] == []


def test_bethe_command(tmp_path):
    csv = tmp_path / "roots.csv"
    code, obj, _ = run(["bethe", "--n", "3", "--lambda", "2*i", "--csv", str(csv)], tmp_path)
    assert code == 0
    assert obj["report"]["status"] == "exact-pass"
    lines = csv.read_text().splitlines()
    assert lines[0].startswith("xi_re,xi_im,residual")
    assert len(lines) == 1 + len(obj["report"]["details"]["roots"])
    code, obj, _ = run(["bethe", "--n", "3", "--lambda", "2*i", "--roots-only"], tmp_path, "r.json")
    assert code == 0 and all(r["residual"] < 1e-10 for r in obj["roots"])


def test_memory_cap_reports_error(tmp_path):
    proc = subprocess.run(["exint", "check", "structure", "--n", "8", "--samples", "1"],
                          capture_output=True, text=True, env={"EXINT_MAX_BYTES": "200000000", "PATH": _path()})
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["summary"]["errors"] == 1


def _path():
    import os
    return os.environ["PATH"]


def test_sampling_is_seeded_and_pole_free():
    a = sample_rationals(random.Random(5), 20)
    assert a == sample_rationals(random.Random(5), 20)
    assert not any(is_half_integer_pole(x) or x.is_zero() for x in a)
    assert all(_r_pair_ok(l, m) for l, m in sample_pairs(random.Random(1), 10, _r_pair_ok))
    for lam, mu, eta in sample_triples(random.Random(2), 5):
        assert _r_pair_ok(lam, mu) and _r_pair_ok(mu, eta) and _r_pair_ok(lam, eta)


def test_config_records_seed(tmp_path):
    _, report, _ = run(["check", "nullspace", "--alpha-max", "2", "--samples", "1", "--seed", "11",
                        "--lambda", "2/3"], tmp_path)
    assert report["config"]["seed"] == 11
    assert report["config"]["lam"] == "2/3"
    assert parse_scalar(report["config"]["lam"]) == parse_scalar("2/3")
