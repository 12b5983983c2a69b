import json
import math
import subprocess
import sys

import pytest

from obsclone.cli import main, parse_angle, parse_bloch, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "text, want",
    [("pi/4", math.pi / 4), ("3*pi/8", 3 * math.pi / 8), ("-pi", -math.pi), ("0.5", 0.5), ("pi", math.pi)],
)
def test_parse_angle(text, want):
    assert parse_angle(text) == pytest.approx(want, abs=1e-15)


def test_parse_errors():
    with pytest.raises(UsageError):
        parse_angle("45deg")
    with pytest.raises(UsageError):
        parse_bloch("1,2")
    with pytest.raises(UsageError):
        parse_bloch("a,b,c")


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and out.count("class:") == 6
    code, out, _ = run(capsys, "list", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 6
    code, _, err = run(capsys, "list", "--format", "xml")
    assert code == 2 and "invalid choice" in err


def test_verify_nc(capsys):
    code, out, _ = run(capsys, "verify", "--machine", "nc", "--theta", "0.7853981634")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["covariance_ok"]
    assert abs(doc["noise_report"]["g1_fit"] - math.sqrt(2)) <= 1e-9
    assert abs(doc["noise_report"]["g2_fit"] - math.sqrt(2)) <= 1e-9


def test_verify_commuting(capsys):
    code, out, _ = run(capsys, "verify", "--machine", "commuting")
    doc = json.loads(out)
    assert code == 0 and doc["noise_report"]["g1_fit"] == 1 and doc["noise_report"]["residual_max"] <= 1e-12


@pytest.mark.parametrize("name", ["conjugated", "phase-covariant", "sign-flipped", "universal-marginal"])
def test_verify_other_machines(capsys, name):
    code, out, _ = run(capsys, "verify", "--machine", name, "--theta", "pi/3", "--format", "table")
    assert code == 0 and "PASS" in out


def test_verify_conjugated_random_v(capsys):
    code, out, _ = run(capsys, "verify", "--machine", "conjugated", "--v-seed", "4")
    assert code == 0


def test_verify_boundary_theta(capsys):
    code, _, err = run(capsys, "verify", "--machine", "nc", "--theta", "0")
    assert code == 2 and "diverges" in err


def test_verify_failure_exit_code(capsys):
    # a sub-tolerance fit requirement cannot be met by finite precision
    code, out, _ = run(capsys, "verify", "--machine", "nc", "--theta", "0.3", "--tol", "1e-30")
    assert code == 1 and not json.loads(out)["passed"]


def test_bad_machine_is_usage_error(capsys):
    code, _, _ = run(capsys, "verify", "--machine", "bogus")
    assert code == 2


def test_sweep_csv(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--machine", "nc", "--bloch", "0,0,1", "--steps", "99", "--out", str(path))
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().strip().split("\n")
    assert lines[0] == "theta,g1,g2,dm1,dm2,product,bound,saturated" and len(lines) == 100
    rows = [line.split(",") for line in lines[1:]]
    thetas = [float(r[0]) for r in rows]
    products = [float(r[5]) for r in rows]
    assert thetas == sorted(thetas)
    k = products.index(min(products))
    assert abs(thetas[k] - math.pi / 4) <= 1e-12 and abs(products[k] - 4) <= 1e-9
    assert rows[k][7] == "true"
    for a, b in zip(products, products[::-1]):
        assert abs(a - b) <= 1e-9 * max(a, b)


def test_sweep_single_point_matches_verify(capsys):
    code, out, _ = run(capsys, "sweep", "--theta-min", "0.6", "--theta-max", "0.6", "--steps", "1")
    row = out.strip().split("\n")[1].split(",")
    _, vout, _ = run(capsys, "verify", "--theta", "0.6")
    rep = json.loads(vout)["noise_report"]
    assert float(row[1]) == rep["g1_fit"] and float(row[2]) == rep["g2_fit"]


def test_sweep_json_and_errors(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--steps", "3", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 3
    code, _, _ = run(capsys, "sweep", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 3
    code, _, _ = run(capsys, "sweep", "--theta-min", "0", "--steps", "3")
    assert code == 2
    code, _, _ = run(capsys, "sweep", "--machine", "commuting")
    assert code == 2
    code, _, _ = run(capsys, "sweep", "--bloch", "1,1,1")
    assert code == 2


def test_nogo_smoke(capsys):
    code, out, _ = run(capsys, "nogo", "--restarts", "1", "--seed", "1")
    doc = json.loads(out)
    assert doc["evaluations"] > 0 and "evidence" in doc["caveat"]
    assert code == (0 if doc["best_residual"] > 0.05 else 1)


def test_nogo_commuting_flag(capsys):
    code, out, _ = run(capsys, "nogo", "--restarts", "3", "--seed", "42", "--commuting")
    doc = json.loads(out)
    assert code == 0 and doc["best_residual"] <= 1e-8 and doc["passed"]


def test_nogo_floor_failure(capsys):
    code, out, _ = run(capsys, "nogo", "--restarts", "1", "--floor", "5")
    assert code == 1 and not json.loads(out)["passed"]


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--bloch", "0,0,1")
    assert code == 0 and "4.5" in out and "5.0625" in out
    _, out_neg, _ = run(capsys, "compare", "--bloch", "0,0,-1")
    strip = lambda t: [l for l in t.splitlines() if not l.startswith("input Bloch")]
    assert strip(out) == strip(out_neg)
    code, _, err = run(capsys, "compare", "--bloch", "1,0,0")
    assert code == 2 and "minimum-uncertainty" in err
    code, out, _ = run(capsys, "compare", "--format", "json")
    assert json.loads(out)["universal_discrepancy"] is True


def test_config_file_merged_under_flags(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"machine": "phase-covariant", "theta": "pi/3", "samples": 9}))
    _, out, _ = run(capsys, "verify", "--config", str(cfg))
    doc = json.loads(out)
    assert doc["machine"] == "phase-covariant" and doc["noise_report"]["samples_used"] == 9
    assert abs(doc["theta"] - math.pi / 3) <= 1e-15
    _, out, _ = run(capsys, "verify", "--config", str(cfg), "--theta", "0.4")
    assert json.loads(out)["theta"] == 0.4
    code, _, _ = run(capsys, "verify", "--config", str(tmp_path / "nope.json"))
    assert code == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, _ = run(capsys, "verify", "--config", str(bad))
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "obsclone", "list", "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "universal-marginal" in json.loads(proc.stdout)
    proc = subprocess.run([sys.executable, "-m", "obsclone"], capture_output=True, text=True)
    assert proc.returncode == 2
