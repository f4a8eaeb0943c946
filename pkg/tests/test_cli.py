"""Subprocess-level checks of the command-line frontend."""

import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

SRC = str(Path(__file__).resolve().parents[1] / "src")

F1_ID = {"h": {"atoms": [{"t": 1.0, "w": 1.0}]}, "g": {"atoms": [{"t": 0.0, "w": 1.0}]}}
IDENTITY_MAP = {
    "h": {"atoms": [{"t": 0.0, "w": 1.0}]},
    "g": {"atoms": [{"t": 0.0, "w": 1.0}]},
    "c": 0.0,
}


def run_cli(*args):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "cmharmonic", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=240,
    )


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_check_cm_exit_codes(tmp_path):
    ok = write(tmp_path, "ok.json", [1, 0.5, 0.25])
    bad = write(tmp_path, "bad.json", [1, 0.9, 0.5])
    empty = write(tmp_path, "empty.json", [])

    res = run_cli("check-cm", ok)
    assert res.returncode == 0 and '"holds"' in res.stdout

    res = run_cli("check-cm", bad)
    assert res.returncode == 1
    payload = json.loads(res.stdout)
    assert (payload["k"], payload["n"]) == (2, 0)
    assert math.isclose(payload["value"], -0.3, abs_tol=1e-12)

    res = run_cli("check-cm", empty)
    assert res.returncode == 2

    res = run_cli("check-cm", str(tmp_path / "missing.json"))
    assert res.returncode == 2

    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert run_cli("check-cm", str(garbled)).returncode == 2


def test_certify_exit_matrix(tmp_path):
    spec02 = write(tmp_path, "c02.json", dict(F1_ID, c=0.2))
    spec03 = write(tmp_path, "c03.json", dict(F1_ID, c=0.3))
    poly = write(tmp_path, "poly.json", {"alpha": 4, "beta": 3, "c": 0.5})

    res = run_cli("certify", spec02, "--method", "grid", "--k", "0.8")
    assert res.returncode == 0
    cert = json.loads(res.stdout)
    assert cert["status"] == "certified"
    assert 0.78 <= cert["sup_estimate"] <= 0.8

    res = run_cli("certify", spec03, "--method", "grid", "--k", "0.9")
    assert res.returncode == 1
    assert json.loads(res.stdout)["sup_estimate"] > 1.0

    res = run_cli("certify", poly, "--method", "thm1.7", "--k", "0.7")
    assert res.returncode == 0
    assert json.loads(res.stdout)["method"] == "thm1.7ii"

    # inconclusive branch: neither polylog hypothesis fits
    poly_bad = write(tmp_path, "polybad.json", {"alpha": 3, "beta": 1, "c": 0.2})
    assert run_cli("certify", poly_bad, "--method", "thm1.7", "--k", "0.5").returncode == 2

    # malformed spec
    assert run_cli("certify", write(tmp_path, "x.json", {"h": {}}), "--method", "grid", "--k", "0.5").returncode == 2


def test_certify_thm16_and_thm19_and_hyp(tmp_path):
    conv = write(tmp_path, "conv.json", dict(F1_ID, c=0.2))
    res = run_cli("certify", conv, "--method", "thm1.6", "--k", "0.8")
    assert res.returncode == 0
    cert = json.loads(res.stdout)
    assert cert["method"] == "thm1.6" and cert["ratio_sup"] < 4.0

    pair = write(
        tmp_path,
        "pair.json",
        {
            "h": {"densities": [{"family": "loggamma", "alpha": 4.0, "w": 1.0}]},
            "g": {"densities": [{"family": "loggamma", "alpha": 3.0, "w": 1.0}]},
            "c": 0.5,
        },
    )
    res = run_cli("certify", pair, "--method", "thm1.9", "--k", "0.7")
    assert res.returncode == 0
    assert json.loads(res.stdout)["method"] == "thm1.9"

    hyp = write(tmp_path, "hyp.json", {"a": 1, "c": 6, "a2": 2, "c2": 6, "b": 0.3})
    res = run_cli("certify", hyp, "--method", "hyp", "--k", "0.7")
    assert res.returncode == 0
    assert json.loads(res.stdout)["M"] == 2


def test_eval_and_dilatation(tmp_path):
    spec = write(tmp_path, "map.json", dict(F1_ID, c=0.3))
    res = run_cli("eval", spec, "--z", "0.5j")
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert math.isclose(out["re"], -0.2, abs_tol=1e-10)
    assert math.isclose(out["im"], 0.25, abs_tol=1e-10)

    measure = write(tmp_path, "mu.json", {"densities": [{"family": "lebesgue", "w": 1.0}]})
    res = run_cli("eval", measure, "--z", "0.5")
    assert json.loads(res.stdout)["re"] == pytest.approx(2.0 * math.log(2.0), abs=1e-9)

    spec2 = write(tmp_path, "map2.json", dict(F1_ID, c=0.2))
    res = run_cli("dilatation", spec2, "--z=-0.9+0j")
    assert res.returncode == 0
    assert json.loads(res.stdout)["abs"] == pytest.approx(0.722, abs=1e-9)


def test_moments_formats(tmp_path):
    mu = write(
        tmp_path,
        "mu.json",
        {"atoms": [{"t": 0.5, "w": 0.3}], "densities": [{"family": "beta", "a": 1, "c": 3, "w": 0.7}]},
    )
    res = run_cli("moments", mu, "--count", "4")
    assert res.returncode == 0
    vals = json.loads(res.stdout)
    assert len(vals) == 4 and vals[0] == pytest.approx(1.0, abs=1e-10)

    res = run_cli("moments", mu, "--count", "3", "--format", "csv")
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "n,value" and len(lines) == 4


def test_verify_thm_subcommands(tmp_path):
    fmap = write(tmp_path, "f.json", {"h": F1_ID["h"], "g": F1_ID["h"], "c": 0.5})
    res = run_cli("verify-thm", "1.2", fmap, "--nr", "6", "--ntheta", "16")
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["passed"] and math.isclose(out["limit"], -0.75, abs_tol=1e-9)

    res = run_cli("verify-thm", "1.3", fmap, "--nr", "6")
    assert res.returncode == 0
    assert json.loads(res.stdout)["im_checked"]


def test_ratio_sup(tmp_path):
    f1 = write(tmp_path, "f1.json", F1_ID["h"])
    res = run_cli("ratio-sup", f1)
    assert res.returncode == 0
    assert json.loads(res.stdout)["sup_estimate"] == pytest.approx(1.98**2, abs=1e-9)


def test_render_circle_row_count(tmp_path):
    spec = write(tmp_path, "id.json", IDENTITY_MAP)
    res = run_cli("render", spec, "--curve", "circle", "--r", "0.5", "--n", "16")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "param,re_z,im_z,re_f,im_f"
    assert len(lines) == 17
    # identity map: image equals the curve
    first = lines[1].split(",")
    assert float(first[1]) == pytest.approx(float(first[3]))


def test_render_collapsing_arc_constant_column(tmp_path):
    spec = write(tmp_path, "qc.json", dict(F1_ID, c=0.36))
    rho = 1.0 / math.sqrt(0.36)
    res = run_cli(
        "render", spec, "--curve", "circle", "--center", "1,0",
        f"--r={rho}", "--theta0", "2.6", "--theta1", "3.68", "--n", "8",
    )
    assert res.returncode == 0
    rows = [line.split(",") for line in res.stdout.strip().splitlines()[1:]]
    assert len(rows) == 8
    for row in rows:
        assert float(row[3]) == pytest.approx(-0.64, abs=1e-10)


def test_render_segment_monotone(tmp_path):
    spec = write(tmp_path, "f1map.json", {"h": F1_ID["h"], "g": F1_ID["h"], "c": 0.0})
    res = run_cli("render", spec, "--curve", "segment", "--x0=-0.9", "--x1=0.9", "--n", "12")
    assert res.returncode == 0
    re_f = [float(line.split(",")[3]) for line in res.stdout.strip().splitlines()[1:]]
    assert re_f == sorted(re_f)


def test_render_rejects_curve_outside_disk(tmp_path):
    spec = write(tmp_path, "id2.json", IDENTITY_MAP)
    assert run_cli("render", spec, "--curve", "circle", "--r", "1.2").returncode == 2
    assert run_cli("render", spec, "--curve", "segment", "--x0=-2", "--x1=0").returncode == 2


def test_rect_flag(tmp_path):
    fmap = write(tmp_path, "f.json", {"h": F1_ID["h"], "g": F1_ID["h"], "c": 0.5})
    res = run_cli("verify-thm", "1.3", fmap, "--rect=-2,0.9,0.05,2,15,15")
    assert res.returncode == 0
    assert json.loads(res.stdout)["checked_nodes"] == 2 * 15 * 15
    assert run_cli("verify-thm", "1.3", fmap, "--rect=oops").returncode == 2


def test_certify_thm19_needs_densities(tmp_path):
    atomic = write(tmp_path, "atomic.json", dict(F1_ID, c=0.2))
    assert run_cli("certify", atomic, "--method", "thm1.9", "--k", "0.5").returncode == 2


def test_usage_error_exits_2():
    assert run_cli("certify").returncode == 2
    assert run_cli("no-such-command").returncode == 2


def test_output_files_and_determinism(tmp_path):
    spec = write(tmp_path, "c02.json", dict(F1_ID, c=0.2))
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run_cli("certify", spec, "--method", "grid", "--k", "0.8", "--out", str(out1)).returncode == 0
    assert run_cli("certify", spec, "--method", "grid", "--k", "0.8", "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
