from __future__ import annotations

import io
import json
import os
import subprocess
import sys

import pytest

from artifact import cli


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def test_partition_exact():
    assert run(["partition", "exact", "100"]) == (0, "190569292\n")


def test_console_entry_point_subprocess():
    r = subprocess.run([sys.executable, "-m", "artifact.cli", "partition", "exact", "100"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "190569292\n"
    r = subprocess.run([sys.executable, "-m", "artifact.cli", "partition", "exact", "5", "--bogus"], capture_output=True, text=True)
    assert r.returncode == 2 and "usage" in r.stderr


def test_usage_errors():
    assert run(["partition", "exact", "5", "--bogus"])[0] == 2
    assert run([])[0] == 2
    assert run(["nope"])[0] == 2
    assert run(["partition", "hrr", "0"])[0] == 2
    assert run(["partition", "hrr", "10", "--prec", "32"])[0] == 2
    assert run(["padic", "verify", "--p", "4", "--m", "2"])[0] == 2
    assert run(["special", "xi", "--x", "0", "--s-im", "1"])[0] == 2
    assert run(["padic", "verify", "--p", "3", "--m", "3", "--suite", "bad"])[0] == 2


def test_help_exits_zero(capsys):
    assert run(["--help"])[0] == 0


def test_partition_hrr():
    code, out = run(["partition", "hrr", "100"])
    rec = json.loads(out)
    assert code == 0 and rec["value"] == "190569292" and rec["certified"]
    code, out = run(["partition", "hrr", "1000", "--terms", "3", "--prec", "200"])
    rec = json.loads(out)
    assert code == 0 and rec["certified"] is False and rec["N"] == 3


def test_kloosterman_outputs():
    code, out = run(["kloosterman", "A", "2", "1"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "c,n,A_mid,A_rad,route"
    assert [l.split(",")[4] for l in lines[1:]] == ["definition", "dedekind", "selberg"]
    assert all(abs(float(l.split(",")[2]) + 1) < 1e-15 for l in lines[1:])
    code, out = run(["kloosterman", "partial-sum", "1", "30", "--every", "10"])
    lines = out.splitlines()
    assert lines[0] == "X,re_mid,im_mid,rad" and [l.split(",")[0] for l in lines[1:]] == ["10", "20", "30"]


def test_sweep_and_config(tmp_path):
    out_file = tmp_path / "sweep.csv"
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# sweep manifest\nprecision_bits = 96\noutput_path = {out_file}\n")
    code, out = run(["kloosterman", "sweep", "--cmax", "3", "--nmax", "2", "--config", str(cfg)])
    assert code == 0 and out == ""
    rows = out_file.read_text().splitlines()
    assert len(rows) == 1 + 3 * 5 * 3
    # flags win over the file
    other = tmp_path / "other.csv"
    assert run(["kloosterman", "sweep", "--cmax", "1", "--nmax", "0", "--config", str(cfg), "--out", str(other)])[0] == 0
    assert len(other.read_text().splitlines()) == 4
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(["partition", "exact", "3", "--config", str(bad)])[0] == 2


def test_special_outputs():
    code, out = run(["special", "xi", "--x", "1", "--s-im", "0.4", "--route", "both"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x,s_im,route,re_mid,im_mid,rad"
    closed, quad = (l.split(",") for l in lines[1:])
    zc = complex(float(closed[3]), float(closed[4]))
    zq = complex(float(quad[3]), float(quad[4]))
    assert abs(zc - zq) / abs(zc) < 1e-3
    code, out = run(["special", "bessel", "1"])
    assert code == 0 and out.splitlines()[1].startswith("1.0,auto,0.2935")


def test_padic_verify_exit_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["padic", "verify", "--p", "3", "--m", "3", "--suite", "all", "--out", str(a), "--seed", "4"])[0] == 0
    assert run(["padic", "verify", "--p", "3", "--m", "3", "--suite", "all", "--out", str(b), "--seed", "4"])[0] == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert all(i["max_residual"] < 1e-10 for rep in data for i in rep["identities"])


def test_padic_verify_failure_exit(monkeypatch):
    from artifact.padic import verify as R

    real = R.run_suite

    def broken(*args, **kwargs):
        reps = real(*args, **kwargs)
        reps[0].check("forced failure", 1.0)
        return reps

    monkeypatch.setattr(R, "run_suite", broken)
    assert run(["padic", "verify", "--p", "2", "--m", "3", "--suite", "adjoint"])[0] == 1


def test_scan_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["partition", "scan", "--min", "256", "--max", "1024", "--geometric", "--alpha", "1"]
    assert run(args + ["--out", str(a)])[0] == 0
    assert run(args + ["--out", str(b)])[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "n,N,alpha,prec_bits,partial_mid,partial_rad,remainder,log_n,log_abs_R"


def test_env_precision_read_at_startup():
    env = dict(os.environ, ARTIFACT_PREC_BITS="40")
    r = subprocess.run([sys.executable, "-m", "artifact.cli", "kloosterman", "A", "3", "1"], capture_output=True, text=True, env=env)
    assert r.returncode == 2 and "precision_bits" in r.stderr
    env["ARTIFACT_PREC_BITS"] = "200"
    r = subprocess.run([sys.executable, "-m", "artifact.cli", "kloosterman", "A", "3", "1"], capture_output=True, text=True, env=env)
    assert r.returncode == 0 and len(r.stdout.splitlines()[1].split(",")[2]) > 40
