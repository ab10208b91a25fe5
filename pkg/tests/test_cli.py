"""Command-line behavior: exit codes, file outputs, determinism."""

import json
import os

import numpy as np
import pytest

from cahnallen.cli import main, resolve_entry


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- derive -----------------------------------------------------------------


def test_derive_prints_grade_zero_line(capsys):
    code, out, _ = run(["derive"], capsys)
    assert code == 0
    assert "-A0 + A0^3 = 0" in out
    assert out.count("check ok:") >= 10
    assert "check FAILED" not in out


def test_derive_numeric_frame(capsys):
    code, out, _ = run(["derive", "--k", "2.0"], capsys)
    assert code == 0
    assert "numeric frame at k = 2" in out
    assert "4.2426406871192857" in out  # 3*sqrt2/2 * 2


# --- entry resolution ----------------------------------------------------------


def test_entry_id_with_wavenumber_suffix():
    spec = resolve_entry("eq20+k1", None)
    assert spec.entry_id == "eq20+" and spec.k == 1.0
    spec2 = resolve_entry("eq20+k2.5", None)
    assert spec2.k == 2.5
    spec3 = resolve_entry("eq24+coth", None)
    assert spec3.entry_id == "eq24+coth"


def test_unknown_entry_is_usage_error(tmp_path, capsys):
    code, _, err = run(["eval", "--entry", "nope", "--t", "0",
                        "--out-dir", str(tmp_path)], capsys)
    assert code == 2
    assert "unknown catalog entry" in err


# --- eval / plot data -----------------------------------------------------------


def test_eval_kink_profile(tmp_path, capsys):
    code, _, _ = run(["eval", "--entry", "eq20+k1", "--t", "0",
                      "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    path = tmp_path / "eq20+_t0.csv"
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    assert rows.shape == (201, 2)
    xs, us = rows[:, 0], rows[:, 1]
    at_origin = us[np.argmin(np.abs(xs))]
    assert at_origin == 0.5
    # monotone increasing profile connecting 0 and 1
    assert np.all(np.diff(us) > 0)
    assert us[0] < 1e-2 and us[-1] > 1 - 1e-2


def test_eval_singular_profile_has_gap(tmp_path, capsys):
    code, _, _ = run(["eval", "--entry", "eq21+", "--t", "0",
                      "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    rows = np.loadtxt(tmp_path / "eq21+_t0.csv", delimiter=",", skiprows=1)
    assert rows.shape[0] < 201  # gap rows omitted, never NaN
    assert np.all(np.isfinite(rows))
    xs, us = rows[:, 0], rows[:, 1]
    # magnitude grows approaching the pole from both sides
    left = us[xs < -0.1]
    right = us[xs > 0.1]
    assert abs(left[-1]) > 10 * abs(left[0])
    assert abs(right[0]) > 10 * abs(right[-1])
    manifest = json.loads((tmp_path / "eval_manifest.json").read_text())
    assert any("omitted" in note for note in manifest["notes"])


def test_eval_profile_translates_with_time(tmp_path, capsys):
    code, _, _ = run(["eval", "--entry", "eq20+", "--t", "0,0.5",
                      "--x=-10,10,401", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    r0 = np.loadtxt(tmp_path / "eq20+_t0.csv", delimiter=",", skiprows=1)
    r1 = np.loadtxt(tmp_path / "eq20+_t1.csv", delimiter=",", skiprows=1)
    spec = resolve_entry("eq20+", None)
    shift = -(spec.w / spec.k) * 0.5
    # u(x, t) = u(x - shift, 0): compare at interpolated points
    interp = np.interp(r1[:, 0] - shift, r0[:, 0], r0[:, 1])
    inside = (r1[:, 0] - shift > -10) & (r1[:, 0] - shift < 10)
    assert np.max(np.abs(r1[inside, 1] - interp[inside])) < 1e-4


def test_eval_is_byte_deterministic(tmp_path, capsys):
    for sub in ("a", "b"):
        os.makedirs(tmp_path / sub)
        code, _, _ = run(["eval", "--entry", "eq20+", "--t", "0,1",
                          "--out-dir", str(tmp_path / sub)], capsys)
        assert code == 0
    for name in ("eq20+_t0.csv", "eq20+_t1.csv", "eval_manifest.json"):
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b


# --- catalog ---------------------------------------------------------------------


def test_catalog_table(tmp_path, capsys):
    code, out, _ = run(["catalog", "--k", "1.0", "--out-dir", str(tmp_path)],
                       capsys)
    assert code == 0
    lines = (tmp_path / "catalog.csv").read_text().splitlines()
    assert lines[0].startswith("entry_id,family_code,family,reading")
    assert len(lines) == 55
    assert any(line.startswith("eq24+coth,") and line.endswith(",valid")
               for line in lines)
    assert any(line.startswith("eq26+printed,") and line.endswith(",invalid")
               for line in lines)


# --- verify ------------------------------------------------------------------------


def test_verify_passes_and_writes_audit(tmp_path, capsys):
    code, out, _ = run(["verify", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    audit = json.loads((tmp_path / "audit.json").read_text())
    assert len(audit["rows"]) == 54
    assert all(audit["family_valid"].values())
    assert len(audit["equivalences"]) == 8
    assert all(e["confirmed"] for e in audit["equivalences"])


def test_verify_corrupted_family_fails_and_names_it(tmp_path, capsys):
    code, _, err = run(["verify", "--corrupt", "eq20",
                        "--out-dir", str(tmp_path)], capsys)
    assert code == 1
    assert "eq20" in err
    assert "eq20+" in err


def test_verify_custom_grid(tmp_path, capsys):
    code, _, _ = run(["verify", "--grid=-5,5,41,0,0.5,3",
                      "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    audit = json.loads((tmp_path / "audit.json").read_text())
    assert audit["grid"]["nx"] == 41


# --- simulate / convergence -----------------------------------------------------------


def test_simulate_writes_exports(tmp_path, capsys):
    code, out, _ = run(["simulate", "--entry", "eq20+", "--T", "0.2",
                        "--grid=-20,20,201", "--out-dir", str(tmp_path)],
                       capsys)
    assert code == 0
    assert "measured front speed" in out
    traj = np.loadtxt(tmp_path / "sim_eq20+_rk4_trajectory.csv",
                      delimiter=",", skiprows=1)
    assert traj.shape[1] == 2
    metrics = (tmp_path / "sim_eq20+_rk4_metrics.csv").read_text().splitlines()
    assert metrics[0] == "t,linf_error,l2_error,energy"
    snap0 = np.loadtxt(tmp_path / "sim_eq20+_rk4_t0.csv", delimiter=",",
                       skiprows=1)
    assert snap0.shape == (201, 2)
    manifest = json.loads((tmp_path / "simulate_manifest.json").read_text())
    assert manifest["parameters"]["measured_speed"] is not None


def test_simulate_imex(tmp_path, capsys):
    code, out, _ = run(["simulate", "--entry", "eq20+", "--T", "0.1",
                        "--grid=-15,15,151", "--scheme", "imex",
                        "--dt", "0.0005", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    metrics = np.loadtxt(tmp_path / "sim_eq20+_imex_metrics.csv",
                         delimiter=",", skiprows=1)
    assert metrics[-1, 1] < 1e-3


def test_convergence_command(tmp_path, capsys):
    code, out, _ = run(["convergence", "--entry", "eq20+", "--levels", "3",
                        "--T", "0.25", "--grid=-20,20,101",
                        "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    rows = np.loadtxt(tmp_path / "convergence_eq20+.csv", delimiter=",",
                      skiprows=1)
    assert rows.shape[0] == 3
    orders = rows[1:, 3]
    assert np.all(np.abs(orders - 2.0) < 0.3)


# --- exit code contract -----------------------------------------------------------------


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["simulate"])  # missing required --entry
    assert exc.value.code == 2


def test_unknown_subcommand_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
