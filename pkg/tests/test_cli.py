"""Command-line front end: output formats, exit codes, coverage of the API."""

from __future__ import annotations

import csv
import io
import json
import math
import shutil
import subprocess

import pytest

from cigarmartin import asymptotic, green, martin, specfun, sturm, surface
from cigarmartin.cli import COMMAND_OPERATIONS, emit_table, run

MODULES = (specfun, surface, green, sturm, asymptotic, martin)


# ---------------------------------------------------------------------------
# emit_table
# ---------------------------------------------------------------------------


def test_csv_round_trips_doubles():
    rows = [
        {"a": 1.0 / 3.0, "b": -2.5e-17, "c": 7},
        {"a": math.pi, "b": 0.1 + 0.2, "c": -1},
    ]
    data = emit_table(rows, "csv")
    text = data.decode("utf-8")
    assert text.count("\r\n") == 3
    parsed = list(csv.DictReader(io.StringIO(text)))
    for row, orig in zip(parsed, rows):
        assert float(row["a"]) == orig["a"]
        assert float(row["b"]) == orig["b"]
        assert int(row["c"]) == orig["c"]


def test_csv_scalar_formatting():
    rows = [{"flag": True, "other": False, "gap": None, "text": "x,y"}]
    text = emit_table(rows, "csv").decode("utf-8")
    assert text.splitlines()[1] == 'true,false,,"x,y"'


def test_csv_empty_with_columns_is_header_only():
    assert emit_table([], "csv", columns=["p", "q"]) == b"p,q\r\n"
    assert emit_table([], "csv") == b""


def test_json_formatting():
    rows = [{"v": 0.5, "flag": True, "gap": None, "bad": math.inf, "s": "hi"}]
    data = emit_table(rows, "json")
    decoded = json.loads(data)
    assert decoded == [{"v": 0.5, "flag": True, "gap": None, "bad": None, "s": "hi"}]
    assert emit_table([], "json") == b"[]\n"


def test_emit_table_rejects_ragged_rows():
    with pytest.raises(ValueError):
        emit_table([{"a": 1}, {"b": 2}], "csv")
    with pytest.raises(ValueError):
        emit_table([{"a": 1}], "xml")


# ---------------------------------------------------------------------------
# exit codes and usage errors
# ---------------------------------------------------------------------------


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "cigarmartin" in capsys.readouterr().out


def test_missing_group_and_action(capsys):
    assert run([]) == 2
    assert run(["surface"]) == 2
    capsys.readouterr()


def test_unknown_flag(capsys):
    assert run(["surface", "curvature", "--bogus", "1"]) == 2
    capsys.readouterr()


def test_missing_required_flag_names_it(capsys):
    assert run(["green", "eval", "--x", "0", "--y", "1", "--xi", "1"]) == 2
    assert "--eta" in capsys.readouterr().err


def test_kernel_needs_exactly_one_boundary_flag(capsys):
    base = ["martin", "kernel", "--x", "0", "--y", "2"]
    assert run(base + ["--theta", "1.0", "--xi", "2.0"]) == 2
    assert run(base) == 2
    capsys.readouterr()


def test_coincident_green_points_exit_one(capsys):
    code = run(["green", "eval", "--x", "0", "--y", "1", "--xi", "0", "--eta", "1"])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_bad_grid_syntax(capsys):
    assert run(["asym", "sweep", "--regime", "eta0", "--grid", "1:3"]) == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# command output
# ---------------------------------------------------------------------------


def test_curvature_values(capsys):
    y_min = math.log(2.0 + math.sqrt(3.0))
    assert run(["surface", "curvature", "--y", repr(y_min)]) == 0
    row = json.loads(capsys.readouterr().out)[0]
    assert row["gauss_curvature"] == pytest.approx(-5.0 / 3.0, rel=1e-12)
    assert row["metric_factor"] == pytest.approx(surface.metric_factor(y_min), rel=1e-15)


def test_green_eval_matches_library(capsys):
    assert run(["green", "eval", "--x", "0", "--y", "1", "--xi", "1", "--eta", "1"]) == 0
    row = json.loads(capsys.readouterr().out)[0]
    from cigarmartin.green import GreenQuery, green_eval
    from cigarmartin.surface import SurfacePoint

    want = green_eval(GreenQuery(SurfacePoint(0.0, 1.0), SurfacePoint(1.0, 1.0)))
    assert row["value"] == pytest.approx(want.value, rel=1e-12)
    assert row["nodes_used"] > 0


def test_geodesic_closed_form_rows(capsys):
    assert (
        run(["surface", "geodesic", "--kind", "ii", "--a", "1.2", "--n", "5"]) == 0
    )
    out = capsys.readouterr().out
    parsed = list(csv.DictReader(io.StringIO(out)))
    assert [r for r in parsed][0].keys() == {"y", "x"}
    assert len(parsed) == 5
    top = parsed[-1]
    assert float(top["y"]) == pytest.approx(1.2)
    # the apex value is sqrt-of-epsilon limited (x ~ C sqrt(a - y) near y = a)
    assert abs(float(top["x"])) < 1e-6


def test_classify_outputs_boundary_point(capsys):
    assert run(["surface", "classify", "--a", "1", "--m", "5", "--sign-x", "1"]) == 0
    row = json.loads(capsys.readouterr().out)[0]
    assert row["kind"] == "circle"
    assert 0.0 < row["theta"] < math.pi / 2.0


def test_sturm_scan_csv(capsys):
    assert (
        run(["sturm", "scan", "--lmin", "-1", "--lmax", "-0.5", "--n", "2"]) == 0
    )
    out = capsys.readouterr().out
    parsed = list(csv.DictReader(io.StringIO(out)))
    assert len(parsed) == 2
    assert set(parsed[0]) >= {"lam", "case", "confirmed_no_l2", "note"}
    assert all(r["confirmed_no_l2"] == "true" for r in parsed)


def test_asym_sweep_csv_columns(capsys):
    assert (
        run(
            [
                "asym", "sweep", "--regime", "eta0", "--grid", "1e-2,1e-3",
                "--x", "0", "--y", "1", "--xi", "1",
            ]
        )
        == 0
    )
    out = capsys.readouterr().out
    parsed = list(csv.DictReader(io.StringIO(out)))
    assert list(parsed[0].keys()) == [
        "parameter", "numeric", "predicted", "ratio", "fitted_rate",
    ]
    assert len(parsed) == 2
    assert float(parsed[0]["ratio"]) == pytest.approx(0.25, abs=1e-3)


def test_verify_uniqueness_pure_and_mixed(tmp_path, capsys):
    pure = tmp_path / "pure.json"
    pure.write_text(json.dumps([{"theta": math.pi / 2.0, "weight": 1.0}]))
    assert run(["martin", "verify-uniqueness", "--atoms", str(pure), "--b", "1.0"]) == 0
    row = json.loads(capsys.readouterr().out)[0]
    assert row["holds"] is True and row["first_violation_y"] is None

    mixed = tmp_path / "mixed.json"
    mixed.write_text(
        json.dumps(
            [
                {"theta": math.pi / 2.0, "weight": 0.5},
                {"theta": math.pi / 3.0, "weight": 0.5},
            ]
        )
    )
    assert run(["martin", "verify-uniqueness", "--atoms", str(mixed)]) == 0
    row = json.loads(capsys.readouterr().out)[0]
    assert row["holds"] is False
    assert row["first_violation_y"] == pytest.approx(4.35, abs=0.2)


def test_sturm_reconstruct_round_trip(tmp_path, capsys):
    import numpy as np

    grid = np.linspace(0.5, 2.5, 41)
    h = np.exp(-(((grid - 1.5) / 0.3) ** 2) / 2.0)
    src = tmp_path / "bump.csv"
    with src.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "h"])
        w.writerows(zip(grid, h))
    assert run(["sturm", "reconstruct", "--input", str(src), "--smax", "20"]) == 0
    cap = capsys.readouterr()
    parsed = list(csv.DictReader(io.StringIO(cap.out)))
    assert len(parsed) == 41
    assert "l2_rel_error" in cap.err
    mid = parsed[20]
    assert float(mid["h_input"]) == pytest.approx(1.0)
    assert float(mid["h_output"]) == pytest.approx(1.0, abs=0.05)


# ---------------------------------------------------------------------------
# config file merging and determinism
# ---------------------------------------------------------------------------


def test_config_supplies_defaults_flags_win(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"y": 2.0}))
    assert run(["surface", "curvature", "--config", str(cfg)]) == 0
    assert json.loads(capsys.readouterr().out)[0]["y"] == 2.0
    assert run(["surface", "curvature", "--config", str(cfg), "--y", "1.0"]) == 0
    assert json.loads(capsys.readouterr().out)[0]["y"] == 1.0


def test_config_must_be_object(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1, 2]")
    assert run(["surface", "curvature", "--config", str(cfg), "--y", "1"]) == 2
    capsys.readouterr()


def test_verify_identities_pass_and_deterministic(capsys):
    assert run(["verify", "identities", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    rows = list(csv.DictReader(io.StringIO(first)))
    assert rows and all(r["status"] == "pass" for r in rows)
    assert run(["verify", "identities", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    assert run(["verify", "identities", "--seed", "8"]) == 0
    assert capsys.readouterr().out != first


# ---------------------------------------------------------------------------
# API coverage and the installed entry point
# ---------------------------------------------------------------------------


def test_command_table_covers_every_public_operation():
    exported = {op for module in MODULES for op in module.PUBLIC_OPERATIONS}
    claimed = {op for ops in COMMAND_OPERATIONS.values() for op in ops}
    assert claimed <= exported, claimed - exported
    assert exported <= claimed, exported - claimed


def test_command_table_matches_handler_names():
    from cigarmartin.cli import _HANDLERS

    assert set(COMMAND_OPERATIONS) == set(_HANDLERS)


def test_installed_entry_point_smoke():
    exe = shutil.which("cigarmartin")
    assert exe, "console script cigarmartin not on PATH"
    proc = subprocess.run(
        [exe, "surface", "curvature", "--y", "1.0"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    row = json.loads(proc.stdout)[0]
    assert row["gauss_curvature"] == pytest.approx(-1.5637591686244545, rel=1e-12)
