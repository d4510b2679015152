import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from anyon_carnot.cli import main
from anyon_carnot.cycle import CycleConfig
from anyon_carnot.records import config_dumps, config_loads
from oracles import count_with_excitation

GOLDEN = Path(__file__).parent / "golden"
REF_FLAGS = ["--t-h", "2", "--t-c", "1", "--nu-a", "0", "--nu-b", "1", "--nu-c", "1", "--nu-d", "0"]
SWEEP_FIXED = ["--t-h", "2", "--t-c", "1", "--nu-a", "0", "--nu-c", "1", "--nu-d", "0"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def golden(name):
    return (GOLDEN / name).read_text()


# --- cycle -------------------------------------------------------------------------


def test_cycle_json_golden(capsys):
    code, out, _ = run(capsys, "cycle", "--config", GOLDEN / "reference_config.json")
    assert code == 0
    assert out == golden("cycle_reference.json")


def test_cycle_csv_golden(capsys):
    code, out, _ = run(capsys, "cycle", *REF_FLAGS, "--format", "csv")
    assert code == 0
    assert out == golden("cycle_reference.csv")
    assert len(out.splitlines()) == 2


def test_cycle_json_schema(capsys):
    _, out, _ = run(capsys, "cycle", *REF_FLAGS)
    rec = json.loads(out)
    assert list(rec) == ["t_h", "t_c", "nu_a", "nu_b", "nu_c", "nu_d", "q_in", "q_out", "work", "eta_qce", "eta_cce", "flags"]


def test_cycle_csv_and_json_carry_same_numbers(capsys):
    flags = ["--t-h", "2", "--t-c", "1", "--nu-a", "0.2", "--nu-b", "0.8", "--nu-c", "0.6", "--nu-d", "0.1"]
    _, js, _ = run(capsys, "cycle", *flags)
    _, cs, _ = run(capsys, "cycle", *flags, "--format", "csv")
    rec = json.loads(js)
    row = next(csv.DictReader(io.StringIO(cs)))
    for key in ("t_h", "t_c", "nu_a", "nu_b", "nu_c", "nu_d", "q_in", "q_out", "work", "eta_qce", "eta_cce"):
        assert float(row[key]) == rec[key]
    assert row["valid"] == "true"


def test_flags_override_config_file(capsys):
    _, base, _ = run(capsys, "cycle", "--config", GOLDEN / "reference_config.json", "--nu-d", "0.5")
    assert json.loads(base)["nu_d"] == 0.5


def test_series_route_flag(capsys):
    _, out, _ = run(capsys, "cycle", *REF_FLAGS, "--route", "series")
    assert json.loads(out)["eta_qce"] == pytest.approx(0.04672640804734152, rel=1e-9)


def test_undefined_efficiency_serialisation(capsys):
    flags = ["--t-h", "1.01", "--t-c", "1", "--nu-a", "0", "--nu-b", "0", "--nu-c", "0", "--nu-d", "1"]
    _, js, _ = run(capsys, "cycle", *flags)
    _, cs, _ = run(capsys, "cycle", *flags, "--format", "csv")
    assert json.loads(js)["eta_qce"] is None
    assert cs.splitlines()[1].endswith(",nan,0.0099009900990099098,false")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "cycle", *REF_FLAGS, "--output", target)
    assert code == 0 and out == ""
    assert target.read_text() == golden("cycle_reference.json")


def test_config_round_trip(tmp_path):
    cfg = CycleConfig(3.25, 1.1, 0.1, 0.7, 0.30000000000000004, 1.0, hbar_omega=2.5, k_b=0.75)
    text = config_dumps(cfg)
    assert config_loads(text) == cfg
    assert set(json.loads(text)) == {"t_h", "t_c", "nu_a", "nu_b", "nu_c", "nu_d", "hbar_omega", "k_b"}


# --- exit codes ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv,field",
    [
        (["--t-h", "1", "--t-c", "1", "--nu-a", "0", "--nu-b", "1", "--nu-c", "1", "--nu-d", "0"], "t_c"),
        (["--t-h", "1", "--t-c", "2", "--nu-a", "0", "--nu-b", "1", "--nu-c", "1", "--nu-d", "0"], "t_c"),
        (["--t-h", "2", "--t-c", "1", "--nu-a", "0", "--nu-b", "1.5", "--nu-c", "1", "--nu-d", "0"], "nu_b"),
        (["--t-h", "2", "--t-c", "1", "--nu-a", "0", "--nu-b", "1", "--nu-c", "1"], "nu_d"),
    ],
)
def test_cycle_validation_exit_2(capsys, argv, field):
    code, out, err = run(capsys, "cycle", *argv)
    assert code == 2 and out == ""
    assert len(err.strip().splitlines()) == 1
    assert field in err


def test_bad_json_config_exit_2(tmp_path, capsys):
    bad = tmp_path / "c.json"
    bad.write_text("{not json")
    assert run(capsys, "cycle", "--config", bad)[0] == 2
    bad.write_text("[1, 2]")
    assert run(capsys, "cycle", "--config", bad)[0] == 2


def test_unparseable_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["cycle", "--t-h", "hot"])
    assert info.value.code == 2
    capsys.readouterr()


def test_missing_config_exit_3(tmp_path, capsys):
    assert run(capsys, "cycle", "--config", tmp_path / "absent.json")[0] == 3


def test_unwritable_output_exit_3(tmp_path, capsys):
    assert run(capsys, "cycle", *REF_FLAGS, "--output", tmp_path / "no" / "such" / "dir.json")[0] == 3


def test_verify_failure_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "--nu", "0.5", "--x", "1", "--tolerance", "1e-30")
    assert code == 1
    assert json.loads(out)["summary"]["all_pass"] is False


def test_sweep_cap_exit_4(capsys):
    code, out, err = run(capsys, "sweep", *SWEEP_FIXED, "--vary", "nu_b=0:1:50", "--cap", "10")
    assert code == 4 and out == ""
    assert "cap" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--quantities", "Q"],
        ["verify", "--x", "0"],
        ["spectrum", "--nu", "2.5", "--n-max", "2"],
        ["spectrum", "--nu", "0.5", "--e-max", "-1"],
        ["sweep", *SWEEP_FIXED, "--vary", "nu_b:0:1:3"],
        ["sweep", *SWEEP_FIXED, "--vary", "nu_b=0:2:3"],
        ["sweep", "--t-h", "2", "--vary", "nu_b=0:1:3"],
        ["sweep", *SWEEP_FIXED, "--vary", "nu_b=0:1:3", "--refine", "2"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


# --- spectrum ------------------------------------------------------------------------


def test_spectrum_golden_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--nu", "1", "--n-max", "4", "--format", "csv")
    assert code == 0 and out == golden("spectrum_nu1_n4.csv")


def test_spectrum_golden_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--nu", "1", "--n-max", "4")
    assert code == 0 and out == golden("spectrum_nu1_n4.json")
    rows = json.loads(out)
    assert len(rows) == 2 * sum(count_with_excitation(n) for n in range(5))
    for r in rows:
        assert r["energy"] == 3 + r["j"] + r["k"] + 2 * r["l"] + 2 * r["m"]


def test_spectrum_energy_cutoff_examples(capsys):
    _, out, _ = run(capsys, "spectrum", "--nu", "0", "--e-max", "2.5", "--format", "csv")
    assert out.splitlines()[1:] == ["I,0,0,0,0,2"]
    _, out, _ = run(capsys, "spectrum", "--nu", "1", "--e-max", "3", "--format", "csv")
    assert out.splitlines()[1:] == ["I,0,0,0,0,3", "II,0,0,0,0,3"]


def test_spectrum_row_count_against_quadruple_loop(capsys):
    _, out, _ = run(capsys, "spectrum", "--nu", "0", "--n-max", "6", "--format", "csv")
    assert len(out.splitlines()) - 1 == 2 * sum(count_with_excitation(n) for n in range(7))


# --- verify --------------------------------------------------------------------------


def test_verify_default_grid_matches_golden(capsys):
    code, out, _ = run(capsys, "verify", "--format", "csv")
    assert code == 0
    got = list(csv.DictReader(io.StringIO(out)))
    want = list(csv.DictReader(io.StringIO(golden("verify_default.csv"))))
    assert len(got) == len(want) == 11 * 6 * 3 + 11 * 11 * 6
    for g, w in zip(got, want):
        assert (g["quantity"], g["nu"], g["nu_prime"], g["x"], g["pass"]) == (w["quantity"], w["nu"], w["nu_prime"], w["x"], "true")
        assert float(g["closed"]) == pytest.approx(float(w["closed"]), rel=1e-13)
        assert float(g["truncated"]) == pytest.approx(float(w["truncated"]), rel=1e-13)
        assert float(g["rel_err"]) <= 1e-9


def test_verify_single_fermion_point(capsys):
    code, out, _ = run(capsys, "verify", "--nu", "1", "--x", "1", "--quantities", "Z")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    exact = 1.0 / (8 * math.sinh(0.5) ** 2 * math.sinh(1.0) ** 2)
    assert row["closed"] == pytest.approx(exact, rel=1e-14)
    # closed and exact may differ by an ulp, so compare rel_err absolutely
    assert row["rel_err"] == pytest.approx(abs(row["truncated"] - exact) / exact, abs=1e-15)
    assert row["rel_err"] <= 1e-9
    assert row["pass"] is True


# --- sweep ---------------------------------------------------------------------------


def test_sweep_three_rows_and_summary(capsys):
    code, out, _ = run(capsys, "sweep", *SWEEP_FIXED, "--vary", "nu_b=0:1:3", "--format", "csv", "--objective", "max_work")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("t_h,t_c")
    data = [ln for ln in lines[1:] if not ln.startswith("#")]
    assert len(data) == 3
    assert lines[-2] == "# grid_size=3 rows=3 skipped=0 objective=max_work"
    assert lines[-1].startswith("# best=")


def test_sweep_json_metadata(capsys):
    _, out, _ = run(capsys, "sweep", *SWEEP_FIXED, "--vary", "nu_b=0:1:3", "--objective", "max_work")
    doc = json.loads(out)
    assert doc["metadata"]["rows"] == 3 and len(doc["rows"]) == 3
    assert doc["metadata"]["best"]["work"] == max(r["work"] for r in doc["rows"])


def test_sweep_skips_invalid_temperatures(tmp_path, capsys):
    spec = {"ranges": {"t_c": [0.5, 3.0, 6]}, "fixed": {"t_h": 2, "nu_a": 0, "nu_b": 1, "nu_c": 1, "nu_d": 0}}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    _, out, _ = run(capsys, "sweep", "--spec", path)
    meta = json.loads(out)["metadata"]
    assert meta["skipped"] == 3 and meta["rows"] == 3 and meta["grid_size"] == 6


def test_sweep_byte_identical(capsys):
    argv = ["sweep", *SWEEP_FIXED, "--vary", "nu_b=0:1:7", "--vary", "t_c=0.5:1.5:3", "--objective", "max_efficiency"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    assert run(capsys, *argv, "--workers", "2")[1] == first


def test_sweep_refine(capsys):
    fixed = ["--t-h", "3", "--t-c", "1", "--nu-a", "0.1", "--nu-c", "0.37", "--nu-d", "0.05"]
    code, out, _ = run(capsys, "sweep", *fixed, "--vary", "nu_b=0:1:11", "--objective", "max_work", "--refine", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["width"] <= 4.0**-5 + 1e-15
    assert doc["lo"] <= doc["best"]["nu_b"] <= doc["hi"]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "anyon_carnot", "cycle", *REF_FLAGS, "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == golden("cycle_reference.csv")
