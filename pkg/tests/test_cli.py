"""Golden-file and exit-code tests for the ``engine`` command.

Regenerate the golden files with ``python3 tests/test_cli.py --regen`` after an
intentional change to report formats.
"""

import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import jsonschema
import pytest

from kimura import cli
from kimura.filtration import FiltrationReport

ROOT = Path(__file__).resolve().parents[1]
INSTANCE = str(ROOT / "docs" / "examples" / "instance.json")
GOLDEN = Path(__file__).resolve().parent / "golden"
SCHEMA = json.loads((ROOT / "docs" / "schema.json").read_text())

# name -> (argv after the subcommand's instance argument, expected exit code)
CASES = {
    "powers_wedge_Q3_n4": (["powers", INSTANCE, "--object", "Q3", "--kind", "wedge", "--n", "4"], 0),
    "powers_sym_odd_line_n2": (["powers", INSTANCE, "--object", "odd_line", "--kind", "sym", "--n", "2"], 0),
    "powers_schur_21_Q2": (["powers", INSTANCE, "--object", "Q2", "--kind", "schur", "--partition", "2,1"], 0),
    "powers_wedge_cone_n2": (["powers", INSTANCE, "--object", "cone_identity", "--kind", "wedge", "--n", "2"], 0),
    "powers_sym_Q2_n2": (["powers", INSTANCE, "--object", "Q2", "--kind", "sym", "--n", "2"], 0),
    "dim_plane_plus_odd": (["dim", INSTANCE, "--object", "plane_plus_odd"], 0),
    "dim_cone_identity": (["dim", INSTANCE, "--object", "cone_identity"], 0),
    "dim_shifted_plane": (["dim", INSTANCE, "--object", "shifted_plane"], 0),
    "filtration_line_in_plane_wedge": (["filtration", INSTANCE, "--map", "line_in_plane", "--m", "2", "--sign", "+"], 0),
    "filtration_line_in_plane_sym": (["filtration", INSTANCE, "--map", "line_in_plane", "--m", "2", "--sign", "-"], 0),
    "filtration_zero_in_plane": (["filtration", INSTANCE, "--map", "zero_in_plane", "--m", "2"], 0),
    "filtration_line_in_space_sym": (["filtration", INSTANCE, "--map", "line_in_space", "--m", "3", "--sign", "-"], 0),
    "filtration_not_injective": (["filtration", INSTANCE, "--map", "plane_onto_line", "--m", "2"], 2),
    "verify_line_in_space_wedge": (["verify", INSTANCE, "--map", "line_in_space", "--sign", "+"], 0),
    "verify_odd_sym": (["verify", INSTANCE, "--map", "odd_line_in_odd_plane", "--sign", "-"], 0),
    "verify_zero_in_plane": (["verify", INSTANCE, "--map", "zero_in_plane", "--sign", "+"], 0),
    "verify_mixed_inapplicable": (["verify", INSTANCE, "--map", "even_in_mixed", "--sign", "+"], 5),
    "idempotents_n1": (["idempotents", "--n", "1"], 0),
    "idempotents_n3": (["idempotents", "--n", "3"], 0),
    "idempotents_n9_cap": (["idempotents", "--n", "9"], 3),
    "split_invertible": (["split", INSTANCE, "--task", "invertible"], 0),
    "split_degenerate": (["split", INSTANCE, "--task", "degenerate"], 0),
    "split_diagonal": (["split", INSTANCE, "--task", "diagonal"], 0),
    "split_singular": (["split", INSTANCE, "--task", "singular_a"], 2),
    "powers_cap_m": (["powers", INSTANCE, "--object", "Q2", "--kind", "wedge", "--n", "4", "--cap-m", "3"], 3),
    "powers_unknown_object": (["powers", INSTANCE, "--object", "nope", "--kind", "wedge", "--n", "2"], 2),
}

TEXT_CASES = ["filtration_line_in_plane_sym", "dim_plane_plus_odd", "idempotents_n3", "split_invertible"]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


def golden_path(name, ext="json"):
    return GOLDEN / f"{name}.{ext}"


@pytest.mark.parametrize("name", sorted(CASES))
def test_json_golden(name):
    argv, code = CASES[name]
    got_code, out, _ = run(argv + ["--json"])
    assert got_code == code
    assert out == golden_path(name).read_text()


@pytest.mark.parametrize("name", TEXT_CASES)
def test_text_golden(name):
    argv, code = CASES[name]
    got_code, out, _ = run(argv)
    assert got_code == code
    assert out == golden_path(name, "txt").read_text()


def _schema_for(report):
    if "error" in report:
        return "error_report"
    return f"{report['command']}_report"


@pytest.mark.parametrize("name", sorted(CASES))
def test_reports_match_published_schema(name):
    report = json.loads(golden_path(name).read_text())
    schema = {**SCHEMA, "$ref": f"#/$defs/{_schema_for(report)}"}
    jsonschema.validate(report, schema)


def test_instance_matches_published_schema():
    schema = {**SCHEMA, "$ref": "#/$defs/instance"}
    jsonschema.validate(json.loads(Path(INSTANCE).read_text()), schema)


def test_output_is_deterministic():
    argv, _ = CASES["filtration_line_in_space_sym"]
    assert run(argv + ["--json"])[1] == run(argv + ["--json"])[1]


def test_timings_are_opt_in():
    argv, _ = CASES["powers_sym_Q2_n2"]
    assert "elapsed_seconds" not in json.loads(run(argv + ["--json"])[1])
    assert json.loads(run(argv + ["--json", "--timings"])[1])["elapsed_seconds"] >= 0


def test_threads_do_not_change_output():
    argv, _ = CASES["filtration_line_in_space_sym"]
    assert run(argv + ["--json", "--threads", "3"])[1] == run(argv + ["--json"])[1]


def test_expected_values_in_goldens():
    load = lambda n: json.loads(golden_path(n).read_text())
    assert load("powers_wedge_Q3_n4")["verdict"] == "vanishes"
    assert load("powers_sym_odd_line_n2")["total_dim"] == 0
    assert load("powers_schur_21_Q2")["total_dim"] == 4
    d = load("dim_plane_plus_odd")
    assert (d["even_dimension"], d["odd_dimension"]) == (2, 1)
    d = load("dim_cone_identity")
    assert (d["even_dimension"], d["odd_dimension"]) == (0, 0)
    d = load("dim_shifted_plane")
    assert (d["even_dimension"], d["odd_dimension"]) == (0, 2)
    assert len(load("filtration_line_in_plane_wedge")["levels"]) == 3
    assert len(load("filtration_zero_in_plane")["levels"]) == 1
    rows = load("idempotents_n3")["rows"]
    assert len(rows) == 3 and sum(r["hook_dimension"] ** 2 for r in rows) == 6
    assert load("split_invertible")["t"]["blocks"] == {"0": [["-2"]]}
    assert load("split_degenerate")["t"]["blocks"] == {}


def test_exit_code_for_failed_verification(monkeypatch):
    real = cli.filtration_report

    def broken(*args, **kwargs):
        r = real(*args, **kwargs)
        return FiltrationReport(r.m, r.sign, r.dims_X, r.dims_Y, r.dims_Z, r.levels, r.power_dims,
                                r.telescoping, False, r.boundary)

    monkeypatch.setattr(cli, "filtration_report", broken)
    code, out, _ = run(CASES["filtration_line_in_plane_wedge"][0] + ["--json"])
    assert code == 4
    assert json.loads(out)["verdict"] == "fail"


def test_usage_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": "2"}')
    assert run(["dim", str(bad), "--object", "Q"])[0] == 2
    bad.write_text("not json")
    assert run(["dim", str(bad), "--object", "Q"])[0] == 2
    assert run(["powers", INSTANCE, "--object", "Q2", "--kind", "wedge"])[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["powers", INSTANCE, "--kind", "wedge"])
    assert exc.value.code == 2


def test_cap_dim_flag():
    code, out, _ = run(["powers", INSTANCE, "--object", "Q3", "--kind", "sym", "--n", "2", "--cap-dim", "2", "--json"])
    assert code == 3 and json.loads(out)["error"] == "cap_exceeded"


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kimura.cli", *CASES["idempotents_n1"][0], "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == golden_path("idempotents_n1").read_text()


def regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for name, (argv, _) in CASES.items():
        golden_path(name).write_text(run(argv + ["--json"])[1])
    for name in TEXT_CASES:
        golden_path(name, "txt").write_text(run(CASES[name][0])[1])


if __name__ == "__main__":
    if "--regen" in sys.argv:
        regenerate()
