import json

import pytest

from subenergy import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_osc_probs_geometric_case(capsys):
    code, out, _ = run_cli(capsys, "osc-probs", "--x", "3", "--y", "3",
                           "--nmax", "8", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,rho_nn"
    assert len(lines) == 10  # header + 9 rows
    first = lines[1].split(",")
    assert first[0] == "0" and float(first[1]) == 0.5


def test_qubit_dist_isolated_ground_state(capsys):
    code, out, _ = run_cli(capsys, "qubit-dist", "--epsilon", "0",
                           "--delta", "1", "--sx", "-1", "--sz", "0")
    assert code == 0
    header, row = out.strip().split("\n")
    values = dict(zip(header.split(","), row.split(",")))
    assert float(values["p_up"]) == 0.0
    assert float(values["p_down"]) == 1.0
    assert float(values["mean_energy"]) == -0.5
    assert float(values["purity"]) == 1.0


def test_ohmic_trajectory_row_count_and_schema(capsys):
    code, out, _ = run_cli(capsys, "ohmic-trajectory", "--alpha-max", "0.9",
                           "--steps", "10", "--cutoff", "10")
    assert code == 0
    lines = out.strip().split("\n")
    # golden column schema
    assert lines[0] == "alpha,x,y,purity,rho_00,rho_11,rho_22,rho_33"
    assert len(lines) == 11
    assert float(lines[1].split(",")[0]) == 0.0
    assert float(lines[-1].split(",")[0]) == 0.9


def test_qubit_crossover(capsys):
    code, out, _ = run_cli(capsys, "qubit-crossover", "--gap", "1",
                           "--alpha", "0.01", "--cutoff-ratio", "100")
    assert code == 0
    header, row = out.strip().split("\n")
    values = dict(zip(header.split(","), row.split(",")))
    assert abs(float(values["p_up_weak"]) - 0.046051701859880914) < 1e-15
    assert abs(float(values["p_thermal_at_t_star"])
               - float(values["p_up_weak"])) < 1e-12


def test_osc_cumulants(capsys):
    code, out, _ = run_cli(capsys, "osc-cumulants", "--x", "3", "--y", "1")
    assert code == 0
    header, row = out.strip().split("\n")
    values = dict(zip(header.split(","), row.split(",")))
    assert float(values["kappa1"]) == 1.0
    assert float(values["kappa2"]) == 1.0
    assert float(values["kappa3"]) == 3.0
    assert float(values["kappa4"]) == 13.0


def test_unknown_flag_is_validation_error(capsys):
    code, _, err = run_cli(capsys, "osc-purity", "--x", "3", "--y", "3",
                           "--bogus", "1")
    assert code == 1
    assert "bogus" in err


def test_unknown_command_is_validation_error(capsys):
    code, _, _ = run_cli(capsys, "no-such-command")
    assert code == 1


def test_missing_required_parameter(capsys):
    code, _, err = run_cli(capsys, "osc-purity", "--x", "3")
    assert code == 1
    assert "requires parameter" in err


def test_invalid_physics_is_validation_error(capsys):
    code, _, err = run_cli(capsys, "osc-purity", "--x", "0.5", "--y", "0.5")
    assert code == 1
    assert "uncertainty" in err


def test_seventeen_significant_digits(capsys):
    import math
    _, out, _ = run_cli(capsys, "osc-purity", "--x", "3", "--y", "1")
    header, row = out.strip().split("\n")
    purity = dict(zip(header.split(","), row.split(",")))["purity"]
    # 1/sqrt(3) printed to 17 significant digits parses back to the same double
    assert purity == "0.57735026918962584"
    assert float(purity) == 1.0 / math.sqrt(3.0)
    assert format(float(purity), ".17g") == purity


def test_json_structure_and_provenance(capsys):
    code, out, _ = run_cli(capsys, "osc-purity", "--x", "3", "--y", "3",
                           "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"config", "results", "provenance"}
    assert doc["config"]["command"] == "osc-purity"
    assert doc["provenance"]["package"] == "subenergy"
    assert doc["provenance"]["units"]["log_convention"] == "natural"
    row = dict(zip(doc["results"]["columns"], doc["results"]["rows"][0]))
    assert row["purity"] == pytest.approx(1 / 3, abs=1e-15)


def test_json_round_trip_reproduces_bytes(tmp_path, capsys):
    first = tmp_path / "run.json"
    code, _, _ = run_cli(capsys, "osc-cumulants", "--x", "2.7", "--y", "1.9",
                         "--format", "json", "--output", str(first))
    assert code == 0
    code, _, _ = run_cli(capsys, "osc-cumulants", "--config", str(first),
                         "--output", str(tmp_path / "rerun.json"))
    assert code == 0
    assert first.read_bytes() == (tmp_path / "rerun.json").read_bytes()


def test_flat_config_file_and_flag_override(tmp_path, capsys):
    conf = tmp_path / "osc.conf"
    conf.write_text("# shape parameters\nx = 3\ny = 3\nnmax = 4\n")
    code, out, _ = run_cli(capsys, "osc-probs", "--config", str(conf))
    assert code == 0
    assert len(out.strip().split("\n")) == 6  # header + 5 rows
    # flags win over file values
    code, out, _ = run_cli(capsys, "osc-probs", "--config", str(conf),
                           "--nmax", "2")
    assert len(out.strip().split("\n")) == 4


def test_config_file_unknown_key_lists_valid_keys(tmp_path, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("x = 3\ny = 3\nwidth = 7\n")
    code, _, err = run_cli(capsys, "osc-probs", "--config", str(conf))
    assert code == 1
    assert "width" in err and "nmax" in err  # offending and valid keys


def test_output_dir_environment_variable(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, _, _ = run_cli(capsys, "osc-purity", "--x", "3", "--y", "3",
                         "--output", "sub/purity.csv")
    assert code == 0
    target = tmp_path / "sub" / "purity.csv"
    assert target.exists()
    assert target.read_text().endswith("\n")
    assert "\r" not in target.read_text()


def test_verify_subset_passes(capsys):
    code, out, _ = run_cli(capsys, "verify-all", "--only", "qubit-purity-formula",
                           "--only", "crossover-roundtrip")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "check,passed,max_error,tolerance,detail"
    assert len(lines) == 3
    assert all(line.split(",")[1] == "true" for line in lines[1:])


def test_verify_prefix_selection(capsys):
    code, out, _ = run_cli(capsys, "verify-all", "--only", "cumulant-triple")
    assert code == 0
    names = [line.split(",")[0] for line in out.strip().split("\n")[1:]]
    assert names == ["cumulant-triple-closed-vs-fd",
                     "cumulant-triple-closed-vs-spectral",
                     "cumulant-triple-isolated"]


def test_verify_unknown_check_is_validation_error(capsys):
    code, _, err = run_cli(capsys, "verify-all", "--only", "no-such-check")
    assert code == 1
    assert "valid names" in err


def test_verify_tightened_tolerance_forces_controlled_failure(capsys):
    code, out, _ = run_cli(capsys, "verify-all",
                           "--only", "generating-equivalence-quadrature",
                           "--tolerance",
                           "generating-equivalence-quadrature=1e-16")
    assert code == 2
    line = out.strip().split("\n")[1]
    assert line.split(",")[1] == "false"


def test_oracle_verify_runs_oracle_checks_only(capsys):
    code, out, _ = run_cli(capsys, "oracle-verify", "--only", "ed-separable-limit")
    assert code == 0
    names = [line.split(",")[0] for line in out.strip().split("\n")[1:]]
    assert names == ["ed-separable-limit"]


def test_golden_column_schemas(capsys):
    # pinned header rows for every data command
    cases = {
        ("qubit-dist", "--epsilon", "1", "--delta", "1"):
            "omega,mean_energy,energy_minus,energy_plus,p_down,p_up,purity",
        ("qubit-crossover", "--gap", "1", "--alpha", "0.01",
         "--cutoff-ratio", "50"):
            "gap,alpha,cutoff_ratio,k,p_up_weak,t_star,p_thermal_at_t_star",
        ("osc-cumulants", "--x", "2", "--y", "2"):
            "x,y,mean_energy,uncertainty_product,kappa1,kappa2,kappa3,kappa4",
        ("osc-probs", "--x", "2", "--y", "2", "--nmax", "1"): "n,rho_nn",
        ("osc-purity", "--x", "2", "--y", "2"):
            "x,y,uncertainty_product,purity",
        ("ohmic-trajectory", "--alpha-max", "0.3", "--steps", "2",
         "--nmax", "1"): "alpha,x,y,purity,rho_00,rho_11",
        ("verify-all", "--only", "ohmic-boundary-values"):
            "check,passed,max_error,tolerance,detail",
    }
    for argv, header in cases.items():
        code, out, _ = run_cli(capsys, *argv)
        assert code == 0, argv
        assert out.split("\n", 1)[0] == header, argv


def test_osc_probs_auto_truncation_controls_tail(capsys):
    # without --nmax the truncation is chosen so the tail stays below 1e-10
    code, out, _ = run_cli(capsys, "osc-probs", "--x", "3", "--y", "3")
    assert code == 0
    rows = out.strip().split("\n")[1:]
    total = sum(float(r.split(",")[1]) for r in rows)
    assert 1.0 - total < 1e-10
    assert len(rows) == 34  # geometric ratio 1/2: 0.5^(n+1) tail bound


def test_ohmic_trajectory_uncertainty_abort_is_validation_error(capsys):
    code, _, err = run_cli(capsys, "ohmic-trajectory", "--alpha-max", "0.7",
                           "--steps", "8", "--cutoff", "1.05")
    assert code == 1
    assert "alpha" in err and "uncertainty" in err


def test_qubit_crossover_warns_outside_perturbative_regime(capsys):
    with pytest.warns(UserWarning, match="perturbative"):
        code, out, _ = run_cli(capsys, "qubit-crossover", "--gap", "1",
                               "--alpha", "0.2", "--cutoff-ratio", "100")
    assert code == 0  # the value is still reported


def test_verify_json_round_trip(tmp_path, capsys):
    first = tmp_path / "verify.json"
    code, _, _ = run_cli(capsys, "verify-all", "--only", "ohmic-boundary-values",
                         "--format", "json", "--output", str(first))
    assert code == 0
    doc = json.loads(first.read_text())
    assert doc["config"]["only"] == ["ohmic-boundary-values"]
    code, _, _ = run_cli(capsys, "verify-all", "--config", str(first),
                         "--output", str(tmp_path / "rerun.json"))
    assert code == 0
    assert first.read_bytes() == (tmp_path / "rerun.json").read_bytes()
