"""CLI: file parsing, exit codes, report determinism, offline re-validation."""

import json

import numpy as np
import pytest

from nistab.cli import main

SYSTEMS = {
    "schema_version": "1",
    "systems": {
        "osc": {
            "A": [[0, 1], [-1, 0]], "B": [[0], [1]], "C": [[1, 0]], "D": [[0]],
            "label": "lossless plant",
        },
        "ctrl_half": {"A": [[-1]], "B": [[1]], "C": [[0.5]], "D": [[0]]},
        "ctrl_two": {"A": [[-1]], "B": [[1]], "C": [[2]], "D": [[0]]},
        "first_order": {"A": [[-1]], "B": [[1]], "C": [[1]], "D": [[0]]},
        "s_over": {"A": [[-1]], "B": [[1]], "C": [[-1]], "D": [[1]]},
    },
}


@pytest.fixture
def system_file(tmp_path):
    path = tmp_path / "systems.json"
    path.write_text(json.dumps(SYSTEMS))
    return str(path)


class TestCertify:
    def test_first_order_ni(self, system_file, capsys):
        code = main(["certify", system_file, "first_order"])
        out = capsys.readouterr().out
        assert code == 0
        report = json.loads(out)
        assert report["certified"] is True
        assert report["results"]["frequency_ni"]["verdict"] == "NI"
        assert report["results"]["positive_real"]["verdict"] == "NI"
        np.testing.assert_allclose(report["results"]["lmi"]["P"], [[1.0]], atol=1e-8)

    def test_s_over_rejected(self, system_file, capsys):
        code = main(["certify", system_file, "s_over"])
        report = json.loads(capsys.readouterr().out)
        assert code == 1
        assert report["certified"] is False
        assert report["results"]["frequency_ni"]["verdict"] == "NotNI"
        assert report["results"]["frequency_ni"]["worst_point"]["min_eig"] < 0

    def test_sni_property(self, system_file, capsys):
        code = main(["certify", system_file, "ctrl_half", "--property", "sni"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["results"]["lmi"]["strict"] is True
        assert report["results"]["frequency_sni"]["verdict"] == "SNI"
        assert report["results"]["w_transfer_zeros"]["passed"] is True

    def test_oscillator_not_sni(self, system_file, capsys):
        code = main(["certify", system_file, "osc", "--property", "sni"])
        report = json.loads(capsys.readouterr().out)
        assert code == 1
        assert report["results"]["lmi"]["verdict"] == "Certified"
        assert report["results"]["lmi"]["strict"] is False

    def test_freq_csv(self, system_file, tmp_path, capsys):
        csv_path = tmp_path / "curve.csv"
        main(["certify", system_file, "first_order", "--freq-csv", str(csv_path),
              "--points", "10"])
        capsys.readouterr()
        lines = csv_path.read_text().strip().split("\n")
        assert lines[0] == "omega,min_eig,status"
        assert len(lines) == 11

    def test_missing_system(self, system_file, capsys):
        assert main(["certify", system_file, "nope"]) == 3

    def test_malformed_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": "1", "systems": {')
        assert main(["certify", str(bad), "x"]) == 2
        assert "byte offset" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["certify", str(tmp_path / "none.json"), "x"]) == 2

    def test_bad_schema(self, tmp_path, capsys):
        p = tmp_path / "v2.json"
        p.write_text('{"schema_version": "2", "systems": {}}')
        assert main(["certify", str(p), "x"]) == 2

    def test_dimension_error_in_file(self, tmp_path, capsys):
        p = tmp_path / "dims.json"
        p.write_text(json.dumps({
            "schema_version": "1",
            "systems": {"bad": {"A": [[0, 1]], "B": [[1]], "C": [[1]], "D": [[0]]}},
        }))
        assert main(["certify", str(p), "bad"]) == 3


class TestAnalyze:
    def test_stable_pair(self, system_file, capsys):
        code = main(["analyze", system_file, "osc", "ctrl_half"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["verdict"] == "InternallyStable"
        assert report["dc_gain"]["lambda_max"] == pytest.approx(0.5)
        assert report["closed_loop"]["max_real_part"] < 0
        assert report["lyapunov"]["min_eig_Q"] > 0
        assert report["lyapunov"]["derivative_identity_residual"] < 1e-7

    def test_unstable_pair(self, system_file, capsys):
        code = main(["analyze", system_file, "osc", "ctrl_two"])
        report = json.loads(capsys.readouterr().out)
        assert code == 1
        assert report["verdict"] == "HypothesisViolated"
        assert "dc_gain" in report["violated_hypotheses"]
        assert report["closed_loop"]["max_real_part"] > 0

    def test_byte_identical_reports(self, system_file, capsys):
        main(["analyze", system_file, "osc", "ctrl_half"])
        first = capsys.readouterr().out
        main(["analyze", system_file, "osc", "ctrl_half"])
        second = capsys.readouterr().out
        assert first == second

    def test_certificates_revalidate_offline(self, system_file, capsys):
        main(["analyze", system_file, "osc", "ctrl_half"])
        report = json.loads(capsys.readouterr().out)
        for name in ("osc", "ctrl_half"):
            sysd = report["systems"][name]
            A = np.array(sysd["A"], dtype=float)
            B = np.array(sysd["B"], dtype=float)
            C = np.array(sysd["C"], dtype=float)
            role = "plant" if name == "osc" else "controller"
            cert = report["certificates"][role]
            Y = np.array(cert["Y"], dtype=float)
            L = np.array(cert["L"], dtype=float).reshape(-1, A.shape[0])
            lyap = float(np.linalg.eigvalsh(-(A @ Y + Y @ A.T)).min())
            coup = float(np.linalg.norm(B + A @ Y @ C.T, "fro"))
            fact = float(np.linalg.norm(L.T @ L + A @ Y + Y @ A.T, "fro"))
            assert abs(lyap - cert["lyap_residual"]) <= 1e-12
            assert abs(coup - cert["coupling_residual"]) <= 1e-12
            assert abs(fact - cert["factor_residual"]) <= 1e-12

    def test_missing_controller(self, system_file):
        assert main(["analyze", system_file, "osc", "nope"]) == 3


class TestSimulate:
    def test_default_run(self, system_file, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        code = main(["simulate", system_file, "osc", "ctrl_half",
                     "--x0", "1,0,0", "--t-final", "5", "--out", str(out)])
        err = capsys.readouterr().err
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t,x1,x2,x3,V,ytilde2sq"
        assert len(lines) == 502
        assert "lyapunov monotone: pass" in err
        assert "dissipation bound: pass" in err

    def test_invalid_t_final(self, system_file, capsys):
        assert main(["simulate", system_file, "osc", "ctrl_half",
                     "--t-final", "0.0"]) == 3

    def test_x0_length_mismatch(self, system_file, capsys):
        assert main(["simulate", system_file, "osc", "ctrl_half",
                     "--x0", "1,0"]) == 3

    def test_hypothesis_warning_does_not_block(self, system_file, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        code = main(["simulate", system_file, "osc", "ctrl_two",
                     "--x0", "1,0,0", "--t-final", "1", "--out", str(out)])
        err = capsys.readouterr().err
        assert code == 0
        assert "hypothesis dc_gain violated" in err
        assert out.exists()


class TestSelftest:
    def test_small_run(self, capsys):
        code = main(["selftest", "--seed", "1", "--cases", "4"])
        out = capsys.readouterr().out
        assert code == 0
        assert "three_way_agreement" in out and "dc_necessity" in out

    def test_zero_cases_vacuous(self, capsys):
        code = main(["selftest", "--cases", "0"])
        assert code == 0
        assert "vacuous" in capsys.readouterr().err


class TestUsage:
    def test_no_command(self):
        assert main([]) == 3

    def test_version(self, capsys):
        assert main(["--version"]) == 0
