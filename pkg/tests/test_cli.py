"""Command-line interface: argument handling, output formats, exit codes."""

import json
import math

import pytest

from deltashell import cli, verify
from deltashell.cli import main
from deltashell.verify import CheckResult


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    def test_solve_flag_mapping(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--mass", "1", "--radius", "1",
            "--coupling", "0.5", "--j", "1/2",
        )
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "two_j,M,r0,a,E,kappa,binding,residual,norm_constant"
        cells = row.split(",")
        assert cells[0] == "1" and float(cells[3]) == 0.5
        assert float(cells[4]) == pytest.approx(0.8741995069, abs=1e-9)

    def test_integer_j_rejected(self, capsys):
        code, _, err = run(capsys, "solve", "--coupling", "0.5", "--j", "1")
        assert code == 2
        assert "half-odd-integer" in err

    def test_missing_coupling_rejected(self, capsys):
        code, _, err = run(capsys, "solve", "--j", "1/2")
        assert code == 2
        assert "coupling" in err

    def test_unknown_flag_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--coupling", "0.5", "--frobnicate"])
        assert exc.value.code == 2

    def test_two_j_flag(self, capsys):
        code, out, _ = run(capsys, "solve", "--coupling", "0.5", "--two-j", "1")
        assert code == 0
        assert out.splitlines()[1].startswith("1,")

    def test_even_two_j_rejected(self, capsys):
        code, _, err = run(capsys, "solve", "--coupling", "0.5", "--two-j", "2")
        assert code == 2 and "half-odd-integer" in err

    def test_coupling_at_half_pi_rejected(self, capsys):
        code, _, err = run(capsys, "solve", "--coupling", repr(math.pi / 2), "--j", "1/2")
        assert code == 2 and "pi/2" in err


class TestConfigFile:
    def test_flags_override_file_overrides_defaults(self, capsys, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text(
            "# comment line\n"
            "mass = 1.0\n"
            "radius = 2.0   # inline comment\n"
            "coupling = 0.3\n"
            "precision = 8\n"
        )
        code, out, _ = run(
            capsys, "solve", "--config", str(conf), "--coupling", "1.1"
        )
        assert code == 0
        row = out.splitlines()[1].split(",")
        assert float(row[2]) == 2.0      # radius from file
        assert float(row[3]) == 1.1      # coupling from flag, beats file
        assert len(row[4].replace("-", "").replace(".", "").lstrip("0")) <= 8

    def test_malformed_config_rejected(self, capsys, tmp_path):
        conf = tmp_path / "bad.conf"
        conf.write_text("just some words\n")
        code, _, err = run(capsys, "solve", "--config", str(conf), "--coupling", "0.5")
        assert code == 2 and "key = value" in err

    def test_missing_config_rejected(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "solve", "--config", str(tmp_path / "nope.conf"), "--coupling", "0.5"
        )
        assert code == 2


class TestSolve:
    def test_empty_spectrum_header_only_exit_zero(self, capsys):
        code, out, _ = run(capsys, "solve", "--coupling", "0", "--j", "1/2", "--j", "3/2")
        assert code == 0
        assert out.strip() == "two_j,M,r0,a,E,kappa,binding,residual,norm_constant"

    def test_byte_identical_reruns(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, _, _ = run(
                capsys, "solve", "--coupling", "0.5", "--j", "1/2",
                "--j", "3/2", "--out", str(path),
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_reflected_channel_negates_energies(self, capsys):
        code, out_pos, _ = run(capsys, "solve", "--coupling", "0.5", "--j", "1/2")
        assert code == 0
        code, out_neg, _ = run(capsys, "solve", "--coupling", "-0.5", "--j=-1/2")
        assert code == 0
        e_pos = float(out_pos.splitlines()[1].split(",")[4])
        e_neg = float(out_neg.splitlines()[1].split(",")[4])
        assert e_neg == pytest.approx(-e_pos, abs=1e-12)

    def test_rows_sorted_by_energy_then_channel(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--coupling", "1.1", "--radius", "2",
            "--j", "1/2", "--j", "3/2", "--j", "5/2",
        )
        assert code == 0
        rows = [line.split(",") for line in out.splitlines()[1:]]
        keys = [(float(r[4]), int(r[0])) for r in rows]
        assert keys == sorted(keys)

    def test_json_payload(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--coupling", "0.5", "--j", "1/2", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["meta"]["coupling"] == 0.5
        assert payload["meta"]["command"] == "solve"
        assert payload["meta"]["units"].startswith("natural")
        assert len(payload["rows"]) == 1
        assert payload["rows"][0]["two_j"] == 1


class TestScan:
    def test_grid_order_and_groups(self, capsys):
        code, out, _ = run(
            capsys, "scan", "--scan-param", "a", "--grid", "0.2:0.6:3", "--j", "1/2"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "grid_value,two_j,state_index,E,binding"
        grid_vals = [float(l.split(",")[0]) for l in lines[1:]]
        assert grid_vals == [0.2, 0.4, 0.6]

    def test_csv_round_trip_precision(self, capsys):
        code, out, _ = run(
            capsys, "scan", "--scan-param", "a", "--grid", "0.3:0.9:3",
            "--j", "1/2", "--precision", "12",
        )
        assert code == 0
        for line in out.splitlines()[1:]:
            cells = line.split(",")
            e = float(cells[3])
            assert f"{e:.12g}" == cells[3]

    def test_singleton_grid_matches_solve(self, capsys):
        code, out_scan, _ = run(
            capsys, "scan", "--scan-param", "a", "--grid", "0.5:0.5:1", "--j", "1/2"
        )
        assert code == 0
        code, out_solve, _ = run(capsys, "solve", "--coupling", "0.5", "--j", "1/2")
        assert code == 0
        e_scan = float(out_scan.splitlines()[1].split(",")[3])
        e_solve = float(out_solve.splitlines()[1].split(",")[4])
        assert e_scan == e_solve

    def test_r0_scan(self, capsys):
        code, out, _ = run(
            capsys, "scan", "--scan-param", "r0", "--grid", "0.5:2:4",
            "--coupling", "0.7", "--j", "1/2",
        )
        assert code == 0
        assert len(out.splitlines()) == 5

    def test_non_monotone_grid_rejected(self, capsys):
        code, _, err = run(
            capsys, "scan", "--scan-param", "a", "--grid", "0.5:0.5:3", "--j", "1/2"
        )
        assert code == 2 and "non-monotone" in err

    def test_empty_grid_rejected(self, capsys):
        code, _, _ = run(
            capsys, "scan", "--scan-param", "a", "--grid", "0.2:0.6:0", "--j", "1/2"
        )
        assert code == 2

    def test_missing_scan_param_rejected(self, capsys):
        code, _, err = run(capsys, "scan", "--grid", "0.2:0.6:3", "--coupling", "0.5")
        assert code == 2 and "scan-param" in err

    def test_failure_marker_rows(self, capsys):
        # a grid crossing pi/2 exactly: that cell fails validation and is
        # marked with state_index -1 while the scan continues
        half_pi = math.pi / 2
        code, out, _ = run(
            capsys, "scan", "--scan-param", "a",
            "--grid", f"{half_pi - 0.4}:{half_pi + 0.4}:3", "--j", "1/2",
        )
        assert code == 0
        rows = [l.split(",") for l in out.splitlines()[1:]]
        marked = [r for r in rows if r[2] == "-1"]
        assert len(marked) == 1
        assert marked[0][3] == "nan"


class TestWavefunction:
    def test_shell_rows_and_tails(self, capsys):
        code, out, _ = run(
            capsys, "wavefunction", "--coupling", "0.5", "--j", "1/2",
            "--samples", "200",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "label,r,F,G,norm2"
        rows = [l.split(",") for l in lines[1:]]
        minus = next(r for r in rows if r[0] == "r0-")
        plus = next(r for r in rows if r[0] == "r0+")
        n_m, n_p = float(minus[4]), float(plus[4])
        assert abs(n_p / n_m - 1.0) <= 1e-10
        # the amplitudes themselves jump at the shell
        assert abs(float(plus[2]) - float(minus[2])) > 1e-3
        densities = [float(r[4]) for r in rows]
        peak = max(densities)
        assert densities[0] <= 1e-3 * peak          # origin suppression
        assert densities[-1] <= 1e-20 * peak        # far tail
        rs = [float(r[1]) for r in rows]
        assert rs == sorted(rs)

    def test_bad_state_index_exit_code(self, capsys):
        code, _, err = run(
            capsys, "wavefunction", "--coupling", "0.5", "--j", "1/2",
            "--state-index", "5",
        )
        assert code == 4 and "does not exist" in err

    def test_requires_single_channel(self, capsys):
        code, _, err = run(
            capsys, "wavefunction", "--coupling", "0.5", "--j", "1/2", "--j", "3/2"
        )
        assert code == 2 and "exactly one channel" in err

    def test_explicit_grid(self, capsys):
        code, out, _ = run(
            capsys, "wavefunction", "--coupling", "0.5", "--j", "1/2",
            "--grid", "0.1:3.0:30",
        )
        assert code == 0
        assert len(out.splitlines()) == 1 + 30 + 2  # header + grid + shell pair


class TestOracle:
    def test_default_demo_agrees(self, capsys):
        code, out, _ = run(capsys, "oracle", "--coupling", "0.5", "--j", "1/2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "two_j,state_index,E_analytic,E_oracle,error_bar,agree"
        cells = lines[1].split(",")
        assert cells[5] == "true"
        assert abs(float(cells[2]) - float(cells[3])) <= float(cells[4]) + 1e-4

    def test_free_case_both_empty(self, capsys):
        code, out, _ = run(capsys, "oracle", "--coupling", "0")
        assert code == 0
        assert len(out.splitlines()) == 1

    def test_single_huge_width_wide_bar(self, capsys):
        code, out, _ = run(
            capsys, "oracle", "--coupling", "0.5", "--sigmas", "0.1"
        )
        assert code == 0
        cells = out.splitlines()[1].split(",")
        assert float(cells[4]) >= 0.05  # wide bar
        assert cells[5] == "true"

    def test_disagreement_exit_code(self, capsys, monkeypatch):
        def fake_extrapolate(ch, p, sigmas, shape="gaussian", cfg=None, search=None):
            from deltashell.shooting import WidthExtrapolation

            return [
                WidthExtrapolation(
                    energy=0.5, error_bar=1e-6, exponent=1.0,
                    sigmas=tuple(sigmas), energies=(0.5,) * len(sigmas),
                )
            ]

        monkeypatch.setattr(cli, "extrapolate_to_zero_width", fake_extrapolate)
        code, out, _ = run(capsys, "oracle", "--coupling", "0.5", "--j", "1/2")
        assert code == 5
        assert out.splitlines()[1].split(",")[5] == "false"


class TestVerify:
    def test_passes_and_reports(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        assert "10/10 invariants passed" in out
        wronskian = next(l for l in out.splitlines() if "wronskian" in l)
        assert wronskian.startswith("PASS")
        worst = float(wronskian.split("worst error")[1].split(",")[0])
        assert worst <= 1e-12
        jump = next(l for l in out.splitlines() if "shell_phase_jump" in l)
        assert float(jump.split("worst error")[1].split(",")[0]) <= 1e-9

    def test_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr(
            verify, "run_battery",
            lambda: [CheckResult("synthetic", worst=1.0, tol=1e-12)],
        )
        code, out, err = run(capsys, "verify")
        assert code == 6
        assert "synthetic" in err
