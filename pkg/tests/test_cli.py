"""Command-line interface: output formats and the exit-code contract."""

import json

import pytest

from mbrwa.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulate:
    ARGS = (
        "simulate",
        "--system", "mb5",
        "--method", "rk4",
        "--init", "0,0,0,0,1.5",
        "--t-end", "1",
        "--h", "0.25",
    )

    def test_equilibrium_rows_constant(self, capsys):
        code, out, _ = run(capsys, *self.ARGS)
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert lines[0] == "t,x1,y1,x2,y2,z,H,C,J"
        assert len(lines) == 6
        for line in lines[1:]:
            fields = line.split(",")
            assert fields[1:6] == ["0", "0", "0", "0", "1.5"]
            assert fields[6] == "1.125"  # H = z^2 / 2
            assert fields[7] == "1.5"
            assert fields[8] == "0"

    def test_csv_values_round_trip_at_full_precision(self, capsys):
        argv = list(self.ARGS)
        argv[argv.index("--init") + 1] = "1,0.5,-0.3,0.2,0.1"
        code, out, _ = run(capsys, *argv)
        assert code == EXIT_OK
        from mbrwa import integrators, model

        traj = integrators.integrate(
            integrators.IntegratorId.RK4,
            model.SystemId.MB5,
            (1, 0.5, -0.3, 0.2, 0.1),
            0.0,
            1.0,
            0.25,
        )
        rows = [line.split(",") for line in out.strip().split("\n")[1:]]
        for row, state in zip(rows, traj.states):
            # 17 significant digits reproduce the binary doubles exactly
            assert [float(v) for v in row[1:6]] == list(state)

    def test_every_decimation_keeps_last_row(self, capsys):
        code, out, _ = run(capsys, *self.ARGS, "--every", "3")
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert [line.split(",")[0] for line in lines[1:]] == ["0", "0.75", "1"]

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "traj.csv"
        code, out, _ = run(capsys, *self.ARGS, "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert target.read_text().startswith("t,x1,y1,x2,y2,z,H,C,J\n")

    def test_ham6_header(self, capsys):
        code, out, _ = run(
            capsys,
            "simulate",
            "--system", "ham6",
            "--method", "midpoint",
            "--init", "1,0.5,-0.3,0.2,0.1,0.4",
            "--t-end", "0.5",
            "--h", "0.1",
        )
        assert code == EXIT_OK
        assert out.split("\n")[0] == "t,q1,q2,q3,p1,p2,p3,Htilde,Ctilde,Jtilde"


class TestUsageErrors:
    def test_missing_h(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(
                [
                    "simulate",
                    "--system", "mb5",
                    "--method", "rk4",
                    "--init", "0,0,0,0,1",
                    "--t-end", "1",
                ]
            )
        assert exc.value.code == EXIT_USAGE

    def test_wrong_init_arity(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(
                [
                    "simulate",
                    "--system", "mb5",
                    "--method", "rk4",
                    "--init", "1,2,3",
                    "--t-end", "1",
                    "--h", "0.1",
                ]
            )
        assert exc.value.code == EXIT_USAGE
        assert "needs 5 components, got 3" in capsys.readouterr().err

    def test_non_numeric_init(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(
                [
                    "simulate",
                    "--system", "mb5",
                    "--method", "rk4",
                    "--init", "1,2,3,4,oops",
                    "--t-end", "1",
                    "--h", "0.1",
                ]
            )
        assert exc.value.code == EXIT_USAGE

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_USAGE


class TestInvariants:
    def test_midpoint_ctilde_drift(self, capsys):
        code, out, _ = run(
            capsys,
            "invariants",
            "--system", "ham6",
            "--method", "midpoint",
            "--init", "1,0.5,-0.3,0.2,0.1,0.4",
            "--t-end", "10",
            "--h", "0.01",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["system"] == "ham6"
        assert payload["steps"] == 1000
        assert payload["invariants"]["Ctilde"]["max_abs_deviation"] <= 1e-11
        assert payload["invariants"]["Jtilde"]["max_abs_deviation"] <= 1e-10


class TestVerify:
    def test_all_suites_pass(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == EXIT_OK
        reports = json.loads(out)
        assert len(reports) >= 20
        assert all(r["status"] == "pass" for r in reports)

    def test_single_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "cocycle")
        assert code == EXIT_OK
        reports = json.loads(out)
        assert any(r["check"] == "cocycle" for r in reports)

    def test_mutated_tensor_fails(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "poisson", "--mutate-pi", "2,5,both")
        assert code == EXIT_VERIFY
        reports = json.loads(out)
        failed = [r for r in reports if r["status"] == "fail"]
        assert failed
        assert any(any(res != "0" for res in r["residuals"]) for r in failed)

    def test_mutated_family_fails(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--suite", "symmetry", "--mutate-family", "eta1:q2"
        )
        assert code == EXIT_VERIFY

    def test_bad_mutate_argument(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--mutate-pi", "2"])
        assert exc.value.code == EXIT_USAGE


class TestBracketTable:
    def test_json_tables(self, capsys):
        code, out, _ = run(capsys, "bracket-table")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["phase-space-algebra"]["2,5"] == ["1", "0", "0", "0", "0"]
        assert payload["symmetry-matrix-algebra"]["1,3"] == ["0", "0", "-1", "0"]
        assert (
            payload["symmetry-point-fields"] == payload["symmetry-matrix-algebra"]
        )


class TestSolveSymmetries:
    def test_dimension_four(self, capsys):
        code, out, _ = run(capsys, "solve-symmetries", "--max-degree", "2")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["dimension"] == 4
        assert payload["matches_reference_family"] is True
        assert len(payload["basis"]) == 4

    def test_degree_validation(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve-symmetries", "--max-degree", "0"])
        assert exc.value.code == EXIT_USAGE


def test_version(capsys):
    from mbrwa import __version__

    code, out, _ = run(capsys, "version")
    assert code == EXIT_OK
    assert out.strip() == __version__
