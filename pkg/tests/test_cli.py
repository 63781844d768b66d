import json
import math
import os

import pytest

from qspectra import E1, E2, ONE, Quaternion, QMatrix, QVector, s_spectrum
from qspectra.cli import dumps, main


@pytest.fixture
def matrix_file(tmp_path):
    t = QMatrix.diagonal([E1, E2])
    path = tmp_path / "t.json"
    path.write_text(json.dumps(t.to_json()))
    return str(path)


@pytest.fixture
def jordan_file(tmp_path):
    t = QMatrix([[E1, ONE], [Quaternion(), E1]])
    path = tmp_path / "jordan.json"
    path.write_text(json.dumps(t.to_json()))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSSpectrum:
    def test_matches_library(self, capsys, matrix_file):
        code, out, _ = run(capsys, ["sspectrum", matrix_file])
        assert code == 0
        t = QMatrix.diagonal([E1, E2])
        assert out.strip() == dumps(s_spectrum(t).to_json())
        data = json.loads(out)
        assert data["spheres"][0]["mult"] == 2
        assert data["spheres"][0]["v"] == pytest.approx(1.0, abs=1e-12)

    def test_zero_matrix(self, capsys, tmp_path):
        path = tmp_path / "z.json"
        path.write_text(json.dumps(QMatrix.zeros(2).to_json()))
        code, out, _ = run(capsys, ["sspectrum", str(path)])
        assert code == 0
        data = json.loads(out)
        assert data["spheres"] == [{"u": 0.0, "v": 0.0, "mult": 2}]

    def test_deterministic_bytes(self, capsys, matrix_file):
        _, out1, _ = run(capsys, ["sspectrum", matrix_file])
        _, out2, _ = run(capsys, ["sspectrum", matrix_file])
        assert out1 == out2

    def test_parse_error_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, ["sspectrum", str(bad)])
        assert code == 2 and "error" in err

    def test_missing_file_exit_2(self, capsys):
        code, _, _ = run(capsys, ["sspectrum", "no_such_file.json"])
        assert code == 2


class TestFuncalc:
    def test_square(self, capsys, matrix_file):
        code, out, _ = run(capsys, ["funcalc", matrix_file, "--fn", "poly:0,0,1"])
        assert code == 0
        got = QMatrix.from_json(json.loads(out)["result"])
        t = QMatrix.diagonal([E1, E2])
        assert (got - t @ t).norm() < 1e-8

    def test_euler(self, capsys, tmp_path):
        path = tmp_path / "pi.json"
        path.write_text(json.dumps(QMatrix.diagonal([E1 * math.pi]).to_json()))
        code, out, _ = run(capsys, ["funcalc", str(path), "--fn", "exp"])
        assert code == 0
        got = QMatrix.from_json(json.loads(out)["result"])
        assert (got - QMatrix.diagonal([Quaternion(-1.0)])).norm() < 1e-10

    def test_taylor_route_reports_residual(self, capsys, jordan_file):
        code, out, _ = run(capsys, ["funcalc", jordan_file, "--fn", "exp",
                                    "--taylor"])
        assert code == 0
        data = json.loads(out)
        assert data["route"] == "taylor"
        assert data["cross_residual"] < 1e-6

    def test_bad_fn_exit_2(self, capsys, matrix_file):
        code, _, _ = run(capsys, ["funcalc", matrix_file, "--fn", "nope"])
        assert code == 2

    def test_inadmissible_fn_exit_4(self, capsys, matrix_file):
        # pole sphere of 1/(1 + s^2) meets the spectrum
        code, _, err = run(capsys, ["funcalc", matrix_file, "--fn",
                                    "rat:1/1,0,1"])
        assert code == 4 and "error" in err


class TestDecompose:
    def test_identity(self, capsys, tmp_path):
        path = tmp_path / "i.json"
        path.write_text(json.dumps(QMatrix.identity(2).to_json()))
        code, out, _ = run(capsys, ["decompose", str(path)])
        assert code == 0
        data = json.loads(out)
        assert data["type_m"] == 0
        s = QMatrix.from_json(data["S"])
        n = QMatrix.from_json(data["N"])
        assert (s - QMatrix.identity(2)).norm() < 1e-10
        assert n.norm() < 1e-10

    def test_jordan_type(self, capsys, jordan_file):
        code, out, _ = run(capsys, ["decompose", jordan_file])
        assert code == 0
        data = json.loads(out)
        assert data["type_m"] == 1

    def test_real_diagonal_orientation_zero(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        path.write_text(json.dumps(
            QMatrix.diagonal([Quaternion(1.0), Quaternion(2.0)]).to_json()))
        code, out, _ = run(capsys, ["decompose", str(path)])
        assert code == 0
        j = QMatrix.from_json(json.loads(out)["system"]["J"])
        assert j.norm() == 0.0

    def test_conditioning_exit_5(self, capsys, tmp_path):
        t = QMatrix.diagonal([E1, E1 * (1.0 + 5e-8)])
        path = tmp_path / "close.json"
        path.write_text(json.dumps(t.to_json()))
        code, _, _ = run(capsys, ["decompose", str(path)])
        assert code == 5


class TestResolvent:
    def test_matches_library(self, capsys, tmp_path, matrix_file):
        vec = tmp_path / "v.json"
        vec.write_text(json.dumps(QVector.basis(2, 0).to_json()))
        code, out, _ = run(capsys, ["resolvent", matrix_file,
                                    "--s", "2,0,0,0", "--vec", str(vec)])
        assert code == 0
        got = QVector.from_json(json.loads(out)["result"])
        # (2 - e1)^-1 on the first slot
        expected = (Quaternion(2.0) - E1).inverse()
        assert abs(got[0] - expected) < 1e-12

    def test_near_spectrum_exit_3(self, capsys, tmp_path, matrix_file):
        vec = tmp_path / "v.json"
        vec.write_text(json.dumps(QVector.basis(2, 0).to_json()))
        code, _, _ = run(capsys, ["resolvent", matrix_file,
                                  "--s", "0,1,0,0", "--vec", str(vec)])
        assert code == 3

    def test_bad_quaternion_exit_2(self, capsys, tmp_path, matrix_file):
        vec = tmp_path / "v.json"
        vec.write_text(json.dumps(QVector.basis(2, 0).to_json()))
        code, _, _ = run(capsys, ["resolvent", matrix_file,
                                  "--s", "1,2", "--vec", str(vec)])
        assert code == 2


class TestCex:
    def test_rows_and_bound(self, capsys):
        code, out, _ = run(capsys, ["cex", "--m", "10"])
        assert code == 0
        data = json.loads(out)
        assert len(data["rows"]) == 10
        for row in data["rows"]:
            assert row["j_norm"] >= row["lower_bound"]
        norms = [r["j_norm"] for r in data["rows"]]
        assert norms == sorted(norms)

    def test_m50_column_bound(self, capsys):
        code, out, _ = run(capsys, ["cex", "--m", "50"])
        assert code == 0
        data = json.loads(out)
        assert data["rows"][-1]["j_norm"] >= 100.0

    def test_out_writes_table_and_figure(self, capsys, tmp_path):
        out_path = tmp_path / "report" / "cex.tsv"
        out_path.parent.mkdir()
        code, _, _ = run(capsys, ["cex", "--m", "3", "--out", str(out_path)])
        assert code == 0
        table = out_path.read_text().strip().splitlines()
        assert table[0].startswith("m\tj_norm")
        assert len(table) == 4
        assert (out_path.with_suffix(".png")).exists()


class TestVerify:
    def test_small_run_passes(self, capsys):
        code, out, _ = run(capsys, ["verify", "--trials", "1", "--dim", "2",
                                    "--seed", "1"])
        data = json.loads(out)
        assert data["all_passed"] is True
        assert code == 0

    def test_dim_one(self, capsys):
        code, out, _ = run(capsys, ["verify", "--trials", "1", "--dim", "1",
                                    "--seed", "3"])
        assert code == 0

    def test_bad_flags_exit_2(self, capsys):
        code, _, _ = run(capsys, ["verify", "--trials", "0"])
        assert code == 2

    def test_malformed_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--not-a-flag"])
        assert exc.value.code == 2

    def test_out_writes_report(self, capsys, tmp_path):
        out_path = tmp_path / "verify.tsv"
        code, _, _ = run(capsys, ["verify", "--trials", "1", "--dim", "2",
                                  "--seed", "1", "--out", str(out_path)])
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0].startswith("property\t")
        assert len(lines) > 30
        assert out_path.with_suffix(".png").exists()


class TestToleranceOverrides:
    def test_env_var(self, capsys, matrix_file, monkeypatch):
        monkeypatch.setenv("QSPECTRA_TOL", "1e-8")
        code, out, _ = run(capsys, ["sspectrum", matrix_file])
        assert code == 0

    def test_flag(self, capsys, matrix_file):
        code, _, _ = run(capsys, ["sspectrum", matrix_file, "--tol", "1e-9"])
        assert code == 0

    def test_coarse_tolerance_merges_close_spheres(self, capsys, tmp_path):
        t = QMatrix.diagonal([E1, E1 * (1.0 + 5e-8)])
        path = tmp_path / "close.json"
        path.write_text(json.dumps(t.to_json()))
        assert main(["decompose", str(path)]) == 5
        capsys.readouterr()
        # a coarser tolerance clusters the two spheres into one resolvable one
        code, out, _ = run(capsys, ["decompose", str(path), "--tol", "1e-6"])
        assert code == 0
        assert len(json.loads(out)["system"]["spheres"]) == 1


class TestOutputFormats:
    def test_pretty(self, capsys, matrix_file):
        code, out, _ = run(capsys, ["sspectrum", matrix_file,
                                    "--format", "pretty"])
        assert code == 0
        assert "spheres" in out and "{" not in out

    def test_out_copies_stdout_payload(self, capsys, matrix_file, tmp_path):
        target = tmp_path / "spec.json"
        code, out, _ = run(capsys, ["sspectrum", matrix_file,
                                    "--out", str(target)])
        assert code == 0
        assert target.read_text().strip() == out.strip()

    def test_seventeen_digit_roundtrip(self, capsys, matrix_file):
        _, out, _ = run(capsys, ["sspectrum", matrix_file])
        v = json.loads(out)["spheres"][0]["v"]
        t = QMatrix.diagonal([E1, E2])
        assert v == s_spectrum(t).spheres[0][0].v
