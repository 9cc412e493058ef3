import json
import math

import numpy as np
import pytest

from udrd import cli

LN_SQRT3 = 0.5493061443340548


def write_source(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def scalar_src(tmp_path):
    return write_source(tmp_path, "scalar.json", {"eigenvalues": [1.0]})


@pytest.fixture
def pair_src(tmp_path):
    return write_source(tmp_path, "pair.json", {"eigenvalues": [1.0, 4.0]})


@pytest.fixture
def ar_src(tmp_path):
    return write_source(tmp_path, "ar.json", {"ar": {"coeffs": [0.9], "noise_var": 1.0}})


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPoint:
    def test_scalar_distortion(self, scalar_src, capsys):
        code, out, _ = run(capsys, ["point", "--input", scalar_src, "--distortion", "0.5"])
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == "D,alpha,R_perp,R_shannon,rate_loss,units"
        fields = row.split(",")
        assert float(fields[0]) == pytest.approx(0.5, rel=1e-10)
        assert float(fields[1]) == pytest.approx(3.0, rel=1e-9)
        assert float(fields[2]) == pytest.approx(LN_SQRT3, rel=1e-9)
        assert fields[5] == "nats"

    def test_rate_inverse(self, scalar_src, capsys):
        code, out, _ = run(
            capsys,
            ["point", "--input", scalar_src, "--rate", f"{LN_SQRT3:.12g}", "--format", "json"],
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["D"] == pytest.approx(0.5, rel=1e-8)

    def test_round_trip(self, pair_src, capsys):
        _, out, _ = run(
            capsys, ["point", "--input", pair_src, "--distortion", "0.7", "--format", "json"]
        )
        rate = json.loads(out)["R_perp"]
        _, out2, _ = run(
            capsys, ["point", "--input", pair_src, "--rate", repr(rate), "--format", "json"]
        )
        assert json.loads(out2)["D"] == pytest.approx(0.7, rel=1e-8)

    def test_bits_units(self, scalar_src, capsys):
        code, out, _ = run(
            capsys,
            ["point", "--input", scalar_src, "--distortion", "0.5", "--units", "bits",
             "--format", "json"],
        )
        assert code == 0
        assert json.loads(out)["R_perp"] == pytest.approx(LN_SQRT3 / math.log(2.0), rel=1e-9)

    def test_process_source(self, ar_src, capsys):
        code, out, _ = run(
            capsys, ["point", "--input", ar_src, "--distortion", "1.0", "--format", "json"]
        )
        assert code == 0
        assert json.loads(out)["alpha"] == pytest.approx(8.14909037046511, rel=1e-9)

    def test_malformed_json_exits_2_silently(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        code, out, err = run(capsys, ["point", "--input", str(bad), "--distortion", "0.5"])
        assert code == 2
        assert out == ""
        assert "error" in err

    def test_multiple_source_keys_exit_2(self, tmp_path, capsys):
        doc = write_source(tmp_path, "two.json", {"eigenvalues": [1.0], "autocorrelation": [1.0]})
        code, out, _ = run(capsys, ["point", "--input", doc, "--distortion", "0.5"])
        assert code == 2
        assert out == ""

    def test_domain_error_exit_3(self, tmp_path, capsys):
        doc = write_source(tmp_path, "bad_cov.json", {"covariance": [[1.0, 2.0], [2.0, 1.0]]})
        code, out, _ = run(capsys, ["point", "--input", doc, "--distortion", "0.5"])
        assert code == 3
        assert out == ""


class TestSweep:
    def test_monotone_rate_and_positive_tail(self, scalar_src, capsys):
        code, out, _ = run(
            capsys,
            ["sweep", "--input", scalar_src, "--d-min", "0.1", "--d-max", "10",
             "--points", "25", "--log-spaced"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "D,alpha,R_perp,R_shannon,rate_loss,units"
        rows = [line.split(",") for line in lines[1:]]
        d_col = [float(r[0]) for r in rows]
        rate_col = [float(r[2]) for r in rows]
        assert np.all(np.diff(d_col) > 0.0)
        assert np.all(np.diff(rate_col) < 0.0)
        assert rate_col[-1] > 0.0

    def test_rate_at_unit_distortion(self, scalar_src, capsys):
        # the classical rate hits zero at D = 1 while the constrained one stays up
        _, out, _ = run(
            capsys,
            ["sweep", "--input", scalar_src, "--d-min", "0.5", "--d-max", "1.5",
             "--points", "3"],
        )
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        mid = rows[1]
        assert float(mid[0]) == pytest.approx(1.0, abs=1e-12)
        assert float(mid[1]) == pytest.approx(8.0, rel=1e-9)
        assert float(mid[3]) == 0.0
        assert float(mid[2]) == pytest.approx(0.5 * math.log(2.0), rel=1e-9)

    def test_csv_json_equivalence(self, pair_src, capsys, tmp_path):
        args = ["sweep", "--input", pair_src, "--d-min", "0.2", "--d-max", "2.0",
                "--points", "7"]
        _, csv_out, _ = run(capsys, args)
        _, json_out, _ = run(capsys, args + ["--format", "json"])
        csv_rows = [line.split(",") for line in csv_out.strip().splitlines()[1:]]
        json_rows = json.loads(json_out)
        assert len(csv_rows) == len(json_rows)
        for crow, jrow in zip(csv_rows, json_rows):
            assert float(crow[0]) == jrow["D"]
            assert float(crow[1]) == jrow["alpha"]
            assert float(crow[2]) == jrow["R_perp"]
            assert float(crow[3]) == jrow["R_shannon"]
            assert float(crow[4]) == jrow["rate_loss"]
            assert crow[5] == jrow["units"]

    def test_out_file(self, scalar_src, capsys, tmp_path):
        dest = tmp_path / "curve.csv"
        code, out, _ = run(
            capsys,
            ["sweep", "--input", scalar_src, "--d-min", "0.1", "--d-max", "1.0",
             "--points", "3", "--out", str(dest)],
        )
        assert code == 0
        assert out == ""
        assert dest.read_text().startswith("D,alpha,")

    def test_bad_range_exit_2(self, scalar_src, capsys):
        code, _, _ = run(
            capsys,
            ["sweep", "--input", scalar_src, "--d-min", "1.0", "--d-max", "0.5",
             "--points", "4"],
        )
        assert code == 2

    def test_twelve_significant_digits(self, scalar_src, capsys):
        _, out, _ = run(capsys, ["point", "--input", scalar_src, "--distortion", "0.5"])
        row = out.strip().splitlines()[1].split(",")
        assert row[2] == f"{LN_SQRT3:.12g}"


class TestConverge:
    def test_vector_input_exit_3(self, scalar_src, capsys):
        code, _, _ = run(
            capsys,
            ["converge", "--input", scalar_src, "--distortion", "0.5", "--orders", "4,8"],
        )
        assert code == 3

    def test_ar_table(self, ar_src, capsys):
        code, out, _ = run(
            capsys,
            ["converge", "--input", ar_src, "--distortion", "1.0", "--orders", "8,16,32"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "N,R_perp_N,R_perp_spectral,abs_gap"
        gaps = [float(line.split(",")[3]) for line in lines[1:]]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_bad_orders_exit_2(self, ar_src, capsys):
        code, _, _ = run(
            capsys,
            ["converge", "--input", ar_src, "--distortion", "1.0", "--orders", "a,b"],
        )
        assert code == 2


class TestValidate:
    def test_reference_instance_passes(self, pair_src, capsys):
        code, out, _ = run(
            capsys,
            ["validate", "--input", pair_src, "--distortion", "0.5728756555322954",
             "--seed", "42"],
        )
        assert code == 0
        report = json.loads(out)
        assert report["all_pass"] is True
        assert all(c["pass"] for c in report["checks"].values())

    def test_byte_identical_reports(self, pair_src, capsys):
        args = ["validate", "--input", pair_src, "--distortion", "0.55", "--seed", "9",
                "--samples", "20000"]
        _, first, _ = run(capsys, args)
        _, second, _ = run(capsys, args)
        assert first == second

    def test_process_input_exit_3(self, ar_src, capsys):
        code, _, _ = run(capsys, ["validate", "--input", ar_src, "--distortion", "1.0"])
        assert code == 3


class TestQuadratureEnv:
    def test_env_controls_resolution(self, ar_src, capsys, monkeypatch):
        monkeypatch.setenv("UDRD_QUAD_POINTS", "512")
        code, out, _ = run(
            capsys, ["point", "--input", ar_src, "--distortion", "1.0", "--format", "json"]
        )
        assert code == 0
        coarse = json.loads(out)["alpha"]
        monkeypatch.delenv("UDRD_QUAD_POINTS")
        _, out2, _ = run(
            capsys, ["point", "--input", ar_src, "--distortion", "1.0", "--format", "json"]
        )
        fine = json.loads(out2)["alpha"]
        # both resolve the same point; the coarse grid is still accurate
        assert coarse == pytest.approx(fine, rel=1e-6)

    def test_invalid_env_exit_3(self, ar_src, capsys, monkeypatch):
        monkeypatch.setenv("UDRD_QUAD_POINTS", "many")
        code, _, _ = run(capsys, ["point", "--input", ar_src, "--distortion", "1.0"])
        assert code == 3
