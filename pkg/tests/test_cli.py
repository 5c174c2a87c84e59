import subprocess
import sys

import numpy as np
import pytest

from lorenzmaps import io
from lorenzmaps.cli import main
from lorenzmaps.sweep import beta_triangle_sweep
from lorenzmaps.transitivity import TransitivityConfig


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSingleTests:
    def test_trans_nontransitive(self, capsys):
        code, out, _ = run(capsys, "test-trans", "--family", "beta", "--beta", "1.2", "--alpha", "0.4", "--seed", "1")
        assert (code, out) == (0, "false\n")

    def test_trans_transitive(self, capsys):
        code, out, _ = run(capsys, "test-trans", "--family", "beta", "--beta", "1.2", "--alpha", "0.1")
        assert (code, out) == (0, "true\n")

    def test_leo_doubling(self, capsys):
        code, out, _ = run(capsys, "test-leo", "--family", "beta", "--beta", "2.0", "--alpha", "0.0")
        assert (code, out) == (0, "true\n")

    def test_leo_knobs(self, capsys):
        code, out, _ = run(
            capsys, "test-leo", "--family", "beta", "--beta", "1.05", "--alpha", "0.01", "--max-iters", "5"
        )
        assert (code, out) == (0, "false\n")

    def test_cnv_family(self, capsys):
        code, out, _ = run(capsys, "test-trans", "--family", "nlcnv", "--mu", "2", "--b", "0.25", "--c", "0.55")
        assert (code, out) == (0, "true\n")


class TestErrors:
    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_missing_params(self, capsys):
        code, out, err = run(capsys, "test-trans", "--family", "beta")
        assert code == 2 and out == "" and "--beta" in err

    def test_parameter_outside_triangle(self, capsys):
        code, _, err = run(capsys, "test-trans", "--family", "beta", "--beta", "2.5", "--alpha", "0")
        assert code == 2 and "outside" in err

    def test_bad_transient(self, capsys):
        code, _, _ = run(
            capsys, "test-trans", "--family", "beta", "--beta", "1.5", "--alpha", "0", "--iters", "10", "--transient", "10"
        )
        assert code == 2

    def test_not_invariant(self, capsys):
        code, _, err = run(capsys, "timeseries", "--family", "nlcnv", "--b", "0.01", "--c", "0.9", "--n", "5", "--out", "x")
        assert code == 2 and "invariant" in err

    def test_missing_input_is_runtime_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "diff", "--in1", str(tmp_path / "a"), "--in2", str(tmp_path / "b"), "--out", str(tmp_path / "c"))
        assert code == 1 and err

    def test_wrong_plane_family(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "--plane", "triangle", "--family", "nlcnv", "--mesh", "2", "--out", str(tmp_path / "o"))
        assert code == 2


class TestSweepOutput:
    def test_mesh_two_csv(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, _ = run(capsys, "sweep", "--plane", "triangle", "--family", "beta", "--mesh", "2", "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "alpha,beta,class"
        assert lines[1:] == [
            "0.25,1.75,Transitive",
            "0.75,1.75,Invalid",
            "0.25,1.25,Transitive",
            "0.75,1.25,Transitive",
        ]

    def test_both_columns(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        run(capsys, "sweep", "--plane", "triangle", "--family", "beta", "--mesh", "2", "--test", "both", "--out", str(out))
        lines = out.read_text().splitlines()
        assert lines[0] == "alpha,beta,class,trans,leo"
        assert lines[2] == "0.75,1.75,Invalid,,"
        assert lines[1] == "0.25,1.75,Transitive,true,true"

    def test_bc_header(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, _ = run(
            capsys, "sweep", "--plane", "bc", "--family", "plcnv", "--m1", "0.65", "--mesh", "3", "--test", "leo", "--out", str(out)
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "b,c,class" and len(lines) == 10
        assert {ln.split(",")[2] for ln in lines[1:]} <= {"Invalid", "Leo", "NonLeo"}

    def test_ppm_bit_exact(self, capsys, tmp_path):
        out = tmp_path / "s.ppm"
        run(capsys, "sweep", "--plane", "triangle", "--family", "beta", "--mesh", "2", "--out", str(out), "--format", "ppm")
        red, white = bytes([255, 0, 0]), bytes([255, 255, 255])
        assert out.read_bytes() == b"P6\n2 2\n255\n" + red + white + red + red

    def test_palette(self):
        cells = np.arange(7, dtype=np.int8).reshape(1, 7)
        body = io.ppm_bytes(cells)[len(b"P6\n7 1\n255\n"):]
        assert list(body) == [
            255, 255, 255,
            255, 255, 0,
            255, 0, 0,
            0, 255, 0,
            0, 0, 0,
            0, 0, 255,
            255, 0, 0,
        ]

    def test_golden_stability(self, capsys, tmp_path):
        args = ["sweep", "--plane", "triangle", "--family", "beta", "--mesh", "6", "--test", "both", "--iters", "5000", "--seed", "9"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, *args, "--out", str(a))
        run(capsys, *args, "--workers", "3", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
        pa, pb = tmp_path / "a.ppm", tmp_path / "b.ppm"
        run(capsys, *args, "--out", str(pa), "--format", "ppm")
        run(capsys, *args, "--out", str(pb), "--format", "ppm")
        assert pa.read_bytes() == pb.read_bytes()


class TestCsvRoundTrip:
    def test_read_back(self, tmp_path):
        r = beta_triangle_sweep(5, "both", TransitivityConfig(iterations=5000))
        path = tmp_path / "r.csv"
        io.write_sweep_csv(r, path)
        back = io.read_sweep_csv(path)
        assert back.grid.same_cells(r.grid)
        np.testing.assert_array_equal(back.cells, r.cells)
        np.testing.assert_array_equal(back.trans, r.trans)
        np.testing.assert_array_equal(back.leo, r.leo)

    def test_rejects_non_square(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("alpha,beta,class\n0.5,1.5,Transitive\n0.5,1.2,Transitive\n")
        with pytest.raises(ValueError):
            io.read_sweep_csv(path)


class TestDiffCommand:
    def test_from_two_sweeps(self, capsys, tmp_path):
        t, l, d = tmp_path / "t.csv", tmp_path / "l.csv", tmp_path / "d.csv"
        common = ["sweep", "--plane", "triangle", "--family", "beta", "--mesh", "4"]
        run(capsys, *common, "--test", "trans", "--out", str(t))
        run(capsys, *common, "--test", "leo", "--out", str(l))
        # force one disagreement of each kind
        tl = t.read_text().splitlines()
        ll = l.read_text().splitlines()
        tl[13] = tl[13].rsplit(",", 1)[0] + ",Transitive"
        ll[13] = ll[13].rsplit(",", 1)[0] + ",NonLeo"
        tl[14] = tl[14].rsplit(",", 1)[0] + ",NonTransitive"
        ll[14] = ll[14].rsplit(",", 1)[0] + ",Leo"
        t.write_text("\n".join(tl) + "\n")
        l.write_text("\n".join(ll) + "\n")
        code, _, _ = run(capsys, "diff", "--in1", str(t), "--in2", str(l), "--out", str(d))
        assert code == 0
        classes = [ln.split(",")[2] for ln in d.read_text().splitlines()[1:]]
        assert classes[12] == "DiffTransNotLeo" and classes[13] == "DiffLeoNotTrans"
        assert classes.count("Invalid") == 14

    def test_diff_of_both_sweep(self, capsys, tmp_path):
        s, d = tmp_path / "s.csv", tmp_path / "d.ppm"
        run(capsys, "sweep", "--plane", "triangle", "--family", "beta", "--mesh", "4", "--test", "both", "--out", str(s))
        code, _, _ = run(capsys, "diff", "--in1", str(s), "--in2", str(s), "--out", str(d), "--format", "ppm")
        assert code == 0
        assert d.read_bytes().startswith(b"P6\n4 4\n255\n")

    def test_grid_mismatch(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, "sweep", "--plane", "triangle", "--family", "beta", "--mesh", "3", "--out", str(a))
        run(capsys, "sweep", "--plane", "triangle", "--family", "beta", "--mesh", "4", "--test", "leo", "--out", str(b))
        code, _, err = run(capsys, "diff", "--in1", str(a), "--in2", str(b), "--out", str(tmp_path / "d"))
        assert code == 1 and "grid" in err


class TestDensityAndSeries:
    def test_density_csv(self, capsys, tmp_path):
        out = tmp_path / "d.csv"
        code, _, _ = run(
            capsys, "density", "--family", "beta", "--beta", "1.2", "--alpha", "0.4", "--iters", "100000", "--bins", "200", "--out", str(out)
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "bin_center,density"
        rows = [ln for ln in lines[1:] if not ln.startswith("#")]
        support = [ln for ln in lines if ln.startswith("# support ")]
        assert len(rows) == 200 and len(support) > 1
        dens = np.array([float(r.split(",")[1]) for r in rows])
        assert abs(dens.sum() / 200 - 1.0) < 1e-9

    def test_timeseries_csv(self, capsys, tmp_path):
        out = tmp_path / "t.csv"
        code, _, _ = run(
            capsys, "timeseries", "--family", "nlcnv", "--mu", "2", "--b", "0.25", "--c", "0.55",
            "--x0", "0.3", "--n", "50", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "step,x" and lines[1] == "0,0.3" and len(lines) == 51
        xs = np.array([float(ln.split(",")[1]) for ln in lines[1:]])
        assert np.all((xs >= 0.25) & (xs < 0.55))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lorenzmaps.cli", "test-trans", "--family", "beta", "--beta", "1.2", "--alpha", "0.4"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "false\n"
