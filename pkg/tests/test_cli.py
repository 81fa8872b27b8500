"""Command line entry points, exercised in-process through main(argv).

Exit code contract: 0 success, 1 usage errors (bad flags, missing or
conflicting arguments), 2 data errors (missing files, bad formats,
degenerate inputs).
"""
import subprocess
import sys

import numpy as np
import pytest

from sketchpca.cli import main
from sketchpca.harness import read_results_csv
from sketchpca.matio import read_matrix, write_matrix, write_matrix_csv


@pytest.fixture
def sample(tmp_path):
    """A small stored data matrix plus a workdir for outputs."""
    path = tmp_path / "x.dmat"
    write_matrix(path, np.random.default_rng(0).normal(size=(30, 12)))
    return path


class TestSimgen:
    def test_writes_seeded_sample(self, tmp_path, capsys):
        out = tmp_path / "sim.dmat"
        code = main(["simgen", "--p", "8", "--n", "20", "--model", "band:2",
                     "--seed", "3", "--out", str(out)])
        assert code == 0
        assert read_matrix(out).shape == (20, 8)
        assert "wrote" in capsys.readouterr().out

    def test_identical_seeds_identical_bytes(self, tmp_path):
        a, b = tmp_path / "a.dmat", tmp_path / "b.dmat"
        argv = ["simgen", "--p", "6", "--n", "10", "--model", "random:0.2", "--seed", "9"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_model_string_is_usage_error(self, tmp_path):
        code = main(["simgen", "--p", "8", "--n", "20", "--model", "ring:2",
                     "--out", str(tmp_path / "o.dmat")])
        assert code == 1

    def test_missing_required_flag_is_usage_error(self):
        assert main(["simgen", "--p", "8", "--n", "20", "--model", "band:2"]) == 1


class TestPca:
    def test_writes_orthonormal_basis(self, sample, tmp_path):
        out = tmp_path / "v.dmat"
        assert main(["pca", "--in", str(sample), "--d", "3", "--out", str(out)]) == 0
        v = read_matrix(out)
        assert v.shape == (12, 3)
        np.testing.assert_allclose(v.T @ v, np.eye(3), atol=1e-10)

    def test_missing_input_is_data_error(self, tmp_path):
        code = main(["pca", "--in", str(tmp_path / "nope.dmat"), "--d", "2",
                     "--out", str(tmp_path / "v.dmat")])
        assert code == 2

    def test_impossible_rank_is_data_error(self, sample, tmp_path):
        code = main(["pca", "--in", str(sample), "--d", "13",
                     "--out", str(tmp_path / "v.dmat")])
        assert code == 2


class TestApprox:
    def test_column_method_shape(self, sample, tmp_path):
        out = tmp_path / "b.dmat"
        code = main(["approx", "--in", str(sample), "--method", "v_nys",
                     "--l", "5", "--out", str(out)])
        assert code == 0
        assert read_matrix(out).shape == (12, 5)

    def test_row_method_shape(self, sample, tmp_path):
        out = tmp_path / "b.dmat"
        code = main(["approx", "--in", str(sample), "--method", "u_nys",
                     "--l", "5", "--out", str(out)])
        assert code == 0
        assert read_matrix(out).shape == (30, 5)

    def test_truncation_flag(self, sample, tmp_path):
        out = tmp_path / "b.dmat"
        code = main(["approx", "--in", str(sample), "--method", "v_cs",
                     "--l", "6", "--d", "2", "--out", str(out)])
        assert code == 0
        assert read_matrix(out).shape == (12, 2)

    def test_csv_input_accepted(self, tmp_path):
        src = tmp_path / "x.csv"
        write_matrix_csv(src, np.random.default_rng(1).normal(size=(15, 6)))
        out = tmp_path / "b.dmat"
        code = main(["approx", "--in", str(src), "--method", "v_cs",
                     "--l", "3", "--out", str(out)])
        assert code == 0
        assert read_matrix(out).shape == (6, 3)

    def test_sketch_method_requires_l(self, sample, tmp_path):
        code = main(["approx", "--in", str(sample), "--method", "v_nys",
                     "--out", str(tmp_path / "b.dmat")])
        assert code == 1

    def test_exact_requires_d(self, sample, tmp_path):
        code = main(["approx", "--in", str(sample), "--method", "exact",
                     "--out", str(tmp_path / "b.dmat")])
        assert code == 1

    def test_exact_with_d(self, sample, tmp_path):
        out = tmp_path / "b.dmat"
        code = main(["approx", "--in", str(sample), "--method", "exact",
                     "--d", "4", "--out", str(out)])
        assert code == 0
        assert read_matrix(out).shape == (12, 4)

    def test_corrupt_input_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.dmat"
        bad.write_bytes(b"not a matrix at all")
        code = main(["approx", "--in", str(bad), "--method", "v_cs",
                     "--l", "3", "--out", str(tmp_path / "b.dmat")])
        assert code == 2


class TestCompare:
    def test_grid_to_csv_and_plot(self, tmp_path, capsys):
        csv_path, plot_path = tmp_path / "rows.csv", tmp_path / "plot.svg"
        code = main(["compare", "--model", "random:0.05", "--p", "20", "--n", "30",
                     "--d", "2", "--l-grid", "6,8", "--seeds", "0,1",
                     "--csv", str(csv_path), "--plot", str(plot_path)])
        assert code == 0
        rows = read_results_csv(csv_path)
        assert len(rows) == 2 * 2 * 2  # seeds x l values x methods
        assert plot_path.exists()
        assert "wrote 8 rows" in capsys.readouterr().out

    def test_bounds_flag_populates_bound_column(self, tmp_path):
        csv_path = tmp_path / "rows.csv"
        code = main(["compare", "--model", "random:0.05", "--p", "20", "--n", "30",
                     "--d", "2", "--l-grid", "8", "--bounds", "--csv", str(csv_path)])
        assert code == 0
        ok = [r for r in read_results_csv(csv_path) if r.status == "ok"]
        assert ok and all(r.bound_total is not None for r in ok)

    def test_stored_matrix_condition(self, sample, tmp_path):
        csv_path = tmp_path / "rows.csv"
        code = main(["compare", "--in", str(sample), "--d", "2", "--l-grid", "5",
                     "--csv", str(csv_path)])
        assert code == 0
        assert {r.condition for r in read_results_csv(csv_path)} == {"x"}

    def test_in_and_model_conflict(self, sample, tmp_path):
        code = main(["compare", "--in", str(sample), "--model", "band:2",
                     "--p", "8", "--n", "10", "--d", "2",
                     "--csv", str(tmp_path / "r.csv")])
        assert code == 1

    def test_source_required(self, tmp_path):
        assert main(["compare", "--d", "2", "--csv", str(tmp_path / "r.csv")]) == 1

    def test_model_needs_dimensions(self, tmp_path):
        code = main(["compare", "--model", "band:2", "--d", "2",
                     "--csv", str(tmp_path / "r.csv")])
        assert code == 1

    def test_unknown_method_tag_is_usage_error(self, sample, tmp_path):
        code = main(["compare", "--in", str(sample), "--d", "2",
                     "--methods", "v_nys,v_fast", "--csv", str(tmp_path / "r.csv")])
        assert code == 1


class TestBounds:
    def test_writes_all_four_kinds(self, sample, tmp_path):
        out = tmp_path / "bounds.csv"
        code = main(["bounds", "--in", str(sample), "--d", "2", "--l", "5",
                     "--csv", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "kind,d,l,gap,coherence,term1,term2,total,clamped"
        kinds = [line.split(",")[0] for line in lines[1:]]
        assert kinds == ["nystrom_thm1", "cs_thm2", "nystrom_cor", "cs_cor"]
        for line in lines[1:]:
            rec = line.split(",")
            assert abs(float(rec[7]) - (float(rec[5]) + float(rec[6]))) <= 1e-12

    def test_rank_deficient_input_is_data_error(self, tmp_path):
        path = tmp_path / "rank1.dmat"
        rng = np.random.default_rng(2)
        write_matrix(path, np.outer(rng.normal(size=12), rng.normal(size=12)))
        code = main(["bounds", "--in", str(path), "--d", "5", "--l", "6",
                     "--csv", str(tmp_path / "b.csv")])
        assert code == 2


class TestBench:
    def test_prints_table_and_writes_rows(self, tmp_path, capsys):
        csv_path = tmp_path / "timing.csv"
        code = main(["bench", "--model", "band:3", "--p", "16", "--n", "20",
                     "--d", "2", "--l-grid", "4,6", "--runs", "1",
                     "--csv", str(csv_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "method=v_cs" in out and "method=v_nys" in out
        assert len(read_results_csv(csv_path)) == 4

    def test_csv_is_optional(self, tmp_path, capsys):
        code = main(["bench", "--model", "band:3", "--p", "16", "--n", "20",
                     "--d", "2", "--l-grid", "4", "--runs", "1"])
        assert code == 0
        assert "method=" in capsys.readouterr().out


class TestTopLevel:
    def test_no_arguments_is_usage_error(self):
        assert main([]) == 1

    def test_unknown_flag_is_usage_error(self):
        assert main(["pca", "--input", "x"]) == 1

    def test_module_runs_as_script(self, tmp_path):
        out = tmp_path / "sim.dmat"
        proc = subprocess.run(
            [sys.executable, "-m", "sketchpca.cli", "simgen", "--p", "6", "--n", "8",
             "--model", "band:1", "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert out.exists()
