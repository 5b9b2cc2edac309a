"""End-to-end command-line behavior, run in process via run(argv)."""

import numpy as np
import pytest
import scipy.sparse as sp

from isokernel.cli import run
from isokernel.data import parse_libsvm, read_labels_csv, write_labels_csv
from isokernel.tables import read_table


def ok(argv):
    assert run(argv) == 0, f"command failed: {argv}"


def data_lines(path):
    """File lines with the reproducibility comments stripped."""
    return [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]


@pytest.fixture
def gauss_file(tmp_path):
    """Two well-separated labeled clusters, 15 points each, d=4."""
    path = tmp_path / "gauss.libsvm"
    ok(["gen", "--kind", "gaussians", "--d", "4", "--n", "15", "--out", str(path)])
    return path


class TestPipeline:
    def test_gen_fit_encode_knn(self, tmp_path, gauss_file):
        model = tmp_path / "model.ikm"
        codes = tmp_path / "codes.ikc"
        knn_out = tmp_path / "knn.csv"
        ok(["fit", "--input", str(gauss_file), "--psi", "4", "--t", "10",
            "--out", str(model)])
        ok(["encode", "--model", str(model), "--input", str(gauss_file),
            "--out", str(codes)])
        ok(["knn", "--input", str(gauss_file), "--k", "3", "--out", str(knn_out)])
        assert model.read_text().startswith("IKM1 psi=4 t=10 dim=4 seed=0\n")
        assert codes.read_text().startswith("IKC1 psi=4 t=10 n=30\n")
        table = read_table(knn_out)
        assert len(table) == 30 * 3

    def test_every_header_starts_with_the_version(self, tmp_path, gauss_file):
        out = tmp_path / "knn.csv"
        ok(["knn", "--input", str(gauss_file), "--k", "2", "--out", str(out)])
        for path in (gauss_file, out):
            lines = path.read_text().splitlines()
            assert lines[0] == "# isokernel v1.0.0"
        second = out.read_text().splitlines()[1]
        assert second.startswith("# knn ")
        assert "k=2" in second and "metric=euclidean" in second

    def test_self_query_ranks_itself_first_at_zero(self, tmp_path, gauss_file):
        out = tmp_path / "knn.csv"
        ok(["knn", "--input", str(gauss_file), "--k", "2", "--out", str(out)])
        table = read_table(out)
        qid = table.ints("query_id")
        rank = table.ints("rank")
        nid = table.ints("neighbor_id")
        dist = table.floats("distance")
        for i in range(len(table)):
            if rank[i] == 1:
                assert nid[i] == qid[i]
                assert dist[i] == 0.0

    def test_balltree_and_brute_agree(self, tmp_path, gauss_file):
        a = tmp_path / "tree.csv"
        b = tmp_path / "brute.csv"
        ok(["knn", "--input", str(gauss_file), "--k", "4", "--method", "balltree",
            "--out", str(a)])
        ok(["knn", "--input", str(gauss_file), "--k", "4", "--method", "brute",
            "--out", str(b)])
        assert data_lines(a) == data_lines(b)

    def test_knn_from_saved_model_matches_inline_fit(self, tmp_path, gauss_file):
        model = tmp_path / "model.ikm"
        ok(["fit", "--input", str(gauss_file), "--psi", "4", "--t", "20",
            "--seed", "1", "--out", str(model)])
        a = tmp_path / "from-file.csv"
        b = tmp_path / "inline.csv"
        ok(["knn", "--input", str(gauss_file), "--k", "3", "--metric", "ik-feature",
            "--model", str(model), "--out", str(a)])
        ok(["knn", "--input", str(gauss_file), "--k", "3", "--metric", "ik-feature",
            "--psi", "4", "--t", "20", "--seed", "1", "--out", str(b)])
        assert data_lines(a) == data_lines(b)

    def test_separate_query_file(self, tmp_path, gauss_file):
        queries = tmp_path / "queries.libsvm"
        ok(["gen", "--kind", "gaussians", "--d", "4", "--n", "3", "--seed", "9",
            "--out", str(queries)])
        out = tmp_path / "knn.csv"
        ok(["knn", "--input", str(gauss_file), "--queries", str(queries),
            "--k", "2", "--out", str(out)])
        table = read_table(out)
        assert len(table) == 6 * 2
        assert max(table.ints("query_id")) == 5


class TestDeterminism:
    def test_knn_reruns_byte_identical(self, tmp_path, gauss_file):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        argv = ["knn", "--input", str(gauss_file), "--k", "3"]
        ok(argv + ["--out", str(a)])
        ok(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_instability_reruns_byte_identical(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        argv = ["instability", "--d-grid", "3,5", "--n", "12",
                "--measures", "IK,GK", "--psi", "4", "--t", "10"]
        ok(argv + ["--out", str(a)])
        ok(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_workers_do_not_change_output(self, tmp_path):
        a = tmp_path / "serial.csv"
        b = tmp_path / "parallel.csv"
        argv = ["instability", "--d-grid", "3,5,8", "--n", "12",
                "--measures", "IK,GK,L2", "--psi", "4", "--t", "10"]
        ok(argv + ["--workers", "1", "--out", str(a)])
        ok(argv + ["--workers", "3", "--out", str(b)])
        assert data_lines(a) == data_lines(b)


class TestExitCodes:
    def test_version(self, capsys):
        assert run(["--version"]) == 0
        assert "isokernel 1.0.0" in capsys.readouterr().out

    def test_bad_flag_value_is_usage(self, gauss_file):
        assert run(["fit", "--input", str(gauss_file), "--psi", "0"]) == 2

    def test_unknown_subcommand_is_usage(self):
        assert run(["frobnicate"]) == 2

    def test_unknown_measure(self, capsys):
        code = run(["instability", "--d-grid", "3", "--n", "12",
                    "--measures", "QQ"])
        assert code == 2
        err = capsys.readouterr().err
        assert "isokernel instability: error: unknown measure 'QQ'" in err
        assert "expected IK, GK, LK, SNN, AG, or L<p>" in err

    def test_missing_input_file_is_data_error(self, tmp_path, capsys):
        code = run(["fit", "--input", str(tmp_path / "absent.libsvm"),
                    "--psi", "4"])
        assert code == 1
        assert "isokernel fit: error:" in capsys.readouterr().err

    def test_psi_larger_than_dataset(self, gauss_file, capsys):
        code = run(["fit", "--input", str(gauss_file), "--psi", "100"])
        assert code == 1
        assert "insufficient data" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "extra",
        [[], ["--eps-fraction", "0.3", "--best-eps"]],
        ids=["neither", "both"],
    )
    def test_cluster_dp_needs_exactly_one_eps_mode(self, gauss_file, capsys, extra):
        code = run(["cluster-dp", "--input", str(gauss_file), "--k", "2"] + extra)
        assert code == 2
        assert "give exactly one of --eps-fraction or --best-eps" in capsys.readouterr().err

    def test_gen_kind_specific_flags_required(self, capsys):
        assert run(["gen", "--kind", "w-gaussians"]) == 2
        assert "requires --w" in capsys.readouterr().err
        assert run(["gen", "--kind", "gaussians"]) == 2
        assert "requires --d" in capsys.readouterr().err


class TestExports:
    def test_export_gram_is_a_unit_diagonal_symmetric_matrix(self, tmp_path, gauss_file):
        out = tmp_path / "gram.csv"
        ok(["export-gram", "--input", str(gauss_file), "--psi", "4", "--t", "10",
            "--out", str(out)])
        table = read_table(out)
        G = np.array([table.floats(f"g{j}") for j in range(30)]).T
        assert G.shape == (30, 30)
        assert np.allclose(np.diag(G), 1.0)
        assert np.array_equal(G, G.T)

    def test_export_features_rows_have_t_entries_of_recip_sqrt_t(self, tmp_path, gauss_file):
        out = tmp_path / "features.libsvm"
        ok(["export-features", "--input", str(gauss_file), "--psi", "4", "--t", "9",
            "--out", str(out)])
        header = [ln for ln in out.read_text().splitlines() if ln.startswith("#")]
        assert any("columns=36 nonzeros-per-row=9" in ln for ln in header)
        with open(out) as fh:
            ds = parse_libsvm(fh)
        X = ds.points.toarray() if sp.issparse(ds.points) else ds.points
        assert X.shape == (30, 36)
        assert ((X != 0).sum(axis=1) == 9).all()
        assert np.allclose(X[X != 0], 1.0 / np.sqrt(9.0))


class TestClusterCli:
    def test_best_eps_writes_labels_and_summary(self, tmp_path, gauss_file):
        labels_out = tmp_path / "labels.csv"
        summary_out = tmp_path / "summary.csv"
        ok(["cluster-dp", "--input", str(gauss_file), "--k", "2", "--best-eps",
            "--out", str(labels_out), "--summary-out", str(summary_out)])
        labels = read_labels_csv(labels_out)
        assert labels.shape == (30,)
        assert sorted(np.unique(labels)) == [0, 1]
        summary = read_table(summary_out)
        assert summary.column("measure") == ["L2"]
        assert summary.floats("ami") == [1.0]

    def test_fixed_eps_fraction(self, tmp_path, gauss_file):
        out = tmp_path / "labels.csv"
        ok(["cluster-dp", "--input", str(gauss_file), "--k", "2",
            "--eps-fraction", "0.3", "--out", str(out)])
        assert read_labels_csv(out).shape == (30,)


class TestAmiCli:
    def test_identical_labelings_score_one(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        labels = np.array([0, 0, 1, 1, 2])
        write_labels_csv(labels, a)
        write_labels_csv(labels, b)
        out = tmp_path / "ami.csv"
        ok(["ami", "--a", str(a), "--b", str(b), "--out", str(out)])
        assert read_table(out).floats("ami") == [1.0]


class TestMonteCarloCli:
    def test_lemma2_small_run(self, tmp_path):
        out = tmp_path / "lemma2.csv"
        ok(["lemma2", "--psi-grid", "2", "--d-grid", "2",
            "--distributions", "uniform", "--trials", "200", "--out", str(out)])
        table = read_table(out)
        assert len(table) == 1
        assert table.ints("psi") == [2]
        assert table.column("g_dist") == ["uniform"]
        assert table.ints("within_band") in ([0], [1])

    def test_theorem2_small_run(self, tmp_path):
        out = tmp_path / "theorem2.csv"
        ok(["theorem2", "--psi", "2", "--t", "1", "--d", "3", "--trials", "500",
            "--out", str(out)])
        table = read_table(out)
        assert table.floats("bound") == [0.5]
        assert 0.0 <= table.floats("rate")[0] <= 1.0
        assert table.ints("within_band") in ([0], [1])


class TestHubnessCli:
    def test_probabilities_sum_to_one_per_group(self, tmp_path):
        out = tmp_path / "hubness.csv"
        ok(["hubness", "--d-grid", "2", "--n", "50", "--k", "3",
            "--measures", "L2,GK", "--out", str(out)])
        table = read_table(out)
        measures = table.column("measure")
        p = table.floats("p")
        for name in ("L2", "GK"):
            total = sum(v for m, v in zip(measures, p) if m == name)
            assert np.isclose(total, 1.0)


class TestPrecisionBenchCli:
    def test_precision_is_perfect_on_separated_clusters(self, tmp_path, gauss_file):
        out = tmp_path / "precision.csv"
        ok(["precision", "--input", str(gauss_file), "--k", "5", "--out", str(out)])
        table = read_table(out)
        assert table.column("metric") == ["euclidean"]
        assert table.floats("precision") == [1.0]

    def test_bench_brute_cost_is_n_squared(self, tmp_path, gauss_file):
        out = tmp_path / "bench.csv"
        ok(["bench-index", "--input", str(gauss_file), "--k", "3", "--out", str(out)])
        table = read_table(out)
        methods = table.column("method")
        evals = table.ints("total_distance_evals")
        assert evals[methods.index("brute")] == 30 * 30
        assert all(v > 0 for v in table.floats("mean_wall_us"))


class TestVaryTCli:
    def test_rows_sorted_by_t_then_source(self, tmp_path):
        out = tmp_path / "varyt.csv"
        ok(["vary-t", "--t-grid", "5,1", "--psi", "4", "--d", "6", "--n", "15",
            "--trials", "2", "--out", str(out)])
        table = read_table(out)
        keys = list(zip(table.ints("t"), table.column("source")))
        assert keys == [(1, "given_data"), (1, "uniform"),
                        (5, "given_data"), (5, "uniform")]
        assert table.ints("trials") == [2, 2, 2, 2]


class TestNormalize:
    def test_gen_normalize_scales_into_unit_interval(self, tmp_path):
        out = tmp_path / "norm.libsvm"
        ok(["gen", "--kind", "gaussians", "--d", "3", "--n", "10",
            "--normalize", "--out", str(out)])
        with open(out) as fh:
            ds = parse_libsvm(fh)
        X = ds.points.toarray() if sp.issparse(ds.points) else ds.points
        assert X.min() >= 0.0 and X.max() <= 1.0
