import json
import math
from itertools import combinations, combinations_with_replacement

import numpy as np
import pytest

from rphsa.benchmarks import make_problem
from rphsa.de import DeParams
from rphsa.errors import EmptyInput
from rphsa.harness import (Campaign, accuracy_probe, compare_dirs,
                           emit_convergence_plot, main, read_run_csv,
                           run_campaign, sweep, verdict, wilcoxon_ranksum)
from rphsa.numerics import make_rng
from rphsa.optimizer import RphsaConfig


def brute_force_ranksum_p(a, b):
    """Enumeration oracle: exact two-sided permutation p-value on midranks."""
    combined = list(a) + list(b)
    n1, n = len(a), len(a) + len(b)
    order = sorted(range(n), key=lambda i: combined[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and combined[order[j + 1]] == combined[order[i]]:
            j += 1
        for t in range(i, j + 1):
            ranks[order[t]] = 0.5 * (i + j) + 1.0
        i = j + 1
    w_obs = sum(ranks[:n1])
    mu = n1 * (n + 1) / 2.0
    dev = abs(w_obs - mu)
    hits = sum(1 for c in combinations(range(n), n1)
               if abs(sum(ranks[i] for i in c) - mu) >= dev - 1e-9)
    return hits / math.comb(n, n1)


def quick_config(**kw):
    defaults = dict(k=4, n_local=15, init_size=20, seed=0,
                    inner_de=DeParams(pop_size=15), inner_generations=8)
    defaults.update(kw)
    return RphsaConfig(**defaults)


class TestWilcoxon:
    def test_identical_multisets(self):
        _, p = wilcoxon_ranksum([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert p > 0.9

    def test_separated_triples_exact(self):
        # Smallest attainable two-sided p for 3 vs 3 is 2/20 = 0.1.
        _, p = wilcoxon_ranksum([1.0, 2.0, 3.0], [10.0, 11.0, 12.0])
        assert p == pytest.approx(0.1, abs=1e-12)
        assert p == pytest.approx(
            brute_force_ranksum_p([1, 2, 3], [10, 11, 12]), abs=1e-12)

    def test_exact_matches_enumeration_on_integer_grids(self):
        values = range(4)
        cases_3 = list(combinations_with_replacement(values, 3))
        for a in cases_3[::3]:
            for b in cases_3[::4]:
                _, p = wilcoxon_ranksum(a, b)
                assert p == pytest.approx(brute_force_ranksum_p(a, b), abs=1e-9), (a, b)

    def test_exact_matches_enumeration_4v4(self):
        rng = make_rng(1)
        for _ in range(60):
            a = rng.integers(0, 4, size=4).tolist()
            b = rng.integers(0, 4, size=4).tolist()
            _, p = wilcoxon_ranksum(a, b)
            assert p == pytest.approx(brute_force_ranksum_p(a, b), abs=1e-9), (a, b)

    def test_shifted_normals_significant(self):
        for trial in range(20):
            rng = make_rng(2000 + trial)
            a = rng.standard_normal(30)
            b = rng.standard_normal(30) + 3.0
            _, p = wilcoxon_ranksum(a, b)
            assert p < 0.001

    def test_normal_approx_reasonable_under_null(self):
        rng = make_rng(3)
        a = rng.standard_normal(40)
        b = rng.standard_normal(40)
        _, p = wilcoxon_ranksum(a, b)
        assert 0.001 < p <= 1.0

    def test_sample_size_guard(self):
        with pytest.raises(ValueError):
            wilcoxon_ranksum([1.0], [2.0, 3.0])

    def test_verdicts(self):
        assert verdict(1.0, 2.0, 0.01) == "+"
        assert verdict(2.0, 1.0, 0.01) == "-"
        assert verdict(1.0, 2.0, 0.05) == "="
        assert verdict(1.0, 2.0, 0.9) == "="


class TestCampaign:
    def test_file_accounting_and_summary(self, tmp_path):
        campaign = Campaign(
            problems=[("F1", 8, 0)],
            algorithms=["rphsa"],
            runs_per_cell=3,
            budget=60,
            base_seed=5,
            config=quick_config(),
            out_dir=tmp_path / "out",
        )
        summary, records = run_campaign(campaign)
        csvs = sorted((tmp_path / "out" / "F1_8d_ds0" / "rphsa").glob("*.csv"))
        assert len(csvs) == 3
        assert (tmp_path / "out" / "campaign_summary.json").exists()
        assert len(summary["cells"]) == 1
        cell = summary["cells"][0]
        assert set(cell) == {"problem", "dim", "algorithm", "runs", "mean",
                             "std", "finals", "nls_mean", "nti_mean",
                             "nti_over_nls", "wilcoxon"}
        assert cell["runs"] == 3
        # mean/std recomputable from stored finals
        assert cell["mean"] == pytest.approx(np.mean(cell["finals"]), abs=1e-12)
        assert cell["std"] == pytest.approx(np.std(cell["finals"], ddof=1), abs=1e-12)
        assert not summary["errors"]

    def test_deterministic_csv_output(self, tmp_path):
        def run_once(where):
            campaign = Campaign(problems=[("F1", 8, 0)], algorithms=["rphsa"],
                                runs_per_cell=2, budget=50, base_seed=1,
                                config=quick_config(), out_dir=where)
            run_campaign(campaign)
            files = sorted(where.glob("**/*.csv"))
            return [f.read_bytes() for f in files]

        assert run_once(tmp_path / "a") == run_once(tmp_path / "b")

    def test_two_algorithms_get_wilcoxon(self, tmp_path):
        campaign = Campaign(problems=[("F1", 8, 0)],
                            algorithms=["rphsa", "baseline"], runs_per_cell=3,
                            budget=50, base_seed=0, config=quick_config(),
                            out_dir=tmp_path / "out")
        summary, _ = run_campaign(campaign)
        assert len(summary["cells"]) == 2
        for cell in summary["cells"]:
            assert cell["wilcoxon"] is not None
            assert cell["wilcoxon"]["vs"] != cell["algorithm"]
            assert cell["wilcoxon"]["verdict"] in "+-="

    def test_seeds_derived_from_base(self, tmp_path):
        campaign = Campaign(problems=[("F1", 8, 0)], algorithms=["rphsa"],
                            runs_per_cell=2, budget=50, base_seed=100,
                            config=quick_config(), out_dir=tmp_path / "o")
        _, records = run_campaign(campaign)
        recs = records[("F1", 8, 0, "rphsa")]
        assert sorted(r.seed for r in recs) == [100, 101]

    def test_parallel_matches_serial(self, tmp_path):
        def finals(workers, where):
            campaign = Campaign(problems=[("F1", 8, 0)], algorithms=["rphsa"],
                                runs_per_cell=2, budget=50, base_seed=3,
                                config=quick_config(), out_dir=where,
                                workers=workers)
            summary, _ = run_campaign(campaign)
            return summary["cells"][0]["finals"]

        assert finals(1, tmp_path / "s") == finals(2, tmp_path / "p")


class TestProbe:
    def test_probe_outputs(self):
        problem = make_problem("F1", 10)
        cfg = quick_config(budget=80)
        result = accuracy_probe(problem, cfg, seed=4)
        assert result.population_size == cfg.inner_de.pop_size
        assert len(result.true_fitness) == result.population_size
        assert len(result.plain_prediction) == result.population_size
        assert len(result.ensemble_prediction) == result.population_size
        # sorted by true fitness ascending
        assert np.all(np.diff(result.true_fitness) >= 0)
        assert result.fe_at_capture >= cfg.budget * 0.5
        assert -1.0 <= result.spearman_plain <= 1.0
        assert -1.0 <= result.spearman_ensemble <= 1.0

    def test_probe_deterministic(self):
        cfg = quick_config(budget=80)
        a = accuracy_probe(make_problem("F1", 10), cfg, seed=6)
        b = accuracy_probe(make_problem("F1", 10), cfg, seed=6)
        np.testing.assert_array_equal(a.true_fitness, b.true_fitness)
        assert a.spearman_ensemble == b.spearman_ensemble


class TestSweep:
    def test_grid_shape_and_consistency(self, tmp_path):
        grid = sweep("F1", 8, 0, k_values=[2, 4], n_values=[10, 15], runs=2,
                     budget=40, base_seed=0, out_dir=tmp_path,
                     config=quick_config(init_size=20))
        assert set(grid) == {(2, 10), (2, 15), (4, 10), (4, 15)}
        for cell in grid.values():
            assert cell["mean_final"] == pytest.approx(
                np.mean(cell["finals"]), abs=1e-12)
        assert (tmp_path / "sweep.csv").exists()
        assert (tmp_path / "sweep_runs.csv").exists()
        # m derived per cell: 4 * ceil(8 / k)
        assert grid[(2, 10)]["m"] == 16
        assert grid[(4, 10)]["m"] == 8

    def test_default_cell_flagged(self, tmp_path):
        grid = sweep("F1", 60, 0, k_values=[50], n_values=[100], runs=1,
                     budget=110, base_seed=0, out_dir=tmp_path,
                     config=quick_config(k=50, n_local=100, init_size=100))
        assert grid[(50, 100)]["is_default"]

    def test_empty_grid_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            sweep("F1", 8, 0, [], [10], 1, 40, 0, tmp_path)


class TestPlot:
    def _write_cell(self, tmp_path, algos=("rphsa", "baseline")):
        campaign = Campaign(problems=[("F1", 8, 0)], algorithms=list(algos),
                            runs_per_cell=2, budget=40,
                            config=quick_config(init_size=20),
                            out_dir=tmp_path / "runs")
        run_campaign(campaign)
        return [(algo, sorted((tmp_path / "runs" / "F1_8d_ds0" / algo).glob("*.csv")))
                for algo in algos]

    def test_svg_emitted(self, tmp_path):
        inputs = self._write_cell(tmp_path)
        out = emit_convergence_plot(inputs, tmp_path / "fig.svg")
        content = out.read_text()
        assert content.lstrip().startswith("<?xml")
        assert "svg" in content[:300]

    def test_series_monotone_and_sized(self, tmp_path):
        from rphsa.harness import _series_curve
        inputs = self._write_cell(tmp_path)
        for label, paths in inputs:
            grid, curve = _series_curve(paths)
            fes = np.concatenate([read_run_csv(p)[0] for p in paths])
            assert len(grid) == len(np.unique(np.concatenate([np.arange(1, fes.max() + 1)])))
            assert np.all(np.diff(curve) <= 1e-12)

    def test_empty_inputs(self, tmp_path):
        with pytest.raises(EmptyInput):
            emit_convergence_plot([], tmp_path / "fig.svg")
        empty = tmp_path / "empty.csv"
        empty.write_text("run_id,fe,best_f\n")
        with pytest.raises(EmptyInput):
            emit_convergence_plot([("x", [empty])], tmp_path / "fig.svg")


class TestCompare:
    def test_compare_dirs(self, tmp_path):
        campaign = Campaign(problems=[("F1", 8, 0)],
                            algorithms=["rphsa", "baseline"], runs_per_cell=3,
                            budget=50, config=quick_config(),
                            out_dir=tmp_path / "runs")
        run_campaign(campaign)
        cell = tmp_path / "runs" / "F1_8d_ds0"
        result = compare_dirs(cell / "rphsa", cell / "baseline")
        assert result["a"]["runs"] == 3
        assert 0.0 <= result["p"] <= 1.0
        assert result["verdict_a_vs_b"] in "+-="


class TestCli:
    def test_run_command(self, tmp_path, capsys):
        code = main(["run", "--function", "F1", "--dim", "8", "--budget", "45",
                     "--runs", "2", "--k", "4", "--n-local", "12",
                     "--init-size", "20", "--algo", "rphsa",
                     "--out", str(tmp_path / "res")])
        assert code == 0
        out = capsys.readouterr().out
        assert "F1 8D rphsa" in out
        assert (tmp_path / "res" / "campaign_summary.json").exists()

    def test_config_file(self, tmp_path):
        cfg_file = tmp_path / "c.json"
        cfg_file.write_text(json.dumps({
            "problems": [["F1", 8, 0]],
            "algorithms": ["rphsa"],
            "runs_per_cell": 2,
            "budget": 45,
            "base_seed": 9,
            "overrides": {"k": 4, "n_local": 12, "init_size": 20,
                          "inner_de": {"pop_size": 12}, "inner_generations": 6},
        }))
        code = main(["run", "--config", str(cfg_file),
                     "--out", str(tmp_path / "res")])
        assert code == 0
        summary = json.loads((tmp_path / "res" / "campaign_summary.json").read_text())
        assert summary["base_seed"] == 9

    def test_plot_command(self, tmp_path):
        main(["run", "--function", "F1", "--dim", "8", "--budget", "45",
              "--runs", "2", "--k", "4", "--n-local", "12",
              "--init-size", "20", "--out", str(tmp_path / "res")])
        code = main(["plot", str(tmp_path / "res" / "F1_8d_ds0" / "rphsa"),
                     "--out", str(tmp_path / "fig.svg")])
        assert code == 0
        assert (tmp_path / "fig.svg").exists()

    def test_compare_command(self, tmp_path, capsys):
        main(["run", "--function", "F1", "--dim", "8", "--budget", "45",
              "--runs", "2", "--k", "4", "--n-local", "12",
              "--init-size", "20", "--algo", "both",
              "--out", str(tmp_path / "res")])
        cell = tmp_path / "res" / "F1_8d_ds0"
        code = main(["compare", str(cell / "rphsa"), str(cell / "baseline")])
        assert code == 0
        parsed = json.loads(capsys.readouterr().out)
        assert "p" in parsed

    def test_error_exit_code(self, capsys):
        code = main(["run", "--function", "F9", "--dim", "8"])
        assert code == 1
