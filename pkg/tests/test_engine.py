"""Engine runs: reproducibility, bookkeeping, persistence."""

import numpy as np
import pytest

from divga import (
    ConfigError,
    DiversityEnhanced,
    EngineConfig,
    FitnessEvaluationError,
    GeneSpec,
    IllegalMethodError,
    TopN,
    evaluate_population,
    persist,
    run,
    seed_population,
)
from divga.genome import Individual

from conftest import (
    exploding_fitness,
    label_count_fitness,
    non_numeric_fitness,
    sphere_fitness,
    sum_fitness,
)


def quiet(**kwargs) -> EngineConfig:
    kwargs.setdefault("verbosity", 0)
    return EngineConfig(**kwargs)


class CountingFitness:
    def __init__(self):
        self.calls = 0

    def __call__(self, genes):
        self.calls += 1
        return float(np.sum(genes))


class TestEvaluatePopulation:
    def test_sets_fitness_in_order(self, numeric_spec, rng):
        pop = seed_population(numeric_spec, 5, rng)
        count = evaluate_population(pop.individuals, sum_fitness)
        assert count == 5
        for ind in pop:
            assert ind.fitness == pytest.approx(float(np.sum(ind.genes)))

    def test_skips_already_evaluated(self, numeric_spec, rng):
        pop = seed_population(numeric_spec, 4, rng)
        pop.individuals[1].fitness = 123.0
        count = evaluate_population(pop.individuals, sum_fitness)
        assert count == 3
        assert pop.individuals[1].fitness == 123.0

    def test_parallel_matches_sequential(self, numeric_spec, rng):
        pop_a = seed_population(numeric_spec, 12, np.random.default_rng(3))
        pop_b = seed_population(numeric_spec, 12, np.random.default_rng(3))
        evaluate_population(pop_a.individuals, sphere_fitness, 0)
        evaluate_population(pop_b.individuals, sphere_fitness, 3)
        assert [i.fitness for i in pop_a] == [i.fitness for i in pop_b]

    def test_raising_fitness_wrapped(self):
        individuals = [Individual(genes=np.array([-1.0])),
                       Individual(genes=np.array([2.0]))]
        with pytest.raises(FitnessEvaluationError) as excinfo:
            evaluate_population(individuals, exploding_fitness)
        assert excinfo.value.index == 1

    def test_non_numeric_result_rejected(self):
        individuals = [Individual(genes=np.array([0.0]))]
        with pytest.raises(FitnessEvaluationError, match="non-numeric"):
            evaluate_population(individuals, non_numeric_fitness)

    def test_nan_rejected(self):
        individuals = [Individual(genes=np.array([0.0]))]
        with pytest.raises(FitnessEvaluationError, match="NaN"):
            evaluate_population(individuals, lambda g: float("nan"))


class TestRunBasics:
    def test_snapshot_count_and_evaluations(self, numeric_spec):
        config = quiet(population_size=8, n_generations=5, crossover="none",
                       seed=1)
        record = run(numeric_spec, sphere_fitness, config)
        assert len(record.populations) == 6
        assert record.evaluations == [8, 16, 24, 32, 40, 48]
        assert record.total_evaluations == 48
        assert record.termination == "generations_exhausted"

    def test_all_pairs_evaluation_budget(self, numeric_spec):
        config = quiet(population_size=6, n_generations=2, crossover="between",
                       pairing="all", seed=1)
        record = run(numeric_spec, sphere_fitness, config)
        # 6 initial + 2 generations of 15 offspring
        assert record.total_evaluations == 36

    def test_best_fitness_never_degrades(self, numeric_spec):
        config = quiet(population_size=10, n_generations=20, seed=9)
        record = run(numeric_spec, sphere_fitness, config)
        best = record.best_fitness
        assert all(b >= a for a, b in zip(best, best[1:]))

    def test_best_fitness_never_degrades_under_top_n(self, numeric_spec):
        config = quiet(population_size=10, n_generations=20, seed=9,
                       selection=TopN())
        record = run(numeric_spec, sphere_fitness, config)
        best = record.best_fitness
        assert all(b >= a for a, b in zip(best, best[1:]))

    def test_constant_fitness_gives_flat_zero_trace(self, numeric_spec):
        config = quiet(population_size=6, n_generations=4, seed=1)
        record = run(numeric_spec, lambda genes: 0.0, config)
        assert record.mean_fitness == [0.0] * 5
        assert record.best_fitness == [0.0] * 5
        assert record.termination == "generations_exhausted"

    def test_threshold_stops_early(self, numeric_spec):
        config = quiet(population_size=6, n_generations=50, seed=2,
                       fitness_threshold=-1e9)
        record = run(numeric_spec, sphere_fitness, config)
        assert record.termination == "threshold_reached"
        assert len(record.populations) == 2  # initial plus one generation

    def test_unreachable_threshold_runs_out(self, numeric_spec):
        config = quiet(population_size=6, n_generations=3, seed=2,
                       fitness_threshold=1e9)
        record = run(numeric_spec, sphere_fitness, config)
        assert record.termination == "generations_exhausted"
        assert len(record.populations) == 4

    def test_survivors_not_reevaluated(self, numeric_spec):
        fitness = CountingFitness()
        config = quiet(population_size=8, n_generations=4, crossover="none",
                       seed=5)
        record = run(numeric_spec, fitness, config)
        assert fitness.calls == record.total_evaluations == 8 + 4 * 8

    def test_init_genes_in_first_snapshot(self, numeric_spec):
        config = quiet(population_size=4, n_generations=1, seed=0)
        record = run(numeric_spec, sphere_fitness, config,
                     init_genes=[[0.25, 0.5, -0.25]])
        np.testing.assert_allclose(record.populations[0][0].genes,
                                   [0.25, 0.5, -0.25])

    def test_fitness_args_bound(self, numeric_spec):
        def offset_sum(genes, offset):
            return float(np.sum(genes)) + offset

        config = quiet(population_size=4, n_generations=1, seed=0)
        record = run(numeric_spec, offset_sum, config, fitness_args=(100.0,))
        assert record.best_fitness[0] > 90.0

    def test_categorical_run(self, cat_spec):
        config = quiet(population_size=10, n_generations=5, seed=4)
        record = run(cat_spec, label_count_fitness, config)
        assert record.best_fitness[-1] >= record.best_fitness[0]

    def test_topn_selection(self, numeric_spec):
        config = quiet(population_size=8, n_generations=5, seed=3,
                       selection=TopN())
        record = run(numeric_spec, sphere_fitness, config)
        final = record.final_population
        assert final[0].fitness == max(ind.fitness for ind in final)

    def test_selection_strings_accepted(self, numeric_spec):
        for name in ("topn", "diverse"):
            config = quiet(population_size=6, n_generations=2, seed=3,
                           selection=name)
            run(numeric_spec, sphere_fitness, config)


class TestRunValidation:
    def test_population_too_small(self, numeric_spec):
        with pytest.raises(ConfigError):
            run(numeric_spec, sphere_fitness,
                quiet(population_size=1, n_generations=1))

    def test_zero_generations(self, numeric_spec):
        with pytest.raises(ConfigError):
            run(numeric_spec, sphere_fitness,
                quiet(population_size=4, n_generations=0))

    def test_bad_pairing(self, numeric_spec):
        with pytest.raises(ConfigError):
            run(numeric_spec, sphere_fitness,
                quiet(population_size=4, n_generations=1, pairing="ring"))

    def test_bad_verbosity(self, numeric_spec):
        with pytest.raises(ConfigError):
            run(numeric_spec, sphere_fitness,
                quiet(population_size=4, n_generations=1, verbosity=7))

    def test_categorical_midpoint_rejected(self, cat_spec):
        with pytest.raises(IllegalMethodError):
            run(cat_spec, label_count_fitness,
                quiet(population_size=4, n_generations=1, crossover="midpoint"))

    def test_unknown_selection(self, numeric_spec):
        with pytest.raises(ConfigError):
            run(numeric_spec, sphere_fitness,
                quiet(population_size=4, n_generations=1, selection="roulette"))


class TestReproducibility:
    def test_same_seed_same_history(self, wide_spec):
        config = quiet(population_size=10, n_generations=8, seed=42)
        a = run(wide_spec, sphere_fitness, config)
        b = run(wide_spec, sphere_fitness, config)
        assert a.mean_fitness == b.mean_fitness
        assert a.best_fitness == b.best_fitness
        for pop_a, pop_b in zip(a.populations, b.populations):
            for ind_a, ind_b in zip(pop_a, pop_b):
                np.testing.assert_array_equal(ind_a.genes, ind_b.genes)

    def test_different_seed_differs(self, wide_spec):
        a = run(wide_spec, sphere_fitness,
                quiet(population_size=10, n_generations=3, seed=0))
        b = run(wide_spec, sphere_fitness,
                quiet(population_size=10, n_generations=3, seed=1))
        assert a.mean_fitness != b.mean_fitness

    def test_worker_count_does_not_change_results(self, wide_spec):
        sequential = run(wide_spec, sphere_fitness,
                         quiet(population_size=8, n_generations=4, seed=7,
                               parallel_workers=0))
        parallel = run(wide_spec, sphere_fitness,
                       quiet(population_size=8, n_generations=4, seed=7,
                             parallel_workers=2))
        assert sequential.mean_fitness == parallel.mean_fitness
        for pop_a, pop_b in zip(sequential.populations, parallel.populations):
            for ind_a, ind_b in zip(pop_a, pop_b):
                np.testing.assert_array_equal(ind_a.genes, ind_b.genes)


class TestDiversityResolution:
    def test_default_r0_from_initial_population(self, wide_spec, capsys):
        config = EngineConfig(population_size=6, n_generations=1, seed=0,
                              verbosity=1)
        run(wide_spec, sphere_fitness, config)
        out = capsys.readouterr().out
        assert "diversity-enhanced" in out
        assert "r0=" in out

    def test_degenerate_population_falls_back(self, numeric_spec):
        same = [[0.5, 0.5, 0.5]] * 4
        config = quiet(population_size=4, n_generations=1, seed=0)
        with pytest.warns(UserWarning, match="no spread"):
            run(numeric_spec, sphere_fitness, config, init_genes=same)

    def test_explicit_r0_and_d0(self, numeric_spec):
        config = quiet(population_size=6, n_generations=2, seed=0,
                       selection=DiversityEnhanced(d0=2.0, r0=0.5))
        record = run(numeric_spec, sphere_fitness, config)
        assert len(record.populations) == 3

    def test_custom_measure_runs(self, numeric_spec):
        def manhattan_sq(a, b):
            return float(np.sum(np.abs(np.asarray(a) - np.asarray(b))) ** 2)

        config = quiet(population_size=6, n_generations=2, seed=0,
                       selection=DiversityEnhanced(measure=manhattan_sq))
        record = run(numeric_spec, sphere_fitness, config)
        assert len(record.populations) == 3

    def test_asymmetric_measure_warns(self, numeric_spec):
        def lopsided(a, b):
            return float(abs(a[0]) + 2 * abs(b[0]))

        config = quiet(population_size=6, n_generations=1, seed=0,
                       selection=DiversityEnhanced(measure=lopsided))
        with pytest.warns(UserWarning, match="asymmetric"):
            run(numeric_spec, sphere_fitness, config)


class TestFailureHandling:
    def test_partial_record_attached(self, tmp_path):
        spec = GeneSpec.numeric([(0.5, 1.5)])
        config = quiet(population_size=4, n_generations=3, seed=1,
                       output_directory=tmp_path)
        with pytest.raises(FitnessEvaluationError) as excinfo:
            run(spec, exploding_fitness, config)
        record = excinfo.value.partial_record
        assert record is not None
        assert record.termination == "aborted"
        # whatever was flushed before the failure is on disk
        survivors = list(tmp_path.glob("*_survivors.csv"))
        assert len(survivors) == 1


class TestPersistence:
    def run_with_output(self, spec, directory, seed=11):
        config = quiet(population_size=5, n_generations=3, crossover="none",
                       seed=seed, output_directory=directory)
        return run(spec, sphere_fitness, config)

    def test_files_created(self, numeric_spec, tmp_path):
        record = self.run_with_output(numeric_spec, tmp_path)
        assert record.output_files["survivors"].exists()
        assert record.output_files["fitness"].exists()
        assert (tmp_path / "log.txt").exists()

    def test_survivors_header_and_rows(self, numeric_spec, tmp_path):
        record = self.run_with_output(numeric_spec, tmp_path)
        lines = record.output_files["survivors"].read_text().splitlines()
        assert lines[0] == "generation,index,fitness,g1,g2,g3"
        assert len(lines) == 1 + 4 * 5  # header + 4 snapshots of 5 rows

    def test_fitness_file_rows(self, numeric_spec, tmp_path):
        record = self.run_with_output(numeric_spec, tmp_path)
        lines = record.output_files["fitness"].read_text().splitlines()
        assert lines[0] == "generation,evaluations,mean_fitness,best_fitness"
        assert len(lines) == 1 + 4

    def test_full_precision_round_trip(self, numeric_spec, tmp_path):
        """Written genes parse back to the exact in-memory floats."""
        record = self.run_with_output(numeric_spec, tmp_path)
        lines = record.output_files["survivors"].read_text().splitlines()[1:]
        final_rows = [l for l in lines if l.startswith("3,")]
        for row, ind in zip(final_rows, record.final_population):
            fields = row.split(",")
            assert float(fields[2]) == ind.fitness
            parsed = [float(x) for x in fields[3:]]
            np.testing.assert_array_equal(parsed, ind.genes)

    def test_lf_line_endings(self, numeric_spec, tmp_path):
        record = self.run_with_output(numeric_spec, tmp_path)
        raw = record.output_files["survivors"].read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")

    def test_categorical_genes_written_as_labels(self, cat_spec, tmp_path):
        config = quiet(population_size=4, n_generations=1, seed=2,
                       output_directory=tmp_path)
        record = run(cat_spec, label_count_fitness, config)
        lines = record.output_files["survivors"].read_text().splitlines()
        first = lines[1].split(",")
        assert set(first[3:]) <= {"E", "K"}

    def test_same_directory_twice_keeps_both_runs(self, numeric_spec, tmp_path):
        self.run_with_output(numeric_spec, tmp_path, seed=1)
        self.run_with_output(numeric_spec, tmp_path, seed=2)
        assert len(list(tmp_path.glob("*_survivors.csv"))) == 2

    def test_standalone_persist_matches_run_output(self, numeric_spec, tmp_path):
        record = self.run_with_output(numeric_spec, tmp_path / "live")
        files = persist(record, tmp_path / "replay")
        live = record.output_files["survivors"].read_text()
        replay = files["survivors"].read_text()
        assert live == replay

    def test_verbosity_zero_is_silent(self, numeric_spec, capsys):
        config = quiet(population_size=4, n_generations=2, seed=0)
        run(numeric_spec, sphere_fitness, config)
        assert capsys.readouterr().out == ""

    def test_verbosity_two_lists_survivors(self, numeric_spec, capsys):
        config = EngineConfig(population_size=4, n_generations=1, seed=0,
                              verbosity=2)
        run(numeric_spec, sphere_fitness, config)
        out = capsys.readouterr().out
        assert "survivor 0:" in out
        assert "working=" in out
