"""Generational engine: evaluate, vary, select, repeat.

One seeded generator drives every stochastic decision in a fixed order
(seeding, then per generation: pairing, per-child crossover draws,
per-child mutation draws). Fitness evaluation consumes no randomness,
so results are identical whether fitness is computed sequentially or
on worker processes.

A run writes three files into its output directory when one is given:

    <YYYYMMDD-HHMMSS>_survivors.csv   generation,index,fitness,g1..gN
    <YYYYMMDD-HHMMSS>_fitness.csv     generation,evaluations,mean_fitness,best_fitness
    log.txt                           mirror of the console log (appended)

Both CSVs are UTF-8 with LF line endings, reals carry 17 significant
digits, and rows are appended and flushed as each generation completes,
so a crashed run leaves generations finished so far on disk.
"""

from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distance import DistanceMeasure, default_r0, get_measure
from .errors import (
    ConfigError,
    FitnessEvaluationError,
    IllegalMethodError,
)
from .genome import GeneSpec, Individual, Population, seed_population, validate_spec
from .selection import DiversityConfig, select_diverse, select_top_n
from .variation import (
    BETWEEN,
    CROSSOVER_METHODS,
    EITHER_OR,
    MIDPOINT,
    PAIRING_STRATEGIES,
    RANDOM_PAIRS,
    MutationConfig,
    produce_offspring,
    resolve_mutation,
)

GENERATIONS_EXHAUSTED = "generations_exhausted"
THRESHOLD_REACHED = "threshold_reached"
ABORTED = "aborted"


@dataclass
class DiversityEnhanced:
    """Diversity-enhanced survivor selection.

    r0 None means: one tenth of the root mean squared distance between
    the individuals of the initial population (1.0 for categorical
    genomes). measure None picks the kind default, Euclidean or Hamming.
    """

    d0: float = 1.0
    r0: float | None = None
    measure: object = None


@dataclass
class TopN:
    """Plain truncation selection on raw fitness, best first."""


@dataclass
class EngineConfig:
    """Everything a run needs besides the genome spec and the fitness.

    Attributes:
        population_size: survivors kept each generation, at least 2.
        n_generations: generations to run after the initial one.
        crossover: "midpoint", "eitheror", "between" or "none"; None
            resolves to "between" for numeric genomes and "eitheror"
            for categorical ones.
        pairing: "all" for every parent pair, "random" for n random
            pairs per generation.
        mutation: MutationConfig, or None for per-kind defaults with
            rate 1/number_of_genes.
        selection: DiversityEnhanced (default) or TopN; the strings
            "diverse" and "topn" are accepted shorthand.
        fitness_threshold: stop once the best survivor reaches this.
        seed: seed for the single run-wide random generator.
        parallel_workers: 0 evaluates fitness sequentially, otherwise
            the number of worker processes (fitness must be picklable).
        output_directory: where to write the run files, None disables.
        verbosity: 0 silent, 1 per-generation line, 2 adds the
            survivor listing in selection order.
    """

    population_size: int
    n_generations: int
    crossover: str | None = None
    pairing: str = RANDOM_PAIRS
    mutation: MutationConfig | None = None
    selection: object = field(default_factory=DiversityEnhanced)
    fitness_threshold: float | None = None
    seed: int = 0
    parallel_workers: int = 0
    output_directory: str | Path | None = None
    verbosity: int = 1


@dataclass
class RunRecord:
    """Full history of one run.

    populations[g] holds copies of the survivors of generation g, in
    selection order; index 0 is the evaluated initial population. The
    evaluations list is cumulative. A finished run with no early stop
    has n_generations + 1 snapshots.
    """

    spec: GeneSpec
    populations: list = field(default_factory=list)
    mean_fitness: list = field(default_factory=list)
    best_fitness: list = field(default_factory=list)
    evaluations: list = field(default_factory=list)
    termination: str = ABORTED
    output_files: dict = field(default_factory=dict)

    @property
    def total_evaluations(self) -> int:
        return self.evaluations[-1] if self.evaluations else 0

    @property
    def final_population(self) -> list:
        return self.populations[-1]


class _BoundFitness:
    """Binds fixed trailing arguments to a fitness function, picklable."""

    def __init__(self, fn, args):
        self.fn = fn
        self.args = tuple(args)

    def __call__(self, genes):
        return self.fn(genes, *self.args)


def _checked(value, index):
    try:
        result = float(value)
    except (TypeError, ValueError):
        raise FitnessEvaluationError(
            f"fitness returned non-numeric value {value!r}", index=index)
    if math.isnan(result):
        raise FitnessEvaluationError(
            f"fitness returned NaN for individual {index}", index=index)
    return result


def evaluate_population(individuals, fitness, parallel_workers: int = 0) -> int:
    """Fill in missing fitness values, in index order.

    Already evaluated individuals are left untouched. Returns the number
    of new evaluations. With parallel_workers > 0 evaluation runs on a
    process pool; results are committed in index order either way, so
    the outcome does not depend on the worker count.
    """
    pending = [(i, ind) for i, ind in enumerate(individuals)
               if ind.fitness is None]
    if not pending:
        return 0
    genes = [ind.genes for _, ind in pending]
    if parallel_workers and parallel_workers > 0 and len(pending) > 1:
        results = []
        with ProcessPoolExecutor(max_workers=parallel_workers) as pool:
            chunk = max(1, len(genes) // (parallel_workers * 4))
            try:
                for value in pool.map(fitness, genes, chunksize=chunk):
                    results.append(value)
            except FitnessEvaluationError:
                raise
            except Exception as exc:
                failed_at = pending[min(len(results), len(pending) - 1)][0]
                raise FitnessEvaluationError(
                    f"fitness raised {exc!r}", index=failed_at) from exc
        for (i, ind), value in zip(pending, results):
            ind.fitness = _checked(value, i)
    else:
        for i, ind in pending:
            try:
                value = fitness(ind.genes)
            except FitnessEvaluationError:
                raise
            except Exception as exc:
                raise FitnessEvaluationError(
                    f"fitness raised {exc!r} for individual {i}",
                    index=i) from exc
            ind.fitness = _checked(value, i)
    return len(pending)


def _format_real(x) -> str:
    return format(float(x), ".17g")


class _RunLog:
    """Prints gated by verbosity and mirrors the output to log.txt."""

    def __init__(self, directory: Path | None, verbosity: int):
        self.verbosity = verbosity
        self.file = None
        if directory is not None:
            self.file = open(directory / "log.txt", "a",
                             encoding="utf-8", newline="\n")

    def line(self, level: int, text: str):
        if self.verbosity >= level:
            print(text)
            if self.file is not None:
                self.file.write(text + "\n")
                self.file.flush()

    def close(self):
        if self.file is not None:
            self.file.close()
            self.file = None


class RunWriter:
    """Incrementally writes the survivors and fitness CSVs of a run."""

    def __init__(self, directory: str | Path, spec: GeneSpec):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        stamp = time.strftime("%Y%m%d-%H%M%S")
        candidate, k = stamp, 2
        while (self.directory / f"{candidate}_survivors.csv").exists():
            candidate = f"{stamp}-{k}"
            k += 1
        self.survivors_path = self.directory / f"{candidate}_survivors.csv"
        self.fitness_path = self.directory / f"{candidate}_fitness.csv"
        self._survivors = open(self.survivors_path, "w",
                               encoding="utf-8", newline="\n")
        self._fitness = open(self.fitness_path, "w",
                             encoding="utf-8", newline="\n")
        gene_names = ",".join(f"g{k + 1}" for k in range(spec.number_of_genes))
        self._survivors.write(f"generation,index,fitness,{gene_names}\n")
        self._fitness.write("generation,evaluations,mean_fitness,best_fitness\n")
        self._numeric = spec.is_numeric

    def append(self, generation: int, individuals, evaluations: int,
               mean_fitness: float, best_fitness: float):
        for index, ind in enumerate(individuals):
            if self._numeric:
                genes = ",".join(_format_real(g) for g in ind.genes)
            else:
                genes = ",".join(str(g) for g in ind.genes)
            self._survivors.write(
                f"{generation},{index},{_format_real(ind.fitness)},{genes}\n")
        self._fitness.write(
            f"{generation},{evaluations},{_format_real(mean_fitness)},"
            f"{_format_real(best_fitness)}\n")
        self._survivors.flush()
        self._fitness.flush()

    def close(self):
        self._survivors.close()
        self._fitness.close()


def persist(record: RunRecord, directory: str | Path) -> dict:
    """Write a finished record's files into directory, return the paths."""
    writer = RunWriter(directory, record.spec)
    for g, individuals in enumerate(record.populations):
        writer.append(g, individuals, record.evaluations[g],
                      record.mean_fitness[g], record.best_fitness[g])
    writer.close()
    log_path = Path(directory) / "log.txt"
    with open(log_path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(f"persisted record: {len(record.populations)} snapshots, "
                 f"{record.total_evaluations} evaluations, "
                 f"termination {record.termination}\n")
    return {"survivors": writer.survivors_path,
            "fitness": writer.fitness_path,
            "log": log_path}


def _resolve_crossover(method, spec: GeneSpec) -> str:
    if method is None:
        return BETWEEN if spec.is_numeric else EITHER_OR
    if method not in CROSSOVER_METHODS:
        raise ConfigError(f"unknown crossover method {method!r}")
    if not spec.is_numeric and method in (MIDPOINT, BETWEEN):
        raise IllegalMethodError(
            f"{method} crossover is undefined for categorical genomes")
    return method


def _resolve_selection(selection, spec: GeneSpec, population: Population):
    """Returns ("diverse", DiversityConfig) or ("topn", None)."""
    if isinstance(selection, str):
        name = selection.lower()
        if name in ("diverse", "diversity"):
            selection = DiversityEnhanced()
        elif name in ("topn", "top_n", "fitness"):
            selection = TopN()
        else:
            raise ConfigError(f"unknown selection method {selection!r}")
    if isinstance(selection, TopN):
        return "topn", None
    if not isinstance(selection, DiversityEnhanced):
        raise ConfigError(f"unknown selection method {selection!r}")
    measure = get_measure(selection.measure, spec)
    _spot_check_symmetry(measure, selection.measure, population)
    r0 = selection.r0
    if r0 is None:
        if spec.is_numeric:
            r0 = default_r0(population, measure)
            if r0 <= 0.0:
                warnings.warn(
                    "initial population has no spread; falling back to r0=1")
                r0 = 1.0
        else:
            r0 = 1.0
    return "diverse", DiversityConfig(d0=selection.d0, r0=r0, measure=measure)


def _spot_check_symmetry(measure: DistanceMeasure, raw, population):
    """Custom measures only: warn when measure(a, b) != measure(b, a)."""
    if raw is None or isinstance(raw, (str, DistanceMeasure)) or not callable(raw):
        return
    individuals = population.individuals
    for i, j in [(0, 1), (0, 2), (1, 2)][:max(0, len(individuals) - 1)]:
        if j >= len(individuals):
            continue
        a, b = individuals[i].genes, individuals[j].genes
        forward, backward = measure(a, b), measure(b, a)
        if not math.isclose(forward, backward, rel_tol=1e-9, abs_tol=1e-12):
            warnings.warn(
                f"distance measure is asymmetric on a sampled pair: "
                f"{forward} vs {backward}")
            return


def _validate_config(config: EngineConfig, spec: GeneSpec):
    if config.population_size < 2:
        raise ConfigError("population_size must be at least 2")
    if config.n_generations < 1:
        raise ConfigError("n_generations must be positive")
    if config.pairing not in PAIRING_STRATEGIES:
        raise ConfigError(f"unknown pairing strategy {config.pairing!r}")
    if config.parallel_workers < 0:
        raise ConfigError("parallel_workers cannot be negative")
    if config.verbosity not in (0, 1, 2):
        raise ConfigError("verbosity must be 0, 1 or 2")


def run(spec: GeneSpec, fitness, config: EngineConfig, *,
        init_genes=None, fitness_args=()) -> RunRecord:
    """Run the genetic algorithm and return its full history.

    fitness maps one gene vector to a real number; extra fixed arguments
    can be bound through fitness_args. init_genes seeds part of the
    initial population. A fitness failure aborts the run and raises
    FitnessEvaluationError with the partial record attached; an
    unwritable output directory raises OSError.
    """
    validate_spec(spec)
    _validate_config(config, spec)
    crossover = _resolve_crossover(config.crossover, spec)
    mutation = resolve_mutation(config.mutation, spec)
    bound = _BoundFitness(fitness, fitness_args) if fitness_args else fitness

    rng = np.random.default_rng(config.seed)
    population = seed_population(spec, config.population_size, rng, init_genes)

    out_dir = Path(config.output_directory) if config.output_directory else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    log = _RunLog(out_dir, config.verbosity)
    writer = RunWriter(out_dir, spec) if out_dir is not None else None
    record = RunRecord(spec=spec, termination=ABORTED)
    if writer is not None:
        record.output_files = {"survivors": writer.survivors_path,
                               "fitness": writer.fitness_path,
                               "log": out_dir / "log.txt"}

    def snapshot(generation, individuals, cumulative):
        frozen = [Individual(genes=ind.genes.copy(), fitness=ind.fitness)
                  for ind in individuals]
        fitness_values = np.array([ind.fitness for ind in frozen])
        mean = float(fitness_values.mean())
        best = float(fitness_values.max())
        record.populations.append(frozen)
        record.mean_fitness.append(mean)
        record.best_fitness.append(best)
        record.evaluations.append(cumulative)
        if writer is not None:
            writer.append(generation, frozen, cumulative, mean, best)
        log.line(1, f"generation {generation}: best={best:.6g} "
                    f"mean={mean:.6g} evaluations={cumulative}")
        return best

    def abort(exc):
        record.termination = ABORTED
        exc.partial_record = record
        log.line(1, f"run aborted: {exc}")
        if writer is not None:
            writer.close()
        log.close()

    log.line(1, f"run started: population={config.population_size} "
                f"generations={config.n_generations} crossover={crossover} "
                f"pairing={config.pairing} seed={config.seed}")
    try:
        cumulative = evaluate_population(population.individuals, bound,
                                         config.parallel_workers)
    except FitnessEvaluationError as exc:
        abort(exc)
        raise
    kind, diversity = _resolve_selection(config.selection, spec, population)
    if diversity is not None:
        log.line(1, f"selection: diversity-enhanced, d0={diversity.d0:g}, "
                    f"r0={diversity.r0:g}, measure={diversity.measure.name}")
    else:
        log.line(1, "selection: top-n on raw fitness")

    best = snapshot(0, population.individuals, cumulative)
    previous_best = best
    record.termination = GENERATIONS_EXHAUSTED
    for generation in range(1, config.n_generations + 1):
        offspring = produce_offspring(population, crossover, config.pairing,
                                      mutation, rng)
        try:
            cumulative += evaluate_population(offspring, bound,
                                              config.parallel_workers)
        except FitnessEvaluationError as exc:
            abort(exc)
            raise
        pool = population.individuals + offspring
        if kind == "diverse":
            survivors = select_diverse(pool, config.population_size, diversity)
        else:
            survivors = select_top_n(pool, config.population_size)
        population = Population(survivors, generation_index=generation)
        best = snapshot(generation, survivors, cumulative)
        if config.verbosity >= 2:
            for rank, ind in enumerate(survivors):
                penalized = ind.penalized_fitness
                note = "" if penalized is None else f" working={penalized:.6g}"
                log.line(2, f"  survivor {rank}: fitness={ind.fitness:.6g}"
                            f"{note} genes={list(ind.genes)}")
        assert best >= previous_best, "elitist selection lost the best individual"
        previous_best = best
        if (config.fitness_threshold is not None
                and best >= config.fitness_threshold):
            record.termination = THRESHOLD_REACHED
            break

    log.line(1, f"run finished: {record.termination} after "
                f"{len(record.populations) - 1} generations, "
                f"{cumulative} evaluations")
    if writer is not None:
        writer.close()
    log.close()
    return record
