"""Benchmark fitness functions and canned comparison experiments.

The experiments pit the diversity-enhanced genetic algorithm against
differential evolution and a uniform random scan on small test
landscapes, at matched fitness-evaluation budgets, and report per-run
rows plus aggregates that can be recomputed from those rows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import DEConfig, random_scan, run_de
from .engine import (
    DiversityEnhanced,
    EngineConfig,
    TopN,
    _format_real,
    run,
)
from .errors import (
    ConfigError,
    PopulationTooSmallError,
    UnknownExperimentError,
    UnknownLabelError,
)
from .genome import GeneSpec

CHARGES = {"K": 1.0, "E": -1.0}


def landscape_fitness(x1: float, x2: float) -> float:
    """Oscillatory plateau inside a hard box.

    Returns -1000 outside |x1|, |x2| <= 1.5 and 10 cos(20 x1 x2)
    inside, a landscape whose ridges of near-maximal fitness are thin
    hyperbola-shaped bands.
    """
    if abs(x1) > 1.5 or abs(x2) > 1.5:
        return -1000.0
    return 10.0 * float(np.cos(20.0 * x1 * x2))


def circle_fitness(x: float, y: float, amplitude: float = 5.0,
                   radius: float = 5.0) -> float:
    """Zero on the circle of given radius, quadratic falloff elsewhere."""
    r = float(np.hypot(x, y))
    return -amplitude * (r - radius) ** 2


def _charge_vector(sequence) -> np.ndarray:
    charges = np.empty(len(sequence))
    for k, label in enumerate(sequence):
        try:
            charges[k] = CHARGES[label]
        except (KeyError, TypeError):
            raise UnknownLabelError(f"no charge defined for label {label!r}")
    return charges


def calculate_scd(sequence) -> float:
    """Sequence charge decoration of a K/E label sequence.

    Sum over ordered index pairs a < b of q_a q_b sqrt(b - a), divided
    by the sequence length. Blocky sequences of like charges score far
    from zero, well-mixed sequences near zero.
    """
    q = _charge_vector(sequence)
    n = len(q)
    if n == 0:
        raise UnknownLabelError("empty sequence")
    a, b = np.triu_indices(n, k=1)
    return float(np.sum(q[a] * q[b] * np.sqrt(b - a)) / n)


def scd_fitness(sequence, target_scd: float) -> float:
    """Negative squared deviation of the sequence's SCD from a target."""
    return -(calculate_scd(sequence) - target_scd) ** 2


def net_charge(sequence) -> int:
    """Number of K labels minus number of E labels."""
    return int(round(_charge_vector(sequence).sum()))


def spread(points) -> float:
    """Mean Euclidean distance over all unordered pairs of points."""
    pts = np.asarray(list(points), dtype=float)
    n = len(pts)
    if n < 2:
        raise PopulationTooSmallError("spread needs at least two points")
    diff = pts[:, None, :] - pts[None, :, :]
    dists = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    iu = np.triu_indices(n, k=1)
    return float(dists[iu].mean())


def hamming_spread(sequences) -> float:
    """Mean pairwise fraction of differing positions."""
    rows = list(sequences)
    n = len(rows)
    if n < 2:
        raise PopulationTooSmallError("spread needs at least two sequences")
    matrix = np.stack([np.asarray(row, dtype=object) for row in rows])
    total = 0.0
    for i in range(n - 1):
        total += float(np.mean(matrix[i + 1:] != matrix[i], axis=1).sum())
    return total / (n * (n - 1) / 2)


def angular_bin_occupancy(points, n_bins: int = 12) -> np.ndarray:
    """Counts of points per equal-width angular bin around the origin."""
    pts = np.asarray(list(points), dtype=float)
    angles = np.arctan2(pts[:, 1], pts[:, 0])
    bins = np.floor((angles + np.pi) / (2 * np.pi / n_bins)).astype(int)
    bins = np.clip(bins, 0, n_bins - 1)
    return np.bincount(bins, minlength=n_bins)


def landscape_from_genes(genes) -> float:
    return landscape_fitness(genes[0], genes[1])


def circle_from_genes(genes, amplitude: float = 5.0,
                      radius: float = 5.0) -> float:
    return circle_fitness(genes[0], genes[1], amplitude, radius)


def scd_from_genes(genes, target_scd: float) -> float:
    return scd_fitness(genes, target_scd)


EXPERIMENTS = (
    "landscape-compare",
    "circle",
    "scd",
    "crossover-sweep",
    "random-compare",
)

_OVERRIDE_KEYS = ("population", "generations", "repetitions", "crossover",
                  "pairing", "selection", "d0", "r0", "workers")

_DEFAULTS = {
    "landscape-compare": dict(population=200, generations=100, repetitions=10,
                              crossover="none", pairing="random",
                              ranges=((-1.5, 1.5), (-1.5, 1.5))),
    "random-compare": dict(population=200, generations=100, repetitions=10,
                           crossover="none", pairing="random",
                           ranges=((-10.0, 10.0), (-10.0, 10.0))),
    "circle": dict(population=100, generations=20, repetitions=10,
                   crossover="between", pairing="random",
                   ranges=((-10.0, 10.0), (-10.0, 10.0)),
                   amplitude=5.0, radius=5.0),
    "scd": dict(population=100, generations=50, repetitions=10,
                crossover="eitheror", pairing="random",
                sequence_length=50, target_scd=-10.0),
    "crossover-sweep": dict(population=200, generations=100, repetitions=3,
                            pairing="random",
                            ranges=((-1.5, 1.5), (-1.5, 1.5))),
}


@dataclass
class BenchmarkReport:
    """Result of one experiment: per-run rows plus derived aggregates."""

    experiment: str
    rows: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    summary: str = ""
    files: dict = field(default_factory=dict)


def _mean_sd(values) -> tuple[float, float]:
    arr = np.asarray(list(values), dtype=float)
    sd = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return float(arr.mean()), sd


def _selection_from(settings):
    name = settings.get("selection", "diverse")
    if name == "topn":
        return TopN()
    if name != "diverse":
        raise ConfigError(f"unknown selection {name!r}")
    d0 = settings.get("d0")
    return DiversityEnhanced(d0=1.0 if d0 is None else float(d0),
                             r0=settings.get("r0"))


def _ga_config(settings, seed: int) -> EngineConfig:
    return EngineConfig(
        population_size=settings["population"],
        n_generations=settings["generations"],
        crossover=settings.get("crossover"),
        pairing=settings.get("pairing", "random"),
        selection=_selection_from(settings),
        seed=seed,
        parallel_workers=settings.get("workers", 0),
        verbosity=0,
    )


def _ga_row(spec, fitness, settings, seed, repetition, *, fitness_args=()):
    record = run(spec, fitness, _ga_config(settings, seed),
                 fitness_args=fitness_args)
    final = record.final_population
    genes = [ind.genes for ind in final]
    pop_spread = spread(genes) if spec.is_numeric else hamming_spread(genes)
    row = {
        "algorithm": "ga",
        "repetition": repetition,
        "seed": seed,
        "final_mean_fitness": record.mean_fitness[-1],
        "best_fitness": record.best_fitness[-1],
        "spread": pop_spread,
        "evaluations": record.total_evaluations,
    }
    return row, record


def _landscape_compare(settings, seed):
    spec = GeneSpec.numeric(settings["ranges"])
    rows = []
    for rep in range(settings["repetitions"]):
        rep_seed = seed + rep
        ga_row, _ = _ga_row(spec, landscape_from_genes, settings,
                            rep_seed, rep)
        rows.append(ga_row)
        de = run_de(spec, landscape_from_genes,
                    DEConfig(population_size=settings["population"],
                             n_generations=settings["generations"],
                             seed=rep_seed,
                             parallel_workers=settings.get("workers", 0)))
        rows.append({
            "algorithm": "de",
            "repetition": rep,
            "seed": rep_seed,
            "final_mean_fitness": float(de.fitness.mean()),
            "best_fitness": float(de.fitness.max()),
            "spread": spread(de.genes),
            "evaluations": de.total_evaluations,
        })
    ga_rows = [r for r in rows if r["algorithm"] == "ga"]
    de_rows = [r for r in rows if r["algorithm"] == "de"]
    aggregates = {}
    lines = [f"repetitions: {settings['repetitions']}"]
    for label, group in (("ga", ga_rows), ("de", de_rows)):
        fit_mean, fit_sd = _mean_sd(r["final_mean_fitness"] for r in group)
        spr_mean, spr_sd = _mean_sd(r["spread"] for r in group)
        aggregates[label] = {
            "final_mean_fitness_mean": fit_mean,
            "final_mean_fitness_sd": fit_sd,
            "spread_mean": spr_mean,
            "spread_sd": spr_sd,
        }
        lines.append(f"{label}: final mean fitness {fit_mean:.4f} +/- "
                     f"{fit_sd:.4f}, population spread {spr_mean:.4f} +/- "
                     f"{spr_sd:.4f}")
    wins = sum(1 for g, d in zip(ga_rows, de_rows) if g["spread"] > d["spread"])
    aggregates["ga_spread_wins"] = wins
    lines.append(f"ga spread exceeded de spread in {wins}/"
                 f"{settings['repetitions']} repetitions")
    return rows, aggregates, lines


def _circle(settings, seed):
    spec = GeneSpec.numeric(settings["ranges"])
    args = (settings["amplitude"], settings["radius"])
    rows = []
    for rep in range(settings["repetitions"]):
        row, record = _ga_row(spec, circle_from_genes, settings,
                              seed + rep, rep, fitness_args=args)
        genes = np.stack([ind.genes for ind in record.final_population])
        radii = np.hypot(genes[:, 0], genes[:, 1])
        occupancy = angular_bin_occupancy(genes)
        row["radial_error_mean"] = float(np.abs(radii - settings["radius"]).mean())
        row["bins_occupied"] = int((occupancy > 0).sum())
        rows.append(row)
    err_mean, err_sd = _mean_sd(r["radial_error_mean"] for r in rows)
    full = sum(1 for r in rows if r["bins_occupied"] == 12)
    aggregates = {
        "radial_error_mean": err_mean,
        "radial_error_sd": err_sd,
        "min_bins_occupied": min(r["bins_occupied"] for r in rows),
        "all_bins_occupied_runs": full,
    }
    lines = [
        f"repetitions: {settings['repetitions']}",
        f"mean radial error {err_mean:.4f} +/- {err_sd:.4f} "
        f"(target circle radius {settings['radius']:g})",
        f"all 12 angular bins occupied in {full}/{settings['repetitions']} "
        f"repetitions (minimum occupied: {aggregates['min_bins_occupied']})",
    ]
    return rows, aggregates, lines


def _scd(settings, seed):
    spec = GeneSpec.categorical(("E", "K"), settings["sequence_length"])
    target = settings["target_scd"]
    rows = []
    for rep in range(settings["repetitions"]):
        row, record = _ga_row(spec, scd_from_genes, settings,
                              seed + rep, rep, fitness_args=(target,))
        finals = [ind.genes for ind in record.final_population]
        scds = np.array([calculate_scd(g) for g in finals])
        charges = np.array([net_charge(g) for g in finals])
        row["mean_abs_scd_error"] = float(np.abs(scds - target).mean())
        row["net_charge_min"] = int(charges.min())
        row["net_charge_max"] = int(charges.max())
        row["net_charge_range"] = int(charges.max() - charges.min())
        rows.append(row)
    err_mean, err_sd = _mean_sd(r["mean_abs_scd_error"] for r in rows)
    rng_mean, rng_sd = _mean_sd(r["net_charge_range"] for r in rows)
    aggregates = {
        "mean_abs_scd_error_mean": err_mean,
        "mean_abs_scd_error_sd": err_sd,
        "net_charge_range_mean": rng_mean,
        "net_charge_range_sd": rng_sd,
        "min_net_charge_range": min(r["net_charge_range"] for r in rows),
    }
    lines = [
        f"repetitions: {settings['repetitions']}, target SCD {target:g}, "
        f"sequence length {settings['sequence_length']}",
        f"mean |SCD - target| {err_mean:.4f} +/- {err_sd:.4f}",
        f"net charge range {rng_mean:.1f} +/- {rng_sd:.1f} "
        f"(minimum {aggregates['min_net_charge_range']})",
        "spread column: mean pairwise fraction of differing positions",
    ]
    return rows, aggregates, lines


def _crossover_sweep(settings, seed):
    spec = GeneSpec.numeric(settings["ranges"])
    rows = []
    methods = ("midpoint", "eitheror", "between", "none")
    for method in methods:
        per_method = dict(settings, crossover=method)
        for rep in range(settings["repetitions"]):
            row, _ = _ga_row(spec, landscape_from_genes, per_method,
                             seed + rep, rep)
            row["crossover"] = method
            rows.append(row)
    aggregates = {}
    lines = [f"repetitions per method: {settings['repetitions']}"]
    for method in methods:
        group = [r for r in rows if r["crossover"] == method]
        fit_mean, _ = _mean_sd(r["final_mean_fitness"] for r in group)
        spr_mean, _ = _mean_sd(r["spread"] for r in group)
        aggregates[method] = {"final_mean_fitness_mean": fit_mean,
                              "spread_mean": spr_mean}
        lines.append(f"{method}: final mean fitness {fit_mean:.4f}, "
                     f"spread {spr_mean:.4f}")
    return rows, aggregates, lines


def _random_compare(settings, seed):
    spec = GeneSpec.numeric(settings["ranges"])
    rows = []
    for rep in range(settings["repetitions"]):
        rep_seed = seed + rep
        ga_row, record = _ga_row(spec, landscape_from_genes, settings,
                                 rep_seed, rep)
        rows.append(ga_row)
        trace = random_scan(spec, landscape_from_genes,
                            record.total_evaluations,
                            settings["population"],
                            np.random.default_rng(rep_seed))
        rows.append({
            "algorithm": "random",
            "repetition": rep,
            "seed": rep_seed,
            "final_mean_fitness": trace.final_mean,
            "best_fitness": float(trace.kept_fitness.max()),
            "spread": spread(trace.kept_genes),
            "evaluations": int(trace.evaluations[-1]),
        })
    ga_rows = [r for r in rows if r["algorithm"] == "ga"]
    rnd_rows = [r for r in rows if r["algorithm"] == "random"]
    wins = sum(1 for g, r in zip(ga_rows, rnd_rows)
               if g["final_mean_fitness"] > r["final_mean_fitness"])
    ga_mean, _ = _mean_sd(r["final_mean_fitness"] for r in ga_rows)
    rnd_mean, _ = _mean_sd(r["final_mean_fitness"] for r in rnd_rows)
    aggregates = {
        "ga_final_mean_fitness_mean": ga_mean,
        "random_final_mean_fitness_mean": rnd_mean,
        "ga_wins": wins,
    }
    lines = [
        f"repetitions: {settings['repetitions']}, equal evaluation budgets",
        f"ga final mean fitness {ga_mean:.4f}, random scan kept-set mean "
        f"{rnd_mean:.4f}",
        f"ga beat the random scan in {wins}/{settings['repetitions']} "
        f"repetitions",
    ]
    return rows, aggregates, lines


_EXPERIMENT_FNS = {
    "landscape-compare": _landscape_compare,
    "circle": _circle,
    "scd": _scd,
    "crossover-sweep": _crossover_sweep,
    "random-compare": _random_compare,
}


def _apply_overrides(settings: dict, overrides: dict | None) -> dict:
    if not overrides:
        return settings
    for key, value in overrides.items():
        if key not in _OVERRIDE_KEYS:
            raise ConfigError(f"unknown experiment option {key!r}")
        if value is None:
            continue
        if key in ("population", "generations", "repetitions", "workers"):
            value = int(value)
            if key != "workers" and value < 1:
                raise ConfigError(f"{key} must be positive")
            if key == "workers" and value < 0:
                raise ConfigError("workers cannot be negative")
        elif key in ("d0", "r0"):
            value = float(value)
        settings[key] = value
    return settings


def _format_cell(value) -> str:
    if isinstance(value, bool) or isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_real(value)
    return str(value)


def _write_files(report: BenchmarkReport, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    runs_path = directory / f"{report.experiment}_runs.csv"
    columns = list(report.rows[0].keys())
    with open(runs_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in report.rows:
            writer.writerow([_format_cell(row[col]) for col in columns])
    summary_path = directory / f"{report.experiment}_summary.txt"
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.summary + "\n")
    report.files = {"runs": runs_path, "summary": summary_path}


def run_experiment(name: str, overrides: dict | None = None, seed: int = 0,
                   output_directory=None) -> BenchmarkReport:
    """Run one named experiment and optionally write its files.

    Emits <experiment>_runs.csv (one row per run) and
    <experiment>_summary.txt into output_directory when it is given.
    Repetition r of an experiment uses seed + r, so a master seed pins
    the whole experiment.
    """
    if name not in _EXPERIMENT_FNS:
        raise UnknownExperimentError(
            f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    settings = _apply_overrides(dict(_DEFAULTS[name]), overrides)
    rows, aggregates, lines = _EXPERIMENT_FNS[name](settings, seed)
    header = [f"experiment: {name}", f"master seed: {seed}"]
    report = BenchmarkReport(experiment=name, rows=rows, aggregates=aggregates,
                             summary="\n".join(header + lines))
    if output_directory is not None:
        _write_files(report, output_directory)
    return report
