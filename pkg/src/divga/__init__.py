"""Diversity-enhanced genetic algorithm for exploring parameter spaces.

Survivor selection penalizes crowding: each time a candidate is picked,
everyone nearby loses working fitness, so the survivors end up spanning
the high-fitness region instead of piling onto its single best point.
"""

from .baselines import DEConfig, DEResult, RandomScanTrace, random_scan, run_de
from .bench import (
    BenchmarkReport,
    EXPERIMENTS,
    angular_bin_occupancy,
    calculate_scd,
    circle_fitness,
    hamming_spread,
    landscape_fitness,
    net_charge,
    run_experiment,
    scd_fitness,
    spread,
)
from .distance import (
    DistanceMeasure,
    DynamicSq,
    EuclideanSq,
    HammingSq,
    default_r0,
    dynamic_sq,
    euclidean_sq,
    get_measure,
    hamming_sq,
)
from .engine import (
    DiversityEnhanced,
    EngineConfig,
    RunRecord,
    TopN,
    evaluate_population,
    persist,
    run,
)
from .errors import (
    ConfigError,
    CountExceedsPoolError,
    DivgaError,
    EmptyRangeError,
    FitnessEvaluationError,
    IllegalMethodError,
    LengthMismatchError,
    MixedKindsError,
    PopulationTooSmallError,
    ShapeMismatchError,
    TooFewCategoriesError,
    UnevaluatedCandidateError,
    UnknownExperimentError,
    UnknownLabelError,
    ZeroGenesError,
)
from .genome import GeneSpec, Individual, Population, random_individual, seed_population
from .selection import DiversityConfig, diversity_penalty, select_diverse, select_top_n
from .variation import MutationConfig, crossover, make_pairs, mutate, produce_offspring

__version__ = "0.1.0"

__all__ = [
    "BenchmarkReport",
    "ConfigError",
    "CountExceedsPoolError",
    "DEConfig",
    "DEResult",
    "DistanceMeasure",
    "DiversityConfig",
    "DiversityEnhanced",
    "DivgaError",
    "DynamicSq",
    "EXPERIMENTS",
    "EmptyRangeError",
    "EngineConfig",
    "EuclideanSq",
    "FitnessEvaluationError",
    "GeneSpec",
    "HammingSq",
    "IllegalMethodError",
    "Individual",
    "LengthMismatchError",
    "MixedKindsError",
    "MutationConfig",
    "Population",
    "PopulationTooSmallError",
    "RandomScanTrace",
    "RunRecord",
    "ShapeMismatchError",
    "TooFewCategoriesError",
    "TopN",
    "UnevaluatedCandidateError",
    "UnknownExperimentError",
    "UnknownLabelError",
    "ZeroGenesError",
    "angular_bin_occupancy",
    "calculate_scd",
    "circle_fitness",
    "crossover",
    "default_r0",
    "diversity_penalty",
    "dynamic_sq",
    "euclidean_sq",
    "evaluate_population",
    "get_measure",
    "hamming_spread",
    "hamming_sq",
    "landscape_fitness",
    "make_pairs",
    "mutate",
    "net_charge",
    "persist",
    "produce_offspring",
    "random_individual",
    "random_scan",
    "run",
    "run_de",
    "run_experiment",
    "scd_fitness",
    "seed_population",
    "select_diverse",
    "select_top_n",
    "spread",
]
