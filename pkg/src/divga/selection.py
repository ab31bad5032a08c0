"""Survivor selection.

Diversity-enhanced selection repeatedly takes the candidate with the
highest working fitness and then lowers the working fitness of everyone
still in the pool by a penalty that decays with squared distance to the
new survivor:

    penalty = d0 * exp(-r^2 / r0^2)

Candidates sitting on top of an already chosen survivor lose the full
d0, candidates far away lose nothing. Penalties accumulate over the
picks of one selection pass and are discarded afterwards. With d0 = 0
the procedure degenerates to plain truncation selection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distance import DistanceMeasure, EuclideanSq
from .errors import ConfigError, CountExceedsPoolError, UnevaluatedCandidateError
from .genome import Individual


@dataclass
class DiversityConfig:
    """Resolved parameters of the diversity penalty.

    d0 is the penalty for exactly overlapping candidates, r0 the decay
    radius in the same squared-distance units as the measure.
    """

    d0: float = 1.0
    r0: float = 1.0
    measure: DistanceMeasure = field(default_factory=EuclideanSq)

    def __post_init__(self):
        if self.d0 < 0:
            raise ConfigError("d0 must be non-negative")
        if not self.r0 > 0:
            raise ConfigError("r0 must be positive")


def diversity_penalty(a: Individual, b: Individual,
                      config: DiversityConfig) -> float:
    """Penalty an individual at a receives from a survivor at b."""
    r_sq = config.measure(a.genes, b.genes)
    return config.d0 * float(np.exp(-r_sq / config.r0 ** 2))


def _working_fitness(candidates) -> np.ndarray:
    fitness = np.empty(len(candidates))
    for i, cand in enumerate(candidates):
        if cand.fitness is None:
            raise UnevaluatedCandidateError(
                f"candidate {i} has no fitness value")
        fitness[i] = cand.fitness
    return fitness


def select_diverse(candidates: list[Individual], count: int,
                   config: DiversityConfig) -> list[Individual]:
    """Pick count survivors by iterated penalized-argmax.

    Each pick takes the highest working fitness (ties broken toward the
    lowest index), then subtracts the diversity penalty around the pick
    from every remaining candidate. The working fitness at pick time is
    stored on the survivor as penalized_fitness. The input list is not
    reordered; calling twice on the same pool gives the same result.
    """
    if count > len(candidates):
        raise CountExceedsPoolError(
            f"asked for {count} survivors from {len(candidates)} candidates")
    work = _working_fitness(candidates)
    genes = np.stack([cand.genes for cand in candidates])
    alive = np.ones(len(candidates), dtype=bool)
    inv_r0_sq = 1.0 / config.r0 ** 2
    survivors: list[Individual] = []
    for _ in range(count):
        masked = np.where(alive, work, -np.inf)
        pick = int(np.argmax(masked))
        chosen = candidates[pick]
        chosen.penalized_fitness = float(work[pick])
        survivors.append(chosen)
        alive[pick] = False
        if config.d0 != 0.0 and alive.any():
            r_sq = config.measure.to_point(genes[alive], genes[pick])
            work[alive] -= config.d0 * np.exp(-np.asarray(r_sq) * inv_r0_sq)
    return survivors


def select_top_n(candidates: list[Individual], count: int) -> list[Individual]:
    """Pick the count best by raw fitness, ties toward the lowest index."""
    if count > len(candidates):
        raise CountExceedsPoolError(
            f"asked for {count} survivors from {len(candidates)} candidates")
    fitness = _working_fitness(candidates)
    order = sorted(range(len(candidates)), key=lambda i: (-fitness[i], i))
    return [candidates[i] for i in order[:count]]
