"""Offspring creation: pairing, crossover and mutation.

Everything here is pure given an explicit random generator, so callers
control determinism by controlling the generator. Within one call to
produce_offspring the draw order is fixed: pairing draws first, then for
each child its crossover draws followed by its mutation draws.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConfigError,
    IllegalMethodError,
    PopulationTooSmallError,
)
from .genome import GeneSpec, Individual, Population

MIDPOINT = "midpoint"
EITHER_OR = "eitheror"
BETWEEN = "between"
NONE = "none"
CROSSOVER_METHODS = (MIDPOINT, EITHER_OR, BETWEEN, NONE)

ALL_PAIRS = "all"
RANDOM_PAIRS = "random"
PAIRING_STRATEGIES = (ALL_PAIRS, RANDOM_PAIRS)

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
RANDOM_MODE = "random"
CATEGORICAL_MODE = "categorical"
MUTATION_MODES = (ADDITIVE, MULTIPLICATIVE, RANDOM_MODE, CATEGORICAL_MODE)


@dataclass
class MutationConfig:
    """Per-gene mutation settings.

    rate None resolves to 1 / number_of_genes, mode None to "additive"
    for numeric genomes and "categorical" for categorical ones. The spec
    supplies gene ranges (additive noise scale is one tenth of the range
    width) and the category set. Mutated numeric genes may leave their
    initial ranges unless clip_to_ranges is set.
    """

    rate: float | None = None
    mode: str | None = None
    spec: GeneSpec | None = None
    clip_to_ranges: bool = False


def resolve_mutation(config: MutationConfig | None,
                     spec: GeneSpec) -> MutationConfig:
    """Fill in defaults and validate against the genome kind."""
    if config is None:
        config = MutationConfig()
    rate = config.rate
    if rate is None:
        rate = 1.0 / spec.number_of_genes
    if not 0.0 <= rate <= 1.0:
        raise ConfigError(f"mutation rate {rate} outside [0, 1]")
    mode = config.mode
    if mode is None:
        mode = ADDITIVE if spec.is_numeric else CATEGORICAL_MODE
    if mode not in MUTATION_MODES:
        raise ConfigError(f"unknown mutation mode {mode!r}")
    if spec.is_numeric and mode == CATEGORICAL_MODE:
        raise ConfigError("categorical mutation needs a categorical genome")
    if not spec.is_numeric and mode != CATEGORICAL_MODE:
        raise ConfigError("categorical genomes only support categorical mutation")
    return replace(config, rate=rate, mode=mode, spec=spec)


def _genome_is_numeric(individual: Individual) -> bool:
    return np.issubdtype(individual.genes.dtype, np.number)


def crossover(parent_a: Individual, parent_b: Individual, method: str,
              rng: np.random.Generator) -> Individual:
    """Combine two parents into one unevaluated child.

    midpoint: per-gene average of the parents.
    eitheror: per gene take parent_b's value with probability 1/2,
        otherwise parent_a's, independently per gene.
    between: per gene uniform on the closed interval spanned by the
        two parent values.
    none: copy of parent_a, parent_b ignored.

    midpoint and between are only legal on numeric genomes.
    """
    if method not in CROSSOVER_METHODS:
        raise IllegalMethodError(f"unknown crossover method {method!r}")
    a, b = parent_a.genes, parent_b.genes
    if method == NONE:
        return Individual(genes=a.copy())
    numeric = _genome_is_numeric(parent_a)
    if not numeric and method in (MIDPOINT, BETWEEN):
        raise IllegalMethodError(
            f"{method} crossover is undefined for categorical genomes")
    if method == MIDPOINT:
        return Individual(genes=(a + b) / 2.0)
    if method == EITHER_OR:
        take_b = rng.random(len(a)) < 0.5
        return Individual(genes=np.where(take_b, b, a))
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return Individual(genes=rng.uniform(lo, hi))


def mutate(child: Individual, config: MutationConfig,
           rng: np.random.Generator) -> Individual:
    """Return a mutated copy of child.

    Each gene independently mutates with probability config.rate.
    Additive mutation adds Gaussian noise with sigma one tenth of the
    gene's range width, multiplicative scales by N(1, 0.5), random picks
    one of the two per mutated gene with equal probability, categorical
    redraws the label uniformly from the full category set (so it can
    redraw the current label).
    """
    spec = config.spec
    if spec is None:
        raise ConfigError("mutation config is not bound to a genome spec")
    genes = child.genes.copy()
    n = len(genes)
    fires = rng.random(n) < config.rate
    if not fires.any():
        return Individual(genes=genes)
    if config.mode == CATEGORICAL_MODE:
        picks = rng.integers(0, len(spec.categories), size=n)
        for k in np.flatnonzero(fires):
            genes[k] = spec.categories[picks[k]]
        return Individual(genes=genes)
    sigma = spec.range_widths() / 10.0
    if config.mode == ADDITIVE:
        additive = fires
        multiplicative = np.zeros(n, dtype=bool)
    elif config.mode == MULTIPLICATIVE:
        additive = np.zeros(n, dtype=bool)
        multiplicative = fires
    else:
        go_additive = rng.random(n) < 0.5
        additive = fires & go_additive
        multiplicative = fires & ~go_additive
    if additive.any():
        genes[additive] += rng.normal(0.0, sigma[additive])
    if multiplicative.any():
        genes[multiplicative] *= rng.normal(1.0, 0.5, size=int(multiplicative.sum()))
    if config.clip_to_ranges:
        lows = np.array([lo for lo, _ in spec.numeric_ranges])
        highs = np.array([hi for _, hi in spec.numeric_ranges])
        np.clip(genes, lows, highs, out=genes)
    return Individual(genes=genes)


def make_pairs(population: Population | list, strategy: str,
               rng: np.random.Generator) -> list[tuple[int, int]]:
    """Index pairs of parents to cross.

    "all" enumerates every unordered pair, n(n-1)/2 of them. "random"
    draws n pairs with distinct indices, independently and with
    replacement across draws.
    """
    n = len(population)
    if n < 2:
        raise PopulationTooSmallError("pairing needs at least two parents")
    if strategy == ALL_PAIRS:
        return list(itertools.combinations(range(n), 2))
    if strategy != RANDOM_PAIRS:
        raise ConfigError(f"unknown pairing strategy {strategy!r}")
    first = rng.integers(0, n, size=n)
    second = rng.integers(0, n - 1, size=n)
    second = second + (second >= first)
    return list(zip(first.tolist(), second.tolist()))


def produce_offspring(population: Population, method: str, strategy: str,
                      mutation: MutationConfig,
                      rng: np.random.Generator) -> list[Individual]:
    """One generation's offspring, crossed and mutated, all unevaluated.

    With crossover "none" the pairing strategy is ignored and every
    parent contributes exactly one mutated copy, n offspring total.
    Otherwise the pairing strategy decides the number of children:
    n(n-1)/2 for "all", n for "random".
    """
    parents = population.individuals
    if method == NONE:
        return [mutate(parent.copy(), mutation, rng) for parent in parents]
    pairs = make_pairs(population, strategy, rng)
    offspring = []
    for i, j in pairs:
        child = crossover(parents[i], parents[j], method, rng)
        offspring.append(mutate(child, mutation, rng))
    return offspring
