"""Genome specification, individuals and populations.

A genome is either numeric (every gene is a float drawn from a bounded
range) or categorical (every gene is a label from one shared category
set). Mixed genomes are rejected up front.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyRangeError,
    MixedKindsError,
    ShapeMismatchError,
    TooFewCategoriesError,
    ZeroGenesError,
)

NUMERIC = "numeric"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class GeneSpec:
    """Declares the shape and admissible values of a genome.

    Build instances through :meth:`numeric` or :meth:`categorical`; the
    raw constructor does not validate.

    Attributes:
        kind: "numeric" or "categorical".
        numeric_ranges: per-gene (lower, upper) bounds, numeric kind only.
        categories: shared label set, categorical kind only.
        number_of_genes: length of every gene vector.
    """

    kind: str
    numeric_ranges: tuple[tuple[float, float], ...] | None = None
    categories: tuple = None
    number_of_genes: int = 0

    @classmethod
    def numeric(cls, ranges) -> "GeneSpec":
        """Numeric genome with one (lower, upper) range per gene."""
        ranges = tuple((float(lo), float(hi)) for lo, hi in ranges)
        return validate_spec(cls(NUMERIC, numeric_ranges=ranges,
                                 number_of_genes=len(ranges)))

    @classmethod
    def categorical(cls, categories, number_of_genes: int) -> "GeneSpec":
        """Categorical genome of given length over one shared label set."""
        return validate_spec(cls(CATEGORICAL, categories=tuple(categories),
                                 number_of_genes=int(number_of_genes)))

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    def range_widths(self) -> np.ndarray:
        """Per-gene range widths (numeric genomes only)."""
        return np.array([hi - lo for lo, hi in self.numeric_ranges])


def validate_spec(spec: GeneSpec) -> GeneSpec:
    """Check a GeneSpec and return it unchanged, or raise.

    Raises:
        MixedKindsError: both ranges and categories given, or kind
            inconsistent with the populated fields.
        ZeroGenesError: no genes declared.
        EmptyRangeError: some numeric range has lower >= upper.
        TooFewCategoriesError: fewer than two distinct labels.
    """
    if spec.numeric_ranges is not None and spec.categories is not None:
        raise MixedKindsError("genome cannot be both numeric and categorical")
    if spec.kind == NUMERIC:
        if spec.numeric_ranges is None:
            raise MixedKindsError("numeric genome needs numeric_ranges")
        if spec.number_of_genes < 1 or len(spec.numeric_ranges) < 1:
            raise ZeroGenesError("genome must have at least one gene")
        if len(spec.numeric_ranges) != spec.number_of_genes:
            raise ShapeMismatchError(
                "number_of_genes does not match the number of ranges")
        for lo, hi in spec.numeric_ranges:
            if not lo < hi:
                raise EmptyRangeError(f"empty gene range ({lo}, {hi})")
    elif spec.kind == CATEGORICAL:
        if spec.categories is None:
            raise MixedKindsError("categorical genome needs categories")
        if spec.number_of_genes < 1:
            raise ZeroGenesError("genome must have at least one gene")
        if len(set(spec.categories)) < 2:
            raise TooFewCategoriesError(
                "categorical genome needs at least two distinct labels")
    else:
        raise MixedKindsError(f"unknown genome kind {spec.kind!r}")
    return spec


@dataclass(eq=False)
class Individual:
    """One candidate solution. Compared by identity, not by value.

    fitness is None until the individual has been evaluated.
    penalized_fitness is the working fitness at the moment the individual
    was picked by diversity-enhanced selection; it is only meaningful
    within a single selection pass.
    """

    genes: np.ndarray
    fitness: float | None = None
    penalized_fitness: float | None = None

    def copy(self) -> "Individual":
        """Copy genes; the copy starts unevaluated."""
        return Individual(genes=self.genes.copy())


@dataclass
class Population:
    individuals: list[Individual]
    generation_index: int = 0

    def __len__(self) -> int:
        return len(self.individuals)

    def __iter__(self):
        return iter(self.individuals)

    def gene_matrix(self) -> np.ndarray:
        """Genes stacked row-wise, one row per individual."""
        return np.stack([ind.genes for ind in self.individuals])


def _as_genes(spec: GeneSpec, values) -> np.ndarray:
    """Coerce one gene vector to the array form used internally."""
    if spec.is_numeric:
        try:
            genes = np.asarray(values, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ShapeMismatchError(f"not a numeric gene vector: {exc}")
        if genes.shape != (spec.number_of_genes,):
            raise ShapeMismatchError(
                f"expected {spec.number_of_genes} genes, got shape {genes.shape}")
        return genes
    genes = np.empty(spec.number_of_genes, dtype=object)
    values = list(values)
    if len(values) != spec.number_of_genes:
        raise ShapeMismatchError(
            f"expected {spec.number_of_genes} genes, got {len(values)}")
    allowed = set(spec.categories)
    for k, label in enumerate(values):
        if label not in allowed:
            raise ShapeMismatchError(f"label {label!r} is not a known category")
        genes[k] = label
    return genes


def random_individual(spec: GeneSpec, rng: np.random.Generator) -> Individual:
    """Draw one individual uniformly from the space the spec describes.

    Numeric genes are uniform over their ranges, categorical genes uniform
    over the category set. The result is unevaluated.
    """
    if spec.is_numeric:
        lows = np.array([lo for lo, _ in spec.numeric_ranges])
        highs = np.array([hi for _, hi in spec.numeric_ranges])
        return Individual(genes=rng.uniform(lows, highs))
    picks = rng.integers(0, len(spec.categories), size=spec.number_of_genes)
    genes = np.empty(spec.number_of_genes, dtype=object)
    for k, p in enumerate(picks):
        genes[k] = spec.categories[p]
    return Individual(genes=genes)


def seed_population(spec: GeneSpec, size: int,
                    rng: np.random.Generator,
                    init_genes=None) -> Population:
    """Build generation zero.

    Provided init_genes vectors are used first (validated against the
    spec), then the remainder is drawn at random. Extra vectors beyond
    size are dropped with a warning.
    """
    validate_spec(spec)
    if size < 1:
        raise ValueError("population size must be positive")
    individuals: list[Individual] = []
    if init_genes is not None:
        init_genes = list(init_genes)
        if len(init_genes) > size:
            warnings.warn(
                f"{len(init_genes)} initial gene vectors for a population "
                f"of {size}; extra vectors are ignored")
            init_genes = init_genes[:size]
        for vec in init_genes:
            individuals.append(Individual(genes=_as_genes(spec, vec)))
    while len(individuals) < size:
        individuals.append(random_individual(spec, rng))
    return Population(individuals=individuals, generation_index=0)
