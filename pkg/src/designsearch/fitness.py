"""Fitness measures for candidate designs.

Three measures, all maximized on a 0..100 scale:

* ``coupling_fitness`` scores the fraction of method/attribute uses kept
  inside class boundaries.
* ``nac_fitness`` scores how evenly elements are spread over classes
  (population standard deviation of per-class element counts).
* ``atmr_fitness`` scores how even the attribute-to-method ratio is across
  classes.

``mo_fitness`` blends the three with a randomly drawn weight split, which
models the noise of a human rating the non-structural qualities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import Design, DesignProblem


class FitnessError(ValueError):
    """A fitness measure was applied to inputs it is undefined for."""


class UndefinedRatioError(FitnessError):
    """A class without methods has no attribute-to-method ratio."""


@dataclass(frozen=True)
class EleganceConfig:
    """Scaling for the two evenness measures.

    ``scale`` is the standard deviation that maps to a score of 0.  With
    ``clamp`` off (the default) larger deviations go negative; with it on the
    deviation is truncated so scores stay in [0, 100].
    """

    scale: float = 6.0
    clamp: bool = False

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def score(self, deviation: float) -> float:
        if self.clamp:
            deviation = min(deviation, self.scale)
        return 100.0 * (self.scale - deviation) / self.scale


@dataclass(frozen=True)
class MoWeights:
    """One realized weight split of the blended objective."""

    cbo: float
    nac: float
    atmr: float

    def __post_init__(self):
        if abs(self.cbo + self.nac + self.atmr - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")


@dataclass(frozen=True)
class FitnessVector:
    """All measure values for one design; zeroed when scored infeasible."""

    f_cbo: float
    f_nac: float
    f_atmr: float
    f_mo: float | None = None
    infeasible_zeroed: bool = False


def coupling_fitness(design: Design, problem: DesignProblem) -> float:
    """100 minus the percentage of uses that cross class boundaries."""
    if problem.use_count == 0:
        raise FitnessError("coupling is undefined for an instance with no uses")
    label = {}
    for k, group in enumerate(design.classes):
        for i in group:
            label[i] = k
    a = problem.attribute_count
    cross = sum(1 for mi, ai in problem.uses if label[a + mi] != label[ai])
    return (1.0 - cross / problem.use_count) * 100.0


def nac_fitness(design: Design, config: EleganceConfig = EleganceConfig()) -> float:
    """Evenness of per-class element counts, 100 when all classes equal."""
    deviation = float(np.std(design.class_sizes()))
    return config.score(deviation)


def atmr_fitness(design: Design, config: EleganceConfig = EleganceConfig()) -> float:
    """Evenness of per-class attribute-to-method ratios."""
    methods = design.methods_per_class()
    if any(m == 0 for m in methods):
        raise UndefinedRatioError(
            "a class without methods has no attribute-to-method ratio"
        )
    ratios = [a / m for a, m in zip(design.attributes_per_class(), methods)]
    return config.score(float(np.std(ratios)))


def mo_fitness(
    design: Design,
    problem: DesignProblem,
    rng: np.random.Generator,
    structural_weight: float = 0.8,
    config: EleganceConfig = EleganceConfig(),
) -> tuple[float, MoWeights]:
    """Blend the three measures with a freshly sampled weight split.

    The coupling weight is fixed; the remaining mass is split between the two
    evenness measures by drawing the first share uniformly.  Only feasible
    designs may be scored (the blended objective is used where infeasible
    candidates are regenerated rather than penalized).
    """
    if not (0.0 < structural_weight < 1.0):
        raise FitnessError("structural weight must be strictly between 0 and 1")
    if not design.feasible:
        raise FitnessError("the blended objective only scores feasible designs")
    b = float(rng.uniform(0.0, 1.0 - structural_weight))
    weights = MoWeights(
        cbo=structural_weight, nac=b, atmr=1.0 - structural_weight - b
    )
    value = (
        weights.cbo * coupling_fitness(design, problem)
        + weights.nac * nac_fitness(design, config)
        + weights.atmr * atmr_fitness(design, config)
    )
    return value, weights


def evaluate_design(
    design: Design,
    problem: DesignProblem,
    config: EleganceConfig = EleganceConfig(),
) -> FitnessVector:
    """All deterministic measures for one design; zeroed when infeasible."""
    if not design.feasible:
        return FitnessVector(0.0, 0.0, 0.0, f_mo=None, infeasible_zeroed=True)
    return FitnessVector(
        f_cbo=coupling_fitness(design, problem),
        f_nac=nac_fitness(design, config),
        f_atmr=atmr_fitness(design, config),
    )
