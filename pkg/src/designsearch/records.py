"""Run outcome records shared by all engines."""

from __future__ import annotations

from dataclasses import dataclass

from .fitness import EleganceConfig, FitnessVector, evaluate_design
from .problem import Design, DesignProblem


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one seeded engine run.

    ``aes`` is the evaluation number (1-based) at which the best realized
    score was first reached; ``best`` holds the deterministic measure values
    of the best design, plus the realized blended score when that was the
    objective.
    """

    algorithm: str
    encoding: str
    problem: str
    seed: int
    best: FitnessVector
    best_design: Design
    aes: int
    total_evaluations: int
    wall_time: float

    def __post_init__(self):
        if not (0 < self.aes <= self.total_evaluations):
            raise ValueError("aes must lie in 1..total_evaluations")


def build_record(
    algorithm: str,
    encoding: str,
    problem: DesignProblem,
    seed: int,
    best_design: Design,
    best_score: float,
    objective_tag: str,
    elegance: EleganceConfig,
    aes: int,
    total_evaluations: int,
    wall_time: float,
) -> RunRecord:
    vector = evaluate_design(best_design, problem, elegance)
    if objective_tag == "mo":
        vector = FitnessVector(
            f_cbo=vector.f_cbo,
            f_nac=vector.f_nac,
            f_atmr=vector.f_atmr,
            f_mo=best_score,
            infeasible_zeroed=vector.infeasible_zeroed,
        )
    return RunRecord(
        algorithm=algorithm,
        encoding=encoding,
        problem=problem.name,
        seed=seed,
        best=vector,
        best_design=best_design,
        aes=aes,
        total_evaluations=total_evaluations,
        wall_time=wall_time,
    )
