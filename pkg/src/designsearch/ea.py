"""Generational evolutionary algorithm with tournament selection and elitism.

Each generation the single best member is copied unchanged into the next
population; the remaining slots are filled by tournament-selected parents,
crossover applied per offspring pair with probability ``crossover_prob``, and
mutation (a fixed rate, or a self-adaptive rate carried on the genotype).

Constraint handling is either indirect (infeasible offspring score 0.0) or
direct (offspring are regenerated from the same parents with fresh randomness
until feasible; feasibility checks are structural and free).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .encodings import (
    NG_OPERATORS,
    XP_OPERATORS,
    Genotype,
    NgGenotype,
    RateSet,
    XpGenotype,
    crossover,
    decode,
    mutate_ng,
    mutate_xp,
    self_adapt_mutate,
)
from .evaluation import EvalHook, LabelCodec, Objective, RunLedger
from .fitness import EleganceConfig
from .gls import random_feasible_row, random_rows
from .problem import Design, DesignProblem
from .records import RunRecord, build_record

REGENERATION_LIMIT = 10**6


@dataclass(frozen=True)
class FixedMutation:
    """Fixed mutation probability: per locus for NG, per genotype for XP."""

    rate: float

    def __post_init__(self):
        if not (0.0 < self.rate <= 1.0):
            raise ValueError("mutation rate must lie in (0, 1]")


@dataclass(frozen=True)
class SelfAdaptiveMutation:
    """Rate carried as an extra gene on each genotype."""

    rates: RateSet = field(default_factory=RateSet)


@dataclass(frozen=True)
class EaConfig:
    encoding: str = "ng"
    population_size: int = 25
    tournament_size: int = 2
    crossover_operator: str = "uniform"
    crossover_prob: float = 0.6
    mutation: FixedMutation | SelfAdaptiveMutation = field(
        default_factory=SelfAdaptiveMutation
    )
    constraint_mode: str = "indirect"
    budget: int = 10**6
    target_fitness: float = 100.0
    seed: int = 0
    elegance: EleganceConfig = field(default_factory=EleganceConfig)
    structural_weight: float = 0.8

    def __post_init__(self):
        if self.encoding not in ("ng", "xp"):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        valid = NG_OPERATORS if self.encoding == "ng" else XP_OPERATORS
        if self.crossover_operator not in valid:
            raise ValueError(
                f"crossover {self.crossover_operator!r} does not apply to "
                f"{self.encoding} genotypes"
            )
        if self.population_size < 2:
            raise ValueError("population size must be at least 2")
        if self.tournament_size < 1:
            raise ValueError("tournament size must be at least 1")
        if not (0.0 <= self.crossover_prob <= 1.0):
            raise ValueError("crossover probability must lie in [0, 1]")
        if self.constraint_mode not in ("indirect", "direct"):
            raise ValueError(f"unknown constraint mode {self.constraint_mode!r}")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")


def tournament_select(
    fitness: np.ndarray, k: int, rng: np.random.Generator
) -> int:
    """Index of the fittest of ``k`` members drawn uniformly with replacement;
    ties go to the lowest population index."""
    fitness = np.asarray(fitness)
    if k == 2:
        i, j = rng.integers(len(fitness), size=2)
        fi, fj = fitness[i], fitness[j]
        if fi == fj:
            return int(min(i, j))
        return int(i if fi > fj else j)
    drawn = rng.integers(len(fitness), size=k)
    values = fitness[drawn]
    return int(drawn[values == values.max()].min())


class EaEngine:
    """Stepwise EA core: callers evaluate the population, the engine breeds.

    ``pending_start`` marks the first member of the current population that
    still needs scoring (the elite's score is cached between generations in
    deterministic-objective mode).
    """

    def __init__(
        self,
        problem: DesignProblem,
        cfg: EaConfig,
        rng: np.random.Generator,
        reevaluate_elite: bool = False,
    ):
        self.cfg = cfg
        self.codec = LabelCodec(problem)
        self.rng = rng
        self.reevaluate_elite = reevaluate_elite
        self._rate_set = (
            cfg.mutation.rates
            if isinstance(cfg.mutation, SelfAdaptiveMutation)
            else None
        )
        self.population: list[Genotype] = [
            self._random_member() for _ in range(cfg.population_size)
        ]
        self.pending_start = 0
        self._elite_fitness: float | None = None

    def _random_member(self) -> Genotype:
        gene = (
            int(self.rng.integers(len(self._rate_set.rates)))
            if self._rate_set is not None
            else None
        )
        if self.cfg.constraint_mode == "direct":
            row = random_feasible_row(self.cfg.encoding, self.codec, self.rng)
        else:
            row = random_rows(self.cfg.encoding, self.codec, self.rng, 1)[0]
        if self.cfg.encoding == "ng":
            return NgGenotype(row, self.codec.class_count, gene)
        return XpGenotype(row, self.codec.element_count, gene)

    def pending_rows(self) -> np.ndarray:
        return np.stack(
            [self._row(g) for g in self.population[self.pending_start :]]
        )

    @staticmethod
    def _row(genotype: Genotype) -> np.ndarray:
        return (
            genotype.alleles
            if isinstance(genotype, NgGenotype)
            else genotype.perm
        )

    def merge_fitness(self, new_scores: np.ndarray) -> np.ndarray:
        """Realized fitness for the whole population, cached elite included."""
        if self.pending_start == 0:
            return np.asarray(new_scores, dtype=float)
        return np.concatenate([[self._elite_fitness], new_scores])

    def _feasible(self, genotype: Genotype) -> bool:
        labels = self.codec.labels(self.cfg.encoding, self._row(genotype))
        return bool(self.codec.feasible(labels)[0])

    def _mutate(self, genotype: Genotype) -> Genotype:
        mutation = self.cfg.mutation
        if isinstance(mutation, SelfAdaptiveMutation):
            return self_adapt_mutate(genotype, mutation.rates, self.rng)
        if isinstance(genotype, NgGenotype):
            return mutate_ng(genotype, mutation.rate, self.rng)
        if self.rng.random() < mutation.rate:
            return mutate_xp(genotype, self.rng)
        return genotype.copy()

    def _breed_pair(self, p1: Genotype, p2: Genotype) -> tuple[Genotype, Genotype]:
        if self.rng.random() < self.cfg.crossover_prob:
            c1, c2 = crossover(p1, p2, self.cfg.crossover_operator, self.rng)
        else:
            c1, c2 = p1.copy(), p2.copy()
        return self._mutate(c1), self._mutate(c2)

    def advance(self, fitness: np.ndarray) -> int:
        """Breed the next generation from realized fitness values.

        Returns the number of newly constructed members (population size minus
        the elite copy).
        """
        fitness = np.asarray(fitness, dtype=float)
        if len(fitness) != len(self.population):
            raise ValueError("need one fitness value per population member")
        elite = int(np.argmax(fitness))
        next_population = [self.population[elite].copy()]
        self._elite_fitness = float(fitness[elite])

        direct = self.cfg.constraint_mode == "direct"
        while len(next_population) < self.cfg.population_size:
            i = tournament_select(fitness, self.cfg.tournament_size, self.rng)
            j = tournament_select(fitness, self.cfg.tournament_size, self.rng)
            parents = (self.population[i], self.population[j])
            children = self._breed_pair(*parents)
            for slot in (0, 1):
                if len(next_population) == self.cfg.population_size:
                    break
                child = children[slot]
                if direct:
                    retries = 0
                    while not self._feasible(child):
                        retries += 1
                        if retries > REGENERATION_LIMIT:
                            raise RuntimeError(
                                "offspring regeneration failed "
                                f"{REGENERATION_LIMIT} times in a row"
                            )
                        child = self._breed_pair(*parents)[slot]
                next_population.append(child)

        self.population = next_population
        self.pending_start = 0 if self.reevaluate_elite else 1
        return self.cfg.population_size - 1

    def designs(self, problem: DesignProblem) -> list[Design]:
        return [decode(g, problem) for g in self.population]


def run_ea(
    problem: DesignProblem,
    cfg: EaConfig,
    objective: str = "cbo",
    eval_hook: EvalHook | None = None,
) -> RunRecord:
    started = time.perf_counter()
    if objective == "mo" and cfg.constraint_mode != "direct":
        raise ValueError("the blended objective requires direct constraint handling")
    streams = np.random.SeedSequence(cfg.seed).spawn(2)
    rng = np.random.default_rng(streams[0])
    noisy = objective == "mo"
    engine = EaEngine(problem, cfg, rng, reevaluate_elite=noisy)
    obj = Objective(
        engine.codec,
        objective,
        cfg.elegance,
        cfg.structural_weight,
        np.random.default_rng(streams[1]) if noisy else None,
    )
    ledger = RunLedger(cfg.budget, cfg.target_fitness, eval_hook)
    best_genotype: Genotype | None = None

    while True:
        rows = engine.pending_rows()
        labels = engine.codec.labels(cfg.encoding, rows)
        feasible = engine.codec.feasible(labels)
        scores = obj.score(labels, feasible)
        outcome = ledger.submit(scores, feasible)
        if outcome.improved_row is not None:
            best_genotype = engine.population[
                engine.pending_start + outcome.improved_row
            ].copy()
        if outcome.finished:
            break
        engine.advance(engine.merge_fitness(scores))

    return build_record(
        algorithm="ea",
        encoding=cfg.encoding,
        problem=problem,
        seed=cfg.seed,
        best_design=decode(best_genotype, problem),
        best_score=ledger.best_score,
        objective_tag=objective,
        elegance=cfg.elegance,
        aes=ledger.best_index,
        total_evaluations=ledger.evaluations,
        wall_time=time.perf_counter() - started,
    )
