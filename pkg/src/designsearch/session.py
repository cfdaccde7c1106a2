"""Interactive search sessions: small populations rated by a human.

A session wraps one engine (EA on either encoding, or ACO) with a population
of 10 feasible candidates.  Each round the caller submits a 1..7 rating per
candidate; the session fuses each rating with the candidate's coupling score
into a fitness value and advances the engine one generation.  ACO sessions
additionally support freezing a class the user wants to keep.

Constraint handling is always direct here: a session never shows an
infeasible design.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass

import numpy as np

from .aco import AcoConfig, AcoEngine, freeze_class, unfreeze_class
from .ea import EaConfig, EaEngine, SelfAdaptiveMutation
from .fitness import coupling_fitness
from .problem import Design, DesignProblem

RATING_LEVELS = 7
DEFAULT_EVALUATION_CAP = 250
SESSION_POPULATION = 10

ENGINE_TAGS = ("ea-ng", "ea-xp", "aco")


class UnknownSessionError(KeyError):
    """No session with that id."""


class SessionConflictError(RuntimeError):
    """The session is exhausted, or another mutation is in flight."""


class InvalidRatingError(ValueError):
    """Ratings are incomplete, duplicated, or out of range."""


class UnsupportedOperationError(RuntimeError):
    """The operation does not apply to this session's engine."""


@dataclass(frozen=True)
class Rating:
    index: int
    level: int

    def __post_init__(self):
        if not (1 <= self.level <= RATING_LEVELS):
            raise InvalidRatingError(
                f"rating level must lie in 1..{RATING_LEVELS}"
            )


def rating_score(level: int) -> float:
    """Map a 1..7 level affinely onto the 0..100 fitness scale."""
    return 100.0 * (level - 1) / (RATING_LEVELS - 1)


def _build_engine(
    tag: str, problem: DesignProblem, seed: int
) -> EaEngine | AcoEngine:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if tag == "aco":
        cfg = AcoConfig(
            rho=1.0,
            colony_size=SESSION_POPULATION,
            constraint_mode="direct",
            feasibility_bias=True,
            use_link_boost=30.0,
            seed=seed,
        )
        return AcoEngine(problem, cfg, rng)
    if tag in ("ea-ng", "ea-xp"):
        encoding = tag.split("-", 1)[1]
        cfg = EaConfig(
            encoding=encoding,
            population_size=SESSION_POPULATION,
            crossover_operator="uniform" if encoding == "ng" else "order",
            mutation=SelfAdaptiveMutation(),
            constraint_mode="direct",
            seed=seed,
        )
        return EaEngine(problem, cfg, rng)
    raise ValueError(
        f"unknown engine {tag!r}; interactive sessions support {ENGINE_TAGS}"
    )


class DesignSession:
    """One interactive search session over a single problem."""

    def __init__(
        self,
        session_id: str,
        problem: DesignProblem,
        engine_tag: str,
        seed: int = 0,
        evaluation_cap: int = DEFAULT_EVALUATION_CAP,
        structural_weight: float = 0.8,
    ):
        if not (0.0 < structural_weight < 1.0):
            raise ValueError("structural weight must be strictly in (0, 1)")
        self.id = session_id
        self.problem = problem
        self.engine_tag = engine_tag
        self.seed = seed
        self.engine = _build_engine(engine_tag, problem, seed)
        self.evaluation_cap = evaluation_cap
        self.structural_weight = structural_weight
        self.generation = 0
        self.evaluations = 0
        self.status = "active"
        self.frozen: list[frozenset[int]] = []
        self.best_so_far: dict | None = None
        self.lock = threading.Lock()
        self.events: list[dict] = [
            {
                "type": "create",
                "problem": problem.name,
                "engine": engine_tag,
                "seed": seed,
                "evaluation_cap": evaluation_cap,
                "structural_weight": structural_weight,
            }
        ]

    @property
    def step_cost(self) -> int:
        """New candidates constructed per step: the EA keeps its elite."""
        if isinstance(self.engine, AcoEngine):
            return SESSION_POPULATION
        return SESSION_POPULATION - 1

    def _designs(self) -> list[Design]:
        return self.engine.designs(self.problem)

    def _render_classes(self, design: Design) -> list[dict]:
        a = self.problem.attribute_count
        return [
            {
                "attributes": sorted(
                    self.problem.element_name(i) for i in group if i < a
                ),
                "methods": sorted(
                    self.problem.element_name(i) for i in group if i >= a
                ),
            }
            for group in design.classes
        ]

    def population_view(self) -> list[dict]:
        """The current candidates, rendered with element names split into
        attribute and method compartments.

        Candidate indices are stable until the next step.
        """
        view = []
        for index, design in enumerate(self._designs()):
            view.append(
                {
                    "index": index,
                    "feasible": design.feasible,
                    "f_cbo": coupling_fitness(design, self.problem),
                    "classes": self._render_classes(design),
                }
            )
        return view

    def _refresh_status(self) -> None:
        if (
            self.status == "active"
            and self.evaluations + self.step_cost > self.evaluation_cap
        ):
            self.status = "exhausted"

    def submit_ratings(self, ratings: list[Rating]) -> dict:
        """Fuse ratings with coupling, advance one generation.

        Session fitness is ``w * f_cbo + (1 - w) * rating`` with the rating
        mapped onto 0..100, so for a fixed rating level ordering follows the
        coupling score, and for fixed coupling a higher rating never hurts.
        """
        if self.status != "active":
            raise SessionConflictError(f"session is {self.status}")
        by_index = {}
        for rating in ratings:
            if not (0 <= rating.index < SESSION_POPULATION):
                raise InvalidRatingError(f"no candidate {rating.index}")
            if rating.index in by_index:
                raise InvalidRatingError(f"candidate {rating.index} rated twice")
            by_index[rating.index] = rating
        if len(by_index) != SESSION_POPULATION:
            missing = sorted(set(range(SESSION_POPULATION)) - set(by_index))
            raise InvalidRatingError(f"missing ratings for candidates {missing}")

        designs = self._designs()
        w = self.structural_weight
        fitness = np.array(
            [
                w * coupling_fitness(designs[i], self.problem)
                + (1.0 - w) * rating_score(by_index[i].level)
                for i in range(SESSION_POPULATION)
            ]
        )
        best = int(np.argmax(fitness))
        if self.best_so_far is None or fitness[best] > self.best_so_far["fitness"]:
            self.best_so_far = {
                "fitness": float(fitness[best]),
                "f_cbo": coupling_fitness(designs[best], self.problem),
                "generation": self.generation,
                "classes": self._render_classes(designs[best]),
            }

        new_candidates = self.engine.advance(fitness)
        self.generation += 1
        self.evaluations += new_candidates
        if fitness[best] >= 100.0 - 1e-9:
            self.status = "completed"  # a perfectly rated, fully decoupled design
        self._refresh_status()
        self.events.append(
            {
                "type": "step",
                "levels": [by_index[i].level for i in range(SESSION_POPULATION)],
                "fitness": [float(f) for f in fitness],
            }
        )
        return self.summary()

    def freeze(self, candidate_index: int, class_index: int) -> dict:
        """Pin one class of one candidate so search keeps it together."""
        if not isinstance(self.engine, AcoEngine):
            raise UnsupportedOperationError(
                "freezing is unsupported for evolutionary sessions; "
                "it needs the ant colony engine"
            )
        designs = self._designs()
        if not (0 <= candidate_index < len(designs)):
            raise InvalidRatingError(f"no candidate {candidate_index}")
        design = designs[candidate_index]
        if not (0 <= class_index < len(design.classes)):
            raise InvalidRatingError(f"no class {class_index}")
        elements = design.classes[class_index]
        freeze_class(self.engine.pheromone, elements)
        self.frozen.append(frozenset(elements))
        self.events.append({"type": "freeze", "elements": sorted(elements)})
        return {"frozen": sorted(elements)}

    def unfreeze(self, elements) -> dict:
        if not isinstance(self.engine, AcoEngine):
            raise UnsupportedOperationError(
                "freezing is unsupported for evolutionary sessions; "
                "it needs the ant colony engine"
            )
        group = frozenset(int(i) for i in elements)
        try:
            unfreeze_class(self.engine.pheromone, group)
        except ValueError as exc:
            raise InvalidRatingError(str(exc)) from exc
        self.frozen = [f for f in self.frozen if f != group]
        self.events.append({"type": "unfreeze", "elements": sorted(group)})
        return {"unfrozen": sorted(group)}

    def frozen_view(self) -> list[dict]:
        return [
            {
                "elements": sorted(group),
                "names": sorted(self.problem.element_name(i) for i in group),
            }
            for group in self.frozen
        ]

    def summary(self) -> dict:
        return {
            "id": self.id,
            "problem": self.problem.name,
            "engine": self.engine_tag,
            "status": self.status,
            "generation": self.generation,
            "evaluations": self.evaluations,
            "evaluation_cap": self.evaluation_cap,
            "frozen_classes": self.frozen_view(),
            "best_so_far": self.best_so_far,
        }


class SessionManager:
    """Registry of live sessions over a fixed set of loaded problems."""

    def __init__(self, problems: dict[str, DesignProblem]):
        self.problems = dict(problems)
        self.sessions: dict[str, DesignSession] = {}

    def create(
        self,
        problem_name: str,
        engine_tag: str,
        seed: int = 0,
        evaluation_cap: int = DEFAULT_EVALUATION_CAP,
        structural_weight: float = 0.8,
    ) -> DesignSession:
        if problem_name not in self.problems:
            raise UnknownSessionError(f"unknown problem {problem_name!r}")
        session = DesignSession(
            session_id=secrets.token_hex(8),
            problem=self.problems[problem_name],
            engine_tag=engine_tag,
            seed=seed,
            evaluation_cap=evaluation_cap,
            structural_weight=structural_weight,
        )
        self.sessions[session.id] = session
        return session

    def get(self, session_id: str) -> DesignSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSessionError(f"unknown session {session_id!r}") from None


def replay_session(
    problems: dict[str, DesignProblem], events: list[dict]
) -> DesignSession:
    """Rebuild a session deterministically from its event log."""
    if not events or events[0]["type"] != "create":
        raise ValueError("event log must start with a create event")
    head = events[0]
    session = DesignSession(
        session_id="replay",
        problem=problems[head["problem"]],
        engine_tag=head["engine"],
        seed=head["seed"],
        evaluation_cap=head["evaluation_cap"],
        structural_weight=head["structural_weight"],
    )
    for event in events[1:]:
        if event["type"] == "step":
            session.submit_ratings(
                [Rating(i, level) for i, level in enumerate(event["levels"])]
            )
        elif event["type"] == "freeze":
            freeze_class(session.engine.pheromone, event["elements"])
            session.frozen.append(frozenset(event["elements"]))
            session.events.append(event)
        elif event["type"] == "unfreeze":
            session.unfreeze(event["elements"])
    return session
