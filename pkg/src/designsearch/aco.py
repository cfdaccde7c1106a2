"""Ant colony optimization over the extended-permutation node graph.

Ants build trails over all element and marker nodes, picking each next node
with probability proportional to the pheromone on the link raised to
``alpha``.  Trails decode cyclically into designs.  After every colony
iteration the pheromone evaporates at rate ``rho`` and each evaluated trail
deposits ``mu * fitness / 100`` on every link it traversed (the cyclic
closing link included).

A class can be frozen by pinning all of its internal links at an arbitrarily
high value, which keeps those elements together in subsequently constructed
trails.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .encodings import XpGenotype, decode
from .evaluation import EvalHook, LabelCodec, Objective, RunLedger
from .fitness import EleganceConfig
from .problem import Design, DesignProblem
from .records import RunRecord, build_record

CONSTRUCTION_LIMIT = 10**6


@dataclass(frozen=True)
class AcoConfig:
    alpha: float = 1.5
    mu: float = 3.0
    rho: float = 0.1
    colony_size: int = 25
    regeneration_cap: int = 50
    tau0: float = 1.0
    tau_high: float = 1e6
    feasibility_bias: bool = False
    use_link_boost: float = 1.0
    constraint_mode: str = "indirect"
    budget: int = 10**6
    target_fitness: float = 100.0
    seed: int = 0
    elegance: EleganceConfig = field(default_factory=EleganceConfig)
    structural_weight: float = 0.8

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.mu < 0:
            raise ValueError("mu must be non-negative")
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError("rho must lie in [0, 1]")
        if self.colony_size < 1:
            raise ValueError("colony size must be at least 1")
        if self.regeneration_cap < 1:
            raise ValueError("regeneration cap must be at least 1")
        if self.tau0 <= 0 or self.tau_high <= 0:
            raise ValueError("pheromone levels must be positive")
        if self.use_link_boost < 1.0:
            raise ValueError("use link boost must be at least 1")
        if self.constraint_mode not in ("indirect", "direct"):
            raise ValueError(f"unknown constraint mode {self.constraint_mode!r}")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")


class PheromoneMatrix:
    """Symmetric trail strengths over element and marker nodes.

    Initialization is uniform at ``tau0`` by default; ``use_link_boost`` > 1
    seeds the links between each method and the attributes it uses at
    ``tau0 * boost``, which steers early construction toward low-coupling
    groupings when the evaluation budget is small.
    """

    def __init__(
        self,
        problem: DesignProblem,
        tau0: float = 1.0,
        use_link_boost: float = 1.0,
    ):
        self.element_count = problem.element_count
        self.class_count = problem.class_count
        self.attribute_count = problem.attribute_count
        self.node_count = problem.element_count + problem.class_count
        self.tau0 = float(tau0)
        self.tau = np.full((self.node_count, self.node_count), float(tau0))
        if use_link_boost != 1.0:
            for mi, ai in problem.uses:
                self.tau[problem.attribute_count + mi, ai] = tau0 * use_link_boost
                self.tau[ai, problem.attribute_count + mi] = tau0 * use_link_boost
        np.fill_diagonal(self.tau, 0.0)
        self.frozen_pairs: dict[tuple[int, int], float] = {}
        self._frozen_classes: dict[frozenset, int] = {}  # insertion-ordered set

    def reapply_frozen(self) -> None:
        for (i, j), value in self.frozen_pairs.items():
            self.tau[i, j] = value
            self.tau[j, i] = value

    def frozen_class_sets(self) -> list[frozenset]:
        return list(self._frozen_classes)


class _FeasibilityGuide:
    """Marker gating for constrained construction.

    Tracks what the walk has placed so far and vetoes end-of-class markers
    whenever taking one would close a class that lacks an attribute or a
    method, or would leave too few unvisited elements to feed the classes
    still to be opened.  The run of elements before the first marker belongs
    to the final (wrap-around) class, so its needs are deferred.
    """

    def __init__(self, pher: PheromoneMatrix):
        self.attribute_count = pher.attribute_count
        self.element_count = pher.element_count
        self.attrs_left = pher.attribute_count
        self.methods_left = pher.element_count - pher.attribute_count
        self.markers_left = pher.class_count
        self.markers_done = 0
        self.prefix_has_attr = False
        self.prefix_has_method = False
        self.segment_has_attr = False
        self.segment_has_method = False
        # members of frozen classes are never gated: their placement is
        # dictated by the pinned links, and vetoing one mid-clique would
        # force the walk out of the class it is supposed to keep together
        self.ungated = np.zeros(pher.node_count, dtype=bool)
        for group in pher.frozen_class_sets():
            for i in group:
                self.ungated[i] = True

    def visit(self, node: int) -> None:
        if node >= self.element_count:
            self.markers_done += 1
            self.markers_left -= 1
            self.segment_has_attr = False
            self.segment_has_method = False
        elif node < self.attribute_count:
            self.attrs_left -= 1
            if self.markers_done == 0:
                self.prefix_has_attr = True
            else:
                self.segment_has_attr = True
        else:
            self.methods_left -= 1
            if self.markers_done == 0:
                self.prefix_has_method = True
            else:
                self.segment_has_method = True

    def marker_allowed(self) -> bool:
        if self.markers_left == 0:
            return False
        if self.markers_done >= 1 and not (
            self.segment_has_attr and self.segment_has_method
        ):
            return False
        future_segments = self.markers_left - 1
        need_attrs = future_segments + (0 if self.prefix_has_attr else 1)
        need_methods = future_segments + (0 if self.prefix_has_method else 1)
        return self.attrs_left >= need_attrs and self.methods_left >= need_methods

    def _current_has(self, attr: bool) -> bool:
        if self.markers_done == 0:
            return self.prefix_has_attr if attr else self.prefix_has_method
        return self.segment_has_attr if attr else self.segment_has_method

    def _element_allowed(self, attr: bool) -> bool:
        # Picking a redundant element is vetoed when every remaining one of
        # its kind is needed by a class still lacking it.
        if self.markers_left == 0:
            return True
        if not self._current_has(attr):
            return True
        outstanding = self.markers_left - 1
        if self.markers_done >= 1:
            outstanding += 0 if (self.prefix_has_attr if attr else self.prefix_has_method) else 1
        left = self.attrs_left if attr else self.methods_left
        return left - 1 >= outstanding

    def apply(self, weights: np.ndarray) -> None:
        if not self.marker_allowed():
            weights[self.element_count :] = 0.0
        if not self._element_allowed(attr=True):
            gated = ~self.ungated[: self.attribute_count]
            weights[: self.attribute_count][gated] = 0.0
        if not self._element_allowed(attr=False):
            gated = ~self.ungated[self.attribute_count : self.element_count]
            weights[self.attribute_count : self.element_count][gated] = 0.0


def construct_trail(
    pher: PheromoneMatrix,
    alpha: float,
    rng: np.random.Generator,
    feasibility_bias: bool = False,
    _tau_pow: np.ndarray | None = None,
) -> XpGenotype:
    """Build one trail: start at a uniform random node, then repeatedly draw
    the next node from the unvisited ones with probability proportional to
    ``tau[current, next] ** alpha``.  Rows wiped by full evaporation fall back
    to a uniform choice.

    With ``feasibility_bias`` the trail attractiveness is combined with a
    constraint heuristic that suppresses markers which would close a
    deficient class, steering construction toward feasible designs on
    instances where those are rare.
    """
    n = pher.node_count
    tau_pow = pher.tau**alpha if _tau_pow is None else _tau_pow
    guide = _FeasibilityGuide(pher) if feasibility_bias else None
    trail = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    current = int(rng.integers(n))
    trail[0] = current
    visited[current] = True
    if guide is not None:
        guide.visit(current)
    for step in range(1, n):
        weights = np.where(visited, 0.0, tau_pow[current])
        if guide is not None:
            guide.apply(weights)
        total = weights.sum()
        if not np.isfinite(total) or total <= 0.0:
            open_nodes = np.flatnonzero(~visited)
            current = int(open_nodes[rng.integers(open_nodes.size)])
        else:
            draw = rng.random() * total
            current = int(np.searchsorted(np.cumsum(weights), draw, side="right"))
            if current >= n or visited[current]:  # float-precision edge
                open_nodes = np.flatnonzero(~visited)
                current = int(open_nodes[rng.integers(open_nodes.size)])
        trail[step] = current
        visited[current] = True
        if guide is not None:
            guide.visit(current)
    return XpGenotype(trail, pher.element_count)


def update_pheromone(
    pher: PheromoneMatrix,
    evaluated_trails: list[tuple[XpGenotype, float]],
    mu: float,
    rho: float,
) -> PheromoneMatrix:
    """Evaporate every link, then deposit along each trail in proportion to
    its fitness on the 0..100 scale.  Frozen pairs are re-pinned afterwards.
    Negative fitness values (possible with unclamped elegance) deposit
    nothing, so no entry ever goes negative."""
    if not (0.0 <= rho <= 1.0):
        raise ValueError("rho must lie in [0, 1]")
    if mu < 0:
        raise ValueError("mu must be non-negative")
    pher.tau *= 1.0 - rho
    for trail, fitness in evaluated_trails:
        amount = mu * max(float(fitness), 0.0) / 100.0
        if amount == 0.0:
            continue
        nodes = trail.perm
        following = np.roll(nodes, -1)
        pher.tau[nodes, following] += amount
        pher.tau[following, nodes] += amount
    pher.reapply_frozen()
    return pher


def freeze_class(
    pher: PheromoneMatrix,
    class_elements,
    tau_high: float = 1e6,
) -> PheromoneMatrix:
    """Pin a feasible class: every link inside it is held at ``tau_high``.

    A walk that touches any pinned element then exhausts the whole clique
    before anything else becomes attractive, so the elements stay contiguous
    in the trail and land in one decoded class.  (Pinning a link to a marker
    node as well was tried and rejected: it competes with the intra-class
    links and lets the walk close the class early.)
    """
    elements = frozenset(int(i) for i in class_elements)
    if len(elements) < 2 or max(elements) >= pher.element_count or min(elements) < 0:
        raise ValueError("class elements out of range")
    a = pher.attribute_count
    if not (any(i < a for i in elements) and any(i >= a for i in elements)):
        raise ValueError("only a feasible class (attribute + method) can be frozen")
    pher._frozen_classes.setdefault(elements, len(pher._frozen_classes))
    ordered = sorted(elements)
    for k, i in enumerate(ordered):
        for j in ordered[k + 1 :]:
            pher.frozen_pairs[(i, j)] = float(tau_high)
    pher.reapply_frozen()
    return pher


def unfreeze_class(pher: PheromoneMatrix, class_elements) -> PheromoneMatrix:
    """Release a frozen class and restore its links to the initial level."""
    elements = frozenset(int(i) for i in class_elements)
    if elements not in pher._frozen_classes:
        raise ValueError("that class is not frozen")
    del pher._frozen_classes[elements]
    ordered = sorted(elements)
    for k, i in enumerate(ordered):
        for j in ordered[k + 1 :]:
            pher.frozen_pairs.pop((i, j), None)
            pher.tau[i, j] = pher.tau0
            pher.tau[j, i] = pher.tau0
    return pher


class AcoEngine:
    """Stepwise ACO core for interactive sessions: the colony is rebuilt after
    each externally scored iteration, and construction repeats until feasible
    (sessions never show infeasible designs)."""

    def __init__(
        self,
        problem: DesignProblem,
        cfg: AcoConfig,
        rng: np.random.Generator,
    ):
        self.cfg = cfg
        self.codec = LabelCodec(problem)
        self.rng = rng
        self.pheromone = PheromoneMatrix(problem, cfg.tau0, cfg.use_link_boost)
        self.population: list[XpGenotype] = []
        self._construct_colony()

    def _feasible(self, trail: XpGenotype) -> bool:
        return bool(self.codec.feasible(self.codec.xp_labels(trail.perm))[0])

    def _construct_colony(self) -> None:
        tau_pow = self.pheromone.tau**self.cfg.alpha
        colony = []
        for _ in range(self.cfg.colony_size):
            for _attempt in range(CONSTRUCTION_LIMIT):
                trail = construct_trail(
                    self.pheromone,
                    self.cfg.alpha,
                    self.rng,
                    feasibility_bias=self.cfg.feasibility_bias,
                    _tau_pow=tau_pow,
                )
                if self._feasible(trail):
                    break
            else:
                raise RuntimeError(
                    f"no feasible trail constructed in {CONSTRUCTION_LIMIT} attempts"
                )
            colony.append(trail)
        self.population = colony

    def advance(self, fitness: np.ndarray) -> int:
        """Deposit with the provided realized fitness values, then construct
        the next colony.  Returns the number of new candidates."""
        fitness = np.asarray(fitness, dtype=float)
        if len(fitness) != len(self.population):
            raise ValueError("need one fitness value per colony member")
        update_pheromone(
            self.pheromone,
            list(zip(self.population, fitness)),
            self.cfg.mu,
            self.cfg.rho,
        )
        self._construct_colony()
        return self.cfg.colony_size

    def designs(self, problem: DesignProblem) -> list[Design]:
        return [decode(t, problem) for t in self.population]


def run_aco(
    problem: DesignProblem,
    cfg: AcoConfig,
    objective: str = "cbo",
    eval_hook: EvalHook | None = None,
) -> RunRecord:
    started = time.perf_counter()
    if objective == "mo" and cfg.constraint_mode != "direct":
        raise ValueError("the blended objective requires direct constraint handling")
    codec = LabelCodec(problem)
    streams = np.random.SeedSequence(cfg.seed).spawn(2)
    rng = np.random.default_rng(streams[0])
    obj = Objective(
        codec,
        objective,
        cfg.elegance,
        cfg.structural_weight,
        np.random.default_rng(streams[1]) if objective == "mo" else None,
    )
    ledger = RunLedger(cfg.budget, cfg.target_fitness, eval_hook)
    pher = PheromoneMatrix(problem, cfg.tau0, cfg.use_link_boost)
    direct = cfg.constraint_mode == "direct"
    best_trail: XpGenotype | None = None

    while not ledger.finished:
        count = min(cfg.colony_size, ledger.remaining)
        tau_pow = pher.tau**cfg.alpha
        trails = []
        for _ in range(count):
            trail = construct_trail(
                pher, cfg.alpha, rng, cfg.feasibility_bias, _tau_pow=tau_pow
            )
            if direct:
                for _attempt in range(cfg.regeneration_cap - 1):
                    if codec.feasible(codec.xp_labels(trail.perm))[0]:
                        break
                    trail = construct_trail(
                        pher, cfg.alpha, rng, cfg.feasibility_bias, _tau_pow=tau_pow
                    )
            trails.append(trail)
        rows = np.stack([t.perm for t in trails])
        labels = codec.xp_labels(rows)
        feasible = codec.feasible(labels)
        scores = obj.score(labels, feasible)
        outcome = ledger.submit(scores, feasible)
        if outcome.improved_row is not None:
            best_trail = trails[outcome.improved_row].copy()
        if outcome.finished:
            break
        update_pheromone(pher, list(zip(trails, scores)), cfg.mu, cfg.rho)

    return build_record(
        algorithm="aco",
        encoding="xp",
        problem=problem,
        seed=cfg.seed,
        best_design=decode(best_trail, problem),
        best_score=ledger.best_score,
        objective_tag=objective,
        elegance=cfg.elegance,
        aes=ledger.best_index,
        total_evaluations=ledger.evaluations,
        wall_time=time.perf_counter() - started,
    )
