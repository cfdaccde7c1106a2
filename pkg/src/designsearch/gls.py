"""Greedy local search: a (1+1) hill climber with systematic neighborhoods.

The climber scans the full neighborhood of the incumbent in a fixed order
(NG: loci ascending, alternative allele values ascending; XP: all 2-opt
segment reversals, pairs lexicographic) and accepts the first strict
improvement.  At a local optimum it restarts from a fresh random genotype,
keeping the best design found anywhere, until the evaluation budget runs out
or the target fitness is reached.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .encodings import NgGenotype, XpGenotype, decode
from .evaluation import EvalHook, LabelCodec, Objective, RunLedger
from .fitness import EleganceConfig
from .problem import DesignProblem
from .records import RunRecord, build_record

INIT_DRAW_LIMIT = 10**6


@dataclass(frozen=True)
class GlsConfig:
    encoding: str = "ng"
    budget: int = 10**6
    target_fitness: float = 100.0
    constraint_mode: str = "indirect"
    seed: int = 0
    elegance: EleganceConfig = field(default_factory=EleganceConfig)
    structural_weight: float = 0.8

    def __post_init__(self):
        if self.encoding not in ("ng", "xp"):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.constraint_mode not in ("indirect", "direct"):
            raise ValueError(f"unknown constraint mode {self.constraint_mode!r}")


def random_rows(
    encoding: str, codec: LabelCodec, rng: np.random.Generator, count: int
) -> np.ndarray:
    if encoding == "ng":
        return rng.integers(
            1, codec.class_count + 1, size=(count, codec.element_count)
        )
    base = np.tile(np.arange(codec.node_count), (count, 1))
    return rng.permuted(base, axis=1)


def random_feasible_row(
    encoding: str,
    codec: LabelCodec,
    rng: np.random.Generator,
    max_draws: int = INIT_DRAW_LIMIT,
) -> np.ndarray:
    """Rejection-sample a feasible genotype row (batched for speed).

    Feasibility checks are structural and do not count as evaluations.  For
    permutations, rows where two markers sit within two positions of each
    other (an empty or one-element class, so never feasible) are discarded
    before the full decode.
    """
    drawn = 0
    batch = 256
    while drawn < max_draws:
        rows = random_rows(encoding, codec, rng, batch)
        drawn += batch
        if encoding == "xp":
            is_marker = rows >= codec.element_count
            crowded = is_marker & (
                np.roll(is_marker, -1, axis=1) | np.roll(is_marker, -2, axis=1)
            )
            rows = rows[~crowded.any(axis=1)]
            if rows.shape[0] == 0:
                batch = min(65536, batch * 2)
                continue
        hits = np.nonzero(codec.feasible(codec.labels(encoding, rows)))[0]
        if hits.size:
            return rows[hits[0]]
        batch = min(65536, batch * 2)
    raise RuntimeError(
        f"no feasible genotype found in {max_draws} draws; "
        "the instance is over-constrained"
    )


def _neighbor_blocks(encoding: str, incumbent: np.ndarray, class_count: int):
    """Yield neighbor matrices in the fixed systematic scan order."""
    if encoding == "ng":
        d = len(incumbent)
        for locus in range(d):
            current = incumbent[locus]
            values = [v for v in range(1, class_count + 1) if v != current]
            block = np.tile(incumbent, (len(values), 1))
            block[:, locus] = values
            yield block
    else:
        n = len(incumbent)
        for i in range(n - 1):
            block = np.tile(incumbent, (n - 1 - i, 1))
            for row, j in enumerate(range(i + 1, n)):
                block[row, i : j + 1] = incumbent[i : j + 1][::-1]
            yield block


def run_gls(
    problem: DesignProblem,
    cfg: GlsConfig,
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
    best_row: np.ndarray | None = None

    while not ledger.finished:
        if cfg.constraint_mode == "direct":
            incumbent = random_feasible_row(cfg.encoding, codec, rng)
        else:
            incumbent = random_rows(cfg.encoding, codec, rng, 1)[0]
        labels = codec.labels(cfg.encoding, incumbent)
        feasible = codec.feasible(labels)
        scores = obj.score(labels, feasible)
        outcome = ledger.submit(scores, feasible)
        if outcome.accepted == 0:
            break
        if outcome.improved_row is not None:
            best_row = incumbent.copy()
        current_score = float(scores[0])

        climbing = True
        while climbing and not ledger.finished:
            climbing = False
            for block in _neighbor_blocks(cfg.encoding, incumbent, codec.class_count):
                labels = codec.labels(cfg.encoding, block)
                feasible = codec.feasible(labels)
                scores = obj.score(labels, feasible)
                better = np.nonzero(scores > current_score)[0]
                stop = int(better[0]) if better.size else None
                outcome = ledger.submit(scores, feasible, stop_after=stop)
                if outcome.improved_row is not None:
                    best_row = block[outcome.improved_row].copy()
                if stop is not None and outcome.accepted == stop + 1:
                    incumbent = block[stop]
                    current_score = float(scores[stop])
                    climbing = True
                    break
                if ledger.finished:
                    break

    genotype = (
        NgGenotype(best_row, codec.class_count)
        if cfg.encoding == "ng"
        else XpGenotype(best_row, codec.element_count)
    )
    return build_record(
        algorithm="gls",
        encoding=cfg.encoding,
        problem=problem,
        seed=cfg.seed,
        best_design=decode(genotype, problem),
        best_score=ledger.best_score,
        objective_tag=objective,
        elegance=cfg.elegance,
        aes=ledger.best_index,
        total_evaluations=ledger.evaluations,
        wall_time=time.perf_counter() - started,
    )
