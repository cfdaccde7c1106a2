"""Batch evaluation machinery shared by the search engines.

Engines work on matrices of genotypes (one row per candidate) so that
decoding, feasibility checking, and scoring stay vectorized.  ``LabelCodec``
turns genotype rows into class-label rows, ``Objective`` scores label
batches, and ``RunLedger`` does the budget, target, and first-discovery
bookkeeping that every engine shares.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fitness import EleganceConfig
from .problem import DesignProblem

# hook signature: (evaluation index starting at 1, feasible, realized score)
EvalHook = Callable[[int, bool, float], None]

OBJECTIVE_TAGS = ("cbo", "nac", "atmr", "mo")


class LabelCodec:
    """Per-problem decoding of genotype matrices to class-label matrices.

    A label row assigns each element (attributes first, then methods) a class
    index ``0..c-1``.
    """

    def __init__(self, problem: DesignProblem):
        self.problem = problem
        self.element_count = problem.element_count
        self.class_count = problem.class_count
        self.attribute_count = problem.attribute_count
        self.node_count = problem.element_count + problem.class_count
        uses = np.asarray(problem.uses, dtype=np.int64).reshape(-1, 2)
        self._use_method_col = problem.attribute_count + uses[:, 0]
        self._use_attr_col = uses[:, 1]

    def ng_labels(self, alleles: np.ndarray) -> np.ndarray:
        return np.asarray(alleles) - 1

    def xp_labels(self, perms: np.ndarray) -> np.ndarray:
        """Cyclic decode of permutation rows: the run of elements after each
        marker (values >= element_count) forms one class."""
        perms = np.atleast_2d(perms)
        rows, n = perms.shape
        e = self.element_count
        is_marker = perms >= e
        first = np.argmax(is_marker, axis=1)
        shift = (np.arange(n)[None, :] + first[:, None] + 1) % n
        rolled = np.take_along_axis(perms, shift, axis=1)
        rolled_marker = rolled >= e
        segment = np.cumsum(rolled_marker, axis=1)
        element_mask = ~rolled_marker
        labels = np.empty((rows, e), dtype=np.int64)
        row_index = np.nonzero(element_mask)[0]
        labels.reshape(-1)[row_index * e + rolled[element_mask]] = segment[
            element_mask
        ]
        return labels

    def labels(self, encoding: str, matrix: np.ndarray) -> np.ndarray:
        matrix = np.atleast_2d(matrix)
        return self.ng_labels(matrix) if encoding == "ng" else self.xp_labels(matrix)

    def feasible(self, labels: np.ndarray) -> np.ndarray:
        """One-attribute-one-method check for every class, per row."""
        labels = np.atleast_2d(labels)
        a = self.attribute_count
        ok = np.ones(labels.shape[0], dtype=bool)
        attrs, methods = labels[:, :a], labels[:, a:]
        for k in range(self.class_count):
            ok &= (attrs == k).any(axis=1) & (methods == k).any(axis=1)
        return ok

    def coupling_scores(self, labels: np.ndarray) -> np.ndarray:
        labels = np.atleast_2d(labels)
        if self._use_attr_col.size == 0:
            raise ValueError("coupling is undefined for an instance with no uses")
        cross = (
            labels[:, self._use_method_col] != labels[:, self._use_attr_col]
        ).sum(axis=1)
        return (1.0 - cross / self._use_attr_col.size) * 100.0

    def class_sizes(self, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(attribute counts, method counts) per class, shape (rows, c)."""
        labels = np.atleast_2d(labels)
        a = self.attribute_count
        rows = labels.shape[0]
        attr_counts = np.empty((rows, self.class_count), dtype=np.int64)
        method_counts = np.empty((rows, self.class_count), dtype=np.int64)
        attrs, methods = labels[:, :a], labels[:, a:]
        for k in range(self.class_count):
            attr_counts[:, k] = (attrs == k).sum(axis=1)
            method_counts[:, k] = (methods == k).sum(axis=1)
        return attr_counts, method_counts


class Objective:
    """Scores label batches for one objective tag.

    Infeasible rows always score 0.0.  The ``mo`` tag draws a fresh weight
    split per evaluated row from a dedicated random stream, in evaluation
    order, so a run's noisy scores are reproducible from its seed.
    """

    def __init__(
        self,
        codec: LabelCodec,
        tag: str = "cbo",
        elegance: EleganceConfig = EleganceConfig(),
        structural_weight: float = 0.8,
        weights_rng: np.random.Generator | None = None,
    ):
        if tag not in OBJECTIVE_TAGS:
            raise ValueError(f"unknown objective {tag!r}")
        if tag == "mo":
            if weights_rng is None:
                raise ValueError("the blended objective needs a weight stream")
            if not (0.0 < structural_weight < 1.0):
                raise ValueError("structural weight must be strictly in (0, 1)")
        self.codec = codec
        self.tag = tag
        self.elegance = elegance
        self.structural_weight = structural_weight
        self.weights_rng = weights_rng

    @property
    def noisy(self) -> bool:
        return self.tag == "mo"

    def _elegance_scores(self, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        attr_counts, method_counts = self.codec.class_sizes(labels)
        nac_dev = np.std(attr_counts + method_counts, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = attr_counts / method_counts
            atmr_dev = np.std(ratios, axis=1)
        scale = self.elegance.scale
        if self.elegance.clamp:
            nac_dev = np.minimum(nac_dev, scale)
            atmr_dev = np.minimum(atmr_dev, scale)
        nac = 100.0 * (scale - nac_dev) / scale
        atmr = 100.0 * (scale - atmr_dev) / scale
        return nac, atmr

    def score(self, labels: np.ndarray, feasible: np.ndarray) -> np.ndarray:
        labels = np.atleast_2d(labels)
        feasible = np.atleast_1d(feasible)
        if self.tag == "cbo":
            raw = self.codec.coupling_scores(labels)
        elif self.tag in ("nac", "atmr"):
            nac, atmr = self._elegance_scores(labels)
            raw = nac if self.tag == "nac" else atmr
        else:
            cbo = self.codec.coupling_scores(labels)
            nac, atmr = self._elegance_scores(labels)
            a = self.structural_weight
            b = self.weights_rng.uniform(0.0, 1.0 - a, size=labels.shape[0])
            raw = a * cbo + b * nac + (1.0 - a - b) * atmr
        return np.where(feasible, raw, 0.0)


@dataclass
class SubmitOutcome:
    accepted: int
    improved_row: int | None
    finished: bool


class RunLedger:
    """Budget, target, and first-discovery accounting for one run.

    ``submit`` consumes scores in evaluation order, truncating a batch at the
    budget and stopping at the first evaluation that reaches the target, so
    the reported evaluation count is exact.
    """

    def __init__(
        self,
        budget: int,
        target: float | None = None,
        hook: EvalHook | None = None,
    ):
        if budget < 1:
            raise ValueError("budget must be at least 1")
        self.budget = int(budget)
        self.target = target
        self.hook = hook
        self.evaluations = 0
        self.best_score = -np.inf
        self.best_index = 0  # evaluation number at which best_score first appeared
        self.target_reached = False

    @property
    def remaining(self) -> int:
        return self.budget - self.evaluations

    @property
    def finished(self) -> bool:
        return self.target_reached or self.evaluations >= self.budget

    def submit(
        self,
        scores: np.ndarray,
        feasible: np.ndarray,
        stop_after: int | None = None,
    ) -> SubmitOutcome:
        """Account for a batch of realized scores.

        ``stop_after`` cuts the batch after that row (0-based) regardless of
        budget; rows past a cut are treated as never evaluated.  Returns the
        number of rows accepted and the row index (within the batch) of the
        best-so-far improvement, if any.
        """
        scores = np.atleast_1d(np.asarray(scores, dtype=float))
        feasible = np.atleast_1d(feasible)
        take = min(len(scores), self.remaining)
        if stop_after is not None:
            take = min(take, stop_after + 1)
        if take <= 0:
            return SubmitOutcome(0, None, self.finished)
        scores = scores[:take]
        if self.target is not None:
            hits = np.nonzero(scores >= self.target)[0]
            if hits.size:
                take = int(hits[0]) + 1
                scores = scores[:take]
                self.target_reached = True
        improved_row = None
        batch_best = float(scores.max())
        if batch_best > self.best_score:
            improved_row = int(np.argmax(scores == batch_best))
            self.best_score = batch_best
            self.best_index = self.evaluations + improved_row + 1
        if self.hook is not None:
            for offset in range(take):
                self.hook(
                    self.evaluations + offset + 1,
                    bool(feasible[offset]),
                    float(scores[offset]),
                )
        self.evaluations += take
        return SubmitOutcome(take, improved_row, self.finished)
