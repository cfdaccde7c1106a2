"""Genotype encodings and variation operators.

Two encodings of a class design:

* NG ("naive grouping"): one integer allele per element, valued ``1..c``,
  naming the class the element joins.
* XP ("extended permutation"): a permutation of all elements plus ``c``
  end-of-class marker tokens (values ``>= element_count``).  The permutation
  is read cyclically: the run of elements after each marker forms one class,
  so exactly ``c`` classes always result (some possibly empty).

Either genotype may carry ``rate_gene``, an index into a shared set of
mutation rates used for self-adaptive mutation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import Design, DesignProblem

NG_OPERATORS = ("one_point", "uniform")
XP_OPERATORS = ("order", "edge")

# expected mutation events per offspring; the weakest member still perturbs
# roughly a fifth of offspring, which keeps strength selection alive
DEFAULT_RATES = (0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0)


@dataclass(frozen=True)
class RateSet:
    """The menu of mutation strengths available to self-adaptive genotypes.

    Each value is the expected number of mutation events per offspring: locus
    resets for NG (applied as a per-locus probability of ``value / length``,
    capped at 1), elementary swap/insert/invert events for XP.  Values at or
    below 1 reduce to the plain probabilistic reading.  ``reset_prob`` is the
    chance the strength gene itself is re-drawn before a mutation is applied.
    """

    rates: tuple[float, ...] = DEFAULT_RATES
    reset_prob: float = 0.1

    def __post_init__(self):
        if not self.rates:
            raise ValueError("need at least one rate")
        if any(r <= 0.0 for r in self.rates):
            raise ValueError("rates must be positive")
        if not (0.0 <= self.reset_prob <= 1.0):
            raise ValueError("reset_prob must lie in [0, 1]")


@dataclass(eq=False)
class NgGenotype:
    """Integer grouping vector; ``alleles[i]`` puts element i in that class."""

    alleles: np.ndarray
    class_count: int
    rate_gene: int | None = None

    def __len__(self) -> int:
        return len(self.alleles)

    def copy(self) -> "NgGenotype":
        return NgGenotype(self.alleles.copy(), self.class_count, self.rate_gene)

    def validate(self) -> None:
        if self.alleles.ndim != 1 or len(self.alleles) == 0:
            raise ValueError("alleles must be a non-empty vector")
        if self.alleles.min() < 1 or self.alleles.max() > self.class_count:
            raise ValueError(f"alleles must lie in 1..{self.class_count}")


@dataclass(eq=False)
class XpGenotype:
    """Permutation of elements and end-of-class markers."""

    perm: np.ndarray
    element_count: int
    rate_gene: int | None = None

    def __len__(self) -> int:
        return len(self.perm)

    @property
    def class_count(self) -> int:
        return len(self.perm) - self.element_count

    def copy(self) -> "XpGenotype":
        return XpGenotype(self.perm.copy(), self.element_count, self.rate_gene)

    def validate(self) -> None:
        n = len(self.perm)
        if n <= self.element_count:
            raise ValueError("permutation must include at least one marker")
        if not np.array_equal(np.sort(self.perm), np.arange(n)):
            raise ValueError("perm must contain each value 0..n-1 exactly once")


Genotype = NgGenotype | XpGenotype


def decode(genotype: Genotype, problem: DesignProblem) -> Design:
    """Map a genotype to its design.  Never fails on a valid genotype;
    infeasibility (e.g. an empty class) is a property of the result."""
    if isinstance(genotype, NgGenotype):
        groups = [[] for _ in range(genotype.class_count)]
        for i, allele in enumerate(genotype.alleles):
            groups[int(allele) - 1].append(i)
    else:
        e = genotype.element_count
        perm = genotype.perm
        marker_positions = np.flatnonzero(perm >= e)
        rolled = np.roll(perm, -(int(marker_positions[0]) + 1))
        groups = [[] for _ in range(genotype.class_count)]
        segment = 0
        for value in rolled:
            if value >= e:
                segment += 1
            else:
                groups[segment].append(int(value))
        groups = groups[: genotype.class_count]
    return Design.from_classes(groups, attribute_count=problem.attribute_count)


def random_genotype(
    encoding: str,
    problem: DesignProblem,
    rng: np.random.Generator,
    rate_set: RateSet | None = None,
) -> Genotype:
    """Draw a uniform random genotype; with ``rate_set`` given, also a rate gene."""
    gene = int(rng.integers(len(rate_set.rates))) if rate_set is not None else None
    if encoding == "ng":
        alleles = rng.integers(1, problem.class_count + 1, size=problem.element_count)
        return NgGenotype(alleles, problem.class_count, gene)
    if encoding == "xp":
        perm = rng.permutation(problem.element_count + problem.class_count)
        return XpGenotype(perm, problem.element_count, gene)
    raise ValueError(f"unknown encoding {encoding!r}")


def mutate_ng(g: NgGenotype, rate: float, rng: np.random.Generator) -> NgGenotype:
    """Reset each locus with the given probability to a uniform class value.

    A reset may re-draw the current value, so the expected number of changed
    loci is ``len(g) * rate * (c - 1) / c``.
    """
    if not (0.0 < rate <= 1.0):
        raise ValueError("rate must lie in (0, 1]")
    alleles = g.alleles.copy()
    mask = rng.random(len(alleles)) < rate
    hits = int(mask.sum())
    if hits:
        alleles[mask] = rng.integers(1, g.class_count + 1, size=hits)
    return NgGenotype(alleles, g.class_count, g.rate_gene)


def _swap(perm: np.ndarray, rng: np.random.Generator) -> None:
    i, j = rng.integers(len(perm), size=2)
    perm[i], perm[j] = perm[j], perm[i]


def _insert(perm: np.ndarray, rng: np.random.Generator) -> None:
    i, j = rng.integers(len(perm), size=2)
    value = perm[i]
    rest = np.delete(perm, i)
    perm[:] = np.insert(rest, j, value)


def _invert(perm: np.ndarray, rng: np.random.Generator) -> None:
    i, j = sorted(rng.integers(len(perm), size=2))
    perm[i : j + 1] = perm[i : j + 1][::-1]


_XP_EVENTS = (_swap, _insert, _invert)


def mutate_xp(g: XpGenotype, rng: np.random.Generator) -> XpGenotype:
    """Apply exactly one swap, insert, or invert event, chosen uniformly."""
    perm = g.perm.copy()
    _XP_EVENTS[int(rng.integers(3))](perm, rng)
    return XpGenotype(perm, g.element_count, g.rate_gene)


def self_adapt_mutate(
    g: Genotype, rates: RateSet, rng: np.random.Generator
) -> Genotype:
    """Mutate with the genotype's encoded strength, possibly re-drawing it.

    The rate gene is re-drawn uniformly with probability ``rates.reset_prob``;
    the (possibly new) encoded strength then drives mutation.  NG genotypes
    reset each locus with probability ``strength / length``.  XP genotypes
    run one trial per event type: each of swap, insert, and invert is applied
    once with probability ``strength`` (clipped to 1), so a permutation
    receives at most three elementary events.
    """
    if g.rate_gene is None:
        raise ValueError("genotype carries no rate gene")
    gene = g.rate_gene
    if rng.random() < rates.reset_prob:
        gene = int(rng.integers(len(rates.rates)))
    strength = rates.rates[gene]
    if isinstance(g, NgGenotype):
        return mutate_ng(replace_gene(g, gene), min(1.0, strength / len(g)), rng)
    perm = g.perm.copy()
    for event in _XP_EVENTS:
        if rng.random() < strength:
            event(perm, rng)
    return XpGenotype(perm, g.element_count, gene)


def replace_gene(g: Genotype, gene: int | None) -> Genotype:
    """Copy of ``g`` carrying a different rate gene."""
    if isinstance(g, NgGenotype):
        return NgGenotype(g.alleles, g.class_count, gene)
    return XpGenotype(g.perm, g.element_count, gene)


def crossover(
    p1: Genotype,
    p2: Genotype,
    operator: str,
    rng: np.random.Generator,
) -> tuple[Genotype, Genotype]:
    """Recombine two parents; children inherit their parent's rate gene."""
    if type(p1) is not type(p2) or len(p1) != len(p2):
        raise ValueError("parents must share encoding and length")
    ng = isinstance(p1, NgGenotype)
    if ng and operator not in NG_OPERATORS:
        raise ValueError(f"operator {operator!r} does not apply to NG genotypes")
    if not ng and operator not in XP_OPERATORS:
        raise ValueError(f"operator {operator!r} does not apply to XP genotypes")

    if operator == "one_point":
        cut = int(rng.integers(0, len(p1) + 1))
        a1 = np.concatenate([p1.alleles[:cut], p2.alleles[cut:]])
        a2 = np.concatenate([p2.alleles[:cut], p1.alleles[cut:]])
    elif operator == "uniform":
        mask = rng.random(len(p1)) < 0.5
        a1 = np.where(mask, p1.alleles, p2.alleles)
        a2 = np.where(mask, p2.alleles, p1.alleles)
    elif operator == "order":
        a1 = _order_cross(p1.perm, p2.perm, rng)
        a2 = _order_cross(p2.perm, p1.perm, rng)
    else:
        a1 = _edge_cross(p1.perm, p2.perm, rng)
        a2 = _edge_cross(p2.perm, p1.perm, rng)

    if ng:
        return (
            NgGenotype(a1, p1.class_count, p1.rate_gene),
            NgGenotype(a2, p2.class_count, p2.rate_gene),
        )
    return (
        XpGenotype(a1, p1.element_count, p1.rate_gene),
        XpGenotype(a2, p2.element_count, p2.rate_gene),
    )


def _order_cross(
    base: np.ndarray, order_donor: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Order-based crossover: a random subset of positions in ``base`` has its
    values rearranged into the relative order they appear in ``order_donor``;
    everything else stays in place."""
    n = len(base)
    mask = rng.random(n) < 0.5
    child = base.copy()
    chosen = np.zeros(n, dtype=bool)
    chosen[base[mask]] = True
    child[mask] = order_donor[chosen[order_donor]]
    return child


def _edge_cross(
    p1: np.ndarray, p2: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Edge recombination: walk the combined (cyclic) adjacency table,
    preferring the neighbor with the fewest remaining edges."""
    n = len(p1)
    edges: dict[int, set[int]] = {int(v): set() for v in p1}
    for perm in (p1, p2):
        for pos in range(n):
            v = int(perm[pos])
            edges[v].add(int(perm[pos - 1]))
            edges[v].add(int(perm[(pos + 1) % n]))

    remaining = {int(v) for v in p1}
    current = int(p1[int(rng.integers(n))])
    child = np.empty(n, dtype=p1.dtype)
    for pos in range(n):
        child[pos] = current
        remaining.discard(current)
        for v in edges[current]:
            edges[v].discard(current)
        if pos == n - 1:
            break
        candidates = edges[current] & remaining
        if candidates:
            fewest = min(len(edges[v]) for v in candidates)
            pool = sorted(v for v in candidates if len(edges[v]) == fewest)
        else:
            pool = sorted(remaining)
        current = pool[int(rng.integers(len(pool)))]
    return child
