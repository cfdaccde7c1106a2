"""The two genotype encodings and their variation operators.

NG assigns every element a class label; XP threads all elements and
end-of-class markers onto one permutation read cyclically.
"""

import numpy as np

from designsearch import (
    DesignProblem,
    NgGenotype,
    RateSet,
    XpGenotype,
    crossover,
    decode,
    mutate_ng,
    mutate_xp,
    random_genotype,
    self_adapt_mutate,
)

problem = DesignProblem(
    name="toy",
    attribute_names=("a0", "a1"),
    method_names=("m0", "m1"),
    uses=((0, 0), (1, 1), (0, 1)),
    class_count=2,
)
rng = np.random.default_rng(3)


def show(tag, genotype):
    design = decode(genotype, problem)
    names = [
        "{" + ", ".join(problem.element_name(i) for i in sorted(group)) + "}"
        for group in design.classes
    ]
    print(f"  {tag}: {names} feasible={design.feasible}")


print("NG: allele i names the class of element i")
show("[1, 2, 1, 2]", NgGenotype(np.array([1, 2, 1, 2]), class_count=2))
show("[1, 1, 1, 2]", NgGenotype(np.array([1, 1, 1, 2]), class_count=2))

print("XP: values >= element count are end-of-class markers, read cyclically")
show("m0 a0 | a1 m1 |", XpGenotype(np.array([2, 0, 4, 1, 3, 5]), element_count=4))
show("| | a0 a1 m0 m1", XpGenotype(np.array([4, 5, 0, 1, 2, 3]), element_count=4))

print("\nvariation keeps genotypes valid")
g = random_genotype("ng", problem, rng)
print(f"  ng parent  {g.alleles}")
print(f"  ng mutated {mutate_ng(g, 0.5, rng).alleles}")

p1 = random_genotype("xp", problem, rng)
p2 = random_genotype("xp", problem, rng)
c1, c2 = crossover(p1, p2, "order", rng)
print(f"  xp parents  {p1.perm} {p2.perm}")
print(f"  xp children {c1.perm} {c2.perm}")
print(f"  xp one-event mutation {mutate_xp(p1, rng).perm}")

print("\nself-adaptation carries a mutation-strength gene on the genotype")
rates = RateSet(reset_prob=0.4)  # resets exaggerated so the gene visibly moves
g = random_genotype("ng", problem, rng, rate_set=rates)
for _ in range(8):
    g = self_adapt_mutate(g, rates, rng)
    print(f"  strength {rates.rates[g.rate_gene]:5.2f} -> alleles {g.alleles}")
