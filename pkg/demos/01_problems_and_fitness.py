"""Tour of the problem model and the three fitness measures.

Builds a tiny class-design instance by hand, scores a few candidate
groupings, then generates a synthetic instance around a hidden partition.
"""

import numpy as np

from designsearch import (
    Design,
    DesignProblem,
    InstanceSpec,
    atmr_fitness,
    coupling_fitness,
    generate_instance,
    mo_fitness,
    nac_fitness,
    validate_design,
)

# A four-element problem: two attributes, two methods, three uses.
toy = DesignProblem(
    name="toy",
    attribute_names=("balance", "owner"),
    method_names=("deposit", "rename"),
    uses=((0, 0), (1, 1), (0, 1)),  # (method, attribute) pairs
    class_count=2,
)
print(f"{toy.name}: {toy.element_count} elements, {toy.use_count} uses")

# Elements are indexed attributes-first: 0..1 attributes, 2..3 methods.
paired = Design.from_classes([[0, 2], [1, 3]], attribute_count=2)
swapped = Design.from_classes([[0, 3], [1, 2]], attribute_count=2)
lopsided = Design.from_classes([[0, 1], [2, 3]], attribute_count=2)

for label, design in [("paired", paired), ("swapped", swapped), ("lopsided", lopsided)]:
    feasible, offending = validate_design(design, toy)
    if feasible:
        print(
            f"  {label}: coupling {coupling_fitness(design, toy):6.2f}  "
            f"size-balance {nac_fitness(design):6.2f}  "
            f"ratio-balance {atmr_fitness(design):6.2f}"
        )
    else:
        print(f"  {label}: infeasible (classes {offending} lack a kind)")

# The blended objective draws a fresh weight split per call, modelling the
# noise of a human judging the non-structural qualities.
rng = np.random.default_rng(7)
for _ in range(3):
    value, weights = mo_fitness(paired, toy, rng)
    print(
        f"  blended: {value:6.2f} with weights "
        f"cbo={weights.cbo:.2f} nac={weights.nac:.3f} atmr={weights.atmr:.3f}"
    )

# Synthetic instances plant a hidden feasible partition and route a chosen
# fraction of uses inside it.  The partition ships as manual_design.
spec = InstanceSpec(
    attribute_count=16, method_count=15, use_count=39, class_count=5,
    planted_modularity=0.85, seed=101,
)
problem = generate_instance(spec)
planted = problem.manual_design
print(f"\n{problem.name}")
print(f"  planted partition scores {coupling_fitness(planted, problem):.2f} coupling")
print(f"  class sizes: {sorted(planted.class_sizes())}")
