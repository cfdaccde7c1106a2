"""Design-problem instances, candidate designs, and synthetic instance generation.

A problem instance is a set of design elements (attributes and methods), a
table of method/attribute uses, and a fixed number of classes.  Elements are
indexed globally: indices ``0 .. A-1`` are attributes and ``A .. A+M-1`` are
methods.  A candidate design partitions all elements into exactly
``class_count`` classes; a design is feasible when every class holds at least
one attribute and at least one method.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class InstanceFormatError(ValueError):
    """The instance file is malformed (bad syntax, wrong types, unknown keys)."""


class InstanceValidationError(ValueError):
    """The instance data parses but violates a semantic constraint."""


class PartitionError(ValueError):
    """A class list is not a partition of the element set (an encoder bug)."""


@dataclass(frozen=True, eq=False)
class Design:
    """A partition of all elements into classes.

    Class order carries no meaning: two designs are equal when their classes
    are equal as multisets.  ``feasible`` is true when every class contains at
    least one attribute and at least one method.
    """

    classes: tuple[frozenset[int], ...]
    attribute_count: int
    feasible: bool

    @classmethod
    def from_classes(cls, classes, attribute_count: int) -> "Design":
        """Build a design from an iterable of element-index collections.

        Raises PartitionError if the classes do not partition ``{0..e-1}``.
        """
        groups = tuple(frozenset(int(i) for i in group) for group in classes)
        if not groups:
            raise PartitionError("a design needs at least one class")
        total = sum(len(g) for g in groups)
        union = frozenset().union(*groups)
        if len(union) != total or union != frozenset(range(total)):
            raise PartitionError(
                f"classes do not partition the element range 0..{total - 1}"
            )
        a = int(attribute_count)
        feasible = all(
            any(i < a for i in g) and any(i >= a for i in g) for g in groups
        )
        return cls(classes=groups, attribute_count=a, feasible=feasible)

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        """Order-free normal form used for equality and hashing."""
        return tuple(sorted(tuple(sorted(g)) for g in self.classes))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Design):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def element_count(self) -> int:
        return sum(len(g) for g in self.classes)

    def class_sizes(self) -> list[int]:
        return [len(g) for g in self.classes]

    def attributes_per_class(self) -> list[int]:
        return [sum(1 for i in g if i < self.attribute_count) for g in self.classes]

    def methods_per_class(self) -> list[int]:
        return [sum(1 for i in g if i >= self.attribute_count) for g in self.classes]


@dataclass(frozen=True)
class DesignProblem:
    """A validated class-design problem instance.

    ``uses`` holds (method index, attribute index) pairs in their local index
    spaces: methods ``0..M-1``, attributes ``0..A-1``.  The global element
    index of method ``j`` is ``attribute_count + j``.
    """

    name: str
    attribute_names: tuple[str, ...]
    method_names: tuple[str, ...]
    uses: tuple[tuple[int, int], ...]
    class_count: int
    manual_design: Design | None = None

    def __post_init__(self):
        a, m = len(self.attribute_names), len(self.method_names)
        if a < 1 or m < 1:
            raise InstanceValidationError("need at least one attribute and one method")
        seen = set()
        for mi, ai in self.uses:
            if not (0 <= mi < m) or not (0 <= ai < a):
                raise InstanceValidationError(f"use ({mi}, {ai}) is out of range")
            if (mi, ai) in seen:
                raise InstanceValidationError(f"duplicate use ({mi}, {ai})")
            seen.add((mi, ai))
        if self.class_count < 1:
            raise InstanceValidationError("class count must be at least 1")
        if self.class_count > min(a, m):
            raise InstanceValidationError(
                f"{self.class_count} classes cannot all be feasible with "
                f"{a} attributes and {m} methods"
            )
        if self.manual_design is not None:
            d = self.manual_design
            if d.element_count != a + m or d.class_count != self.class_count:
                raise InstanceValidationError(
                    "manual design does not match the instance dimensions"
                )

    @property
    def attribute_count(self) -> int:
        return len(self.attribute_names)

    @property
    def method_count(self) -> int:
        return len(self.method_names)

    @property
    def element_count(self) -> int:
        return len(self.attribute_names) + len(self.method_names)

    @property
    def use_count(self) -> int:
        return len(self.uses)

    def element_name(self, index: int) -> str:
        if index < self.attribute_count:
            return self.attribute_names[index]
        return self.method_names[index - self.attribute_count]


def validate_design(design: Design, problem: DesignProblem) -> tuple[bool, list[int]]:
    """Check the one-attribute-one-method constraint for every class.

    Returns ``(feasible, offending class indices)``.  Raises PartitionError
    when the design does not even partition the problem's elements; that
    signals a decoder bug rather than an infeasible candidate.
    """
    if design.attribute_count != problem.attribute_count:
        raise PartitionError("design and problem disagree on the attribute count")
    if design.element_count != problem.element_count:
        raise PartitionError("design does not cover the problem's element set")
    if design.class_count != problem.class_count:
        raise PartitionError(
            f"expected {problem.class_count} classes, got {design.class_count}"
        )
    a = problem.attribute_count
    offending = [
        k
        for k, group in enumerate(design.classes)
        if not (any(i < a for i in group) and any(i >= a for i in group))
    ]
    return (not offending, offending)


@dataclass(frozen=True)
class InstanceSpec:
    """Parameters for the synthetic instance generator.

    ``planted_modularity`` is the target fraction of uses that fall inside the
    blocks of a hidden feasible partition; the remainder cross block
    boundaries.  The hidden partition is attached as the instance's
    ``manual_design``.
    """

    attribute_count: int
    method_count: int
    use_count: int
    class_count: int
    planted_modularity: float
    seed: int

    def __post_init__(self):
        a, m = self.attribute_count, self.method_count
        if a < 1 or m < 1:
            raise InstanceValidationError("need at least one attribute and one method")
        if self.use_count < 1:
            raise InstanceValidationError("need at least one use")
        if self.use_count > a * m:
            raise InstanceValidationError(
                f"{self.use_count} unique uses do not fit in a {a}x{m} use table"
            )
        if not (1 <= self.class_count <= min(a, m)):
            raise InstanceValidationError(
                f"{self.class_count} classes cannot all be feasible with "
                f"{a} attributes and {m} methods"
            )
        if not (0.0 <= self.planted_modularity <= 1.0):
            raise InstanceValidationError("planted_modularity must be in [0, 1]")


def generate_instance(spec: InstanceSpec) -> DesignProblem:
    """Generate a random instance around a hidden feasible partition.

    Deterministic for a given spec.  Attributes and methods are dealt
    round-robin into ``class_count`` blocks after a seeded shuffle, so every
    block gets at least one of each kind and block sizes differ by at most
    one.  Uses are then sampled without replacement: a ``planted_modularity``
    fraction from within-block (method, attribute) pairs, the rest from
    cross-block pairs.
    """
    rng = np.random.default_rng(spec.seed)
    a, m, u, c = (
        spec.attribute_count,
        spec.method_count,
        spec.use_count,
        spec.class_count,
    )
    attr_order = rng.permutation(a)
    method_order = rng.permutation(m)
    blocks = []
    for k in range(c):
        attrs = attr_order[k::c]
        methods = method_order[k::c]
        blocks.append((sorted(int(i) for i in attrs), sorted(int(j) for j in methods)))

    internal = [
        (mi, ai) for attrs, methods in blocks for mi in methods for ai in attrs
    ]
    internal_set = set(internal)
    crossing = [
        (mi, ai)
        for mi in range(m)
        for ai in range(a)
        if (mi, ai) not in internal_set
    ]

    wanted_internal = int(round(spec.planted_modularity * u))
    lo = max(0, u - len(crossing))
    hi = min(u, len(internal))
    n_internal = min(max(wanted_internal, lo), hi)
    if spec.planted_modularity == 1.0 and n_internal < u:
        raise InstanceValidationError(
            "not enough within-block pairs to make every use internal"
        )
    if spec.planted_modularity == 0.0 and n_internal > 0:
        raise InstanceValidationError(
            "not enough cross-block pairs to make every use crossing"
        )

    picked = [
        internal[i]
        for i in rng.choice(len(internal), size=n_internal, replace=False)
    ]
    picked += [
        crossing[i]
        for i in rng.choice(len(crossing), size=u - n_internal, replace=False)
    ]
    uses = tuple(sorted(picked))

    planted = Design.from_classes(
        [attrs + [a + mi for mi in methods] for attrs, methods in blocks],
        attribute_count=a,
    )
    name = (
        f"synthetic-a{a}-m{m}-u{u}-c{c}"
        f"-mod{spec.planted_modularity:g}-seed{spec.seed}"
    )
    return DesignProblem(
        name=name,
        attribute_names=tuple(f"attr{i}" for i in range(a)),
        method_names=tuple(f"method{j}" for j in range(m)),
        uses=uses,
        class_count=c,
        manual_design=planted,
    )


_REQUIRED_KEYS = {"name", "attributes", "methods", "uses", "classes"}
_OPTIONAL_KEYS = {"manual_design"}


def load_problem(path) -> DesignProblem:
    """Load and validate an instance file (JSON, see ``save_problem``)."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise InstanceFormatError("top level must be an object")
    keys = set(raw)
    unknown = keys - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if unknown:
        raise InstanceFormatError(f"unknown keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - keys
    if missing:
        raise InstanceFormatError(f"missing keys: {sorted(missing)}")
    if not isinstance(raw["name"], str):
        raise InstanceFormatError("'name' must be a string")
    for field in ("attributes", "methods"):
        if not isinstance(raw[field], list) or not all(
            isinstance(s, str) for s in raw[field]
        ):
            raise InstanceFormatError(f"'{field}' must be an array of strings")
    if not isinstance(raw["classes"], int) or isinstance(raw["classes"], bool):
        raise InstanceFormatError("'classes' must be an integer")
    uses = []
    if not isinstance(raw["uses"], list):
        raise InstanceFormatError("'uses' must be an array of [method, attribute] pairs")
    for pair in raw["uses"]:
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            raise InstanceFormatError(f"bad use entry: {pair!r}")
        uses.append((pair[0], pair[1]))

    manual = None
    if "manual_design" in raw:
        groups = raw["manual_design"]
        if not isinstance(groups, list) or not all(
            isinstance(g, list) for g in groups
        ):
            raise InstanceFormatError("'manual_design' must be an array of arrays")
        try:
            manual = Design.from_classes(groups, attribute_count=len(raw["attributes"]))
        except PartitionError as exc:
            raise InstanceValidationError(f"manual design invalid: {exc}") from exc

    return DesignProblem(
        name=raw["name"],
        attribute_names=tuple(raw["attributes"]),
        method_names=tuple(raw["methods"]),
        uses=tuple(uses),
        class_count=raw["classes"],
        manual_design=manual,
    )


def save_problem(problem: DesignProblem, path) -> None:
    """Write an instance file readable by ``load_problem``."""
    doc = {
        "name": problem.name,
        "attributes": list(problem.attribute_names),
        "methods": list(problem.method_names),
        "uses": [list(pair) for pair in problem.uses],
        "classes": problem.class_count,
    }
    if problem.manual_design is not None:
        doc["manual_design"] = [sorted(g) for g in problem.manual_design.classes]
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
