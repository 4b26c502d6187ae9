"""Discrete fuzzy sets over finite labeled universes.

Universes are explicit label lists, so the infima and suprema of the
underlying theory reduce to min/max over vectors.  All values are
immutable; operations are pure functions.

Operation counting follows a fixed cost convention shared with the
benchmark module: each pointwise similarity element costs two implication
evaluations plus one t-norm evaluation, an inf/sup over k values costs
k - 1 comparisons, and every other pointwise connective costs one
evaluation.  Counters never influence computed values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .algebra import UNIT_TOL, Implication, Negation, TNorm, clamp_unit
from .errors import ExplosionError, SemanticError, UniverseMismatchError
from .ref import REF

DEFAULT_CELL_CAP = 10_000_000
PRODUCT_SEPARATOR = "×"  # ×


@dataclass(frozen=True)
class Universe:
    """A finite ordered set of element labels."""

    name: str
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise SemanticError(f"universe {self.name!r} has no labels")
        if any(not lbl for lbl in self.labels):
            raise SemanticError(f"universe {self.name!r} has an empty label")
        if len(set(self.labels)) != len(self.labels):
            raise SemanticError(f"universe {self.name!r} has duplicate labels")

    @property
    def size(self) -> int:
        return len(self.labels)

    @staticmethod
    def product(universes: "list[Universe]") -> "Universe":
        """Row-major product universe; leftmost index varies slowest."""
        name = PRODUCT_SEPARATOR.join(u.name for u in universes)
        labels = tuple(
            PRODUCT_SEPARATOR.join(combo)
            for combo in itertools.product(*(u.labels for u in universes))
        )
        return Universe(name, labels)


@dataclass(frozen=True)
class FuzzySet:
    """A membership vector aligned with a universe's labels."""

    universe: Universe
    memberships: tuple[float, ...]

    def __post_init__(self):
        values = tuple(
            clamp_unit(v, what=f"membership[{i}] of a set on {self.universe.name!r}")
            for i, v in enumerate(self.memberships)
        )
        object.__setattr__(self, "memberships", values)
        if len(values) != self.universe.size:
            raise SemanticError(
                f"{len(values)} memberships for universe {self.universe.name!r} "
                f"of size {self.universe.size}"
            )

    @cached_property
    def max_membership(self) -> float:
        return max(self.memberships)

    @property
    def is_normal(self) -> bool:
        return self.max_membership == 1.0

    @property
    def is_empty(self) -> bool:
        return self.max_membership == 0.0

    def items(self):
        return zip(self.universe.labels, self.memberships)


@dataclass(frozen=True)
class FuzzyRelation:
    """A membership matrix between two universes (rows: source, cols: target)."""

    source: Universe
    target: Universe
    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(clamp_unit(v, what="relation cell") for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if len(rows) != self.source.size or any(len(r) != self.target.size for r in rows):
            raise SemanticError(
                f"relation shape must be {self.source.size}x{self.target.size}"
            )


def _same_universe(a: FuzzySet, b: FuzzySet, op: str) -> None:
    if a.universe != b.universe:
        raise UniverseMismatchError(
            f"{op}: operands live on {a.universe.name!r} and {b.universe.name!r}"
        )


def complement(a: FuzzySet, negation: Negation | None = None) -> FuzzySet:
    """Pointwise negation; requires a strong negation."""
    negation = negation or Negation.standard()
    if not negation.is_strong():
        raise SemanticError(f"complement needs a strong negation, got {negation.describe()}")
    return FuzzySet(a.universe, tuple(negation(v) for v in a.memberships))


def union(a: FuzzySet, b: FuzzySet) -> FuzzySet:
    _same_universe(a, b, "union")
    return FuzzySet(a.universe, tuple(max(x, y) for x, y in zip(a.memberships, b.memberships)))


def intersect(a: FuzzySet, b: FuzzySet) -> FuzzySet:
    _same_universe(a, b, "intersect")
    return FuzzySet(a.universe, tuple(min(x, y) for x, y in zip(a.memberships, b.memberships)))


def combine(a: FuzzySet, b: FuzzySet, connective) -> FuzzySet:
    """Pointwise application of any binary connective (t-norm, implication, ...)."""
    _same_universe(a, b, "combine")
    return FuzzySet(
        a.universe, tuple(connective(x, y) for x, y in zip(a.memberships, b.memberships))
    )


def is_subset(a: FuzzySet, b: FuzzySet) -> bool:
    _same_universe(a, b, "is_subset")
    return all(x <= y for x, y in zip(a.memberships, b.memberships))


def product_extend(
    sets: list[FuzzySet],
    tnorm: TNorm,
    *,
    cap: int = DEFAULT_CELL_CAP,
    counter=None,
    labels: list[str] | None = None,
) -> FuzzySet:
    """Materialize the product universe with memberships T-folded across coordinates.

    The fold is pairwise and left-associative, so an n-fold product is built
    through n - 1 intermediate grids; the counter receives one row per
    intermediate, labeled with the accumulated expression.
    """
    if not sets:
        raise SemanticError("product_extend needs at least one set")
    cells = 1
    for s in sets:
        cells *= s.universe.size
    if cells > cap:
        raise ExplosionError(cells, cap)
    if labels is None:
        labels = [f"A{i + 1}" for i in range(len(sets))]

    current = sets[0]
    expression = labels[0]
    for nxt, label in zip(sets[1:], labels[1:]):
        values = tuple(
            tnorm(x, y) for x in current.memberships for y in nxt.memberships
        )
        expression = f"T({expression},{label})"
        if counter is not None:
            counter.record(expression, tnorms=len(values))
        current = FuzzySet(Universe.product([current.universe, nxt.universe]), values)
    return current


def similarity(ref: REF, a: FuzzySet, b: FuzzySet, *, counter=None, label: str = "S") -> float:
    """Infimum over elements of the REF applied pointwise.

    Cost model: 3 operations per element (the composed REF evaluates two
    implications and one t-norm) plus size - 1 comparisons for the infimum.
    """
    _same_universe(a, b, "similarity")
    fn = ref._fn
    value = min(fn(x, y) for x, y in zip(a.memberships, b.memberships))
    if counter is not None:
        u = a.universe.size
        counter.record(label, implications=2 * u, tnorms=u, comparisons=u - 1)
    return value


def alpha_equal(ref: REF, a: FuzzySet, b: FuzzySet, alpha: float) -> bool:
    """Equality to degree alpha: similarity(a, b) >= alpha.

    The comparison allows the package's arithmetic tolerance so that a
    similarity one rounding step below an exactly representable alpha still
    counts.
    """
    alpha = clamp_unit(alpha, what="alpha")
    return similarity(ref, a, b) >= alpha - UNIT_TOL


def cri_compose(
    relation: FuzzyRelation,
    a: FuzzySet,
    tnorm: TNorm | None = None,
    *,
    counter=None,
) -> FuzzySet:
    """Sup-T composition of a set with a relation, cell by output cell."""
    tnorm = tnorm or TNorm.minimum()
    if a.universe != relation.source:
        raise UniverseMismatchError(
            f"cri_compose: set on {a.universe.name!r}, relation from {relation.source.name!r}"
        )
    fn = tnorm._fn
    values = []
    for j in range(relation.target.size):
        values.append(max(fn(a.memberships[i], relation.matrix[i][j]) for i in range(relation.source.size)))
    if counter is not None:
        u, m = relation.source.size, relation.target.size
        counter.record("sup-T composition", tnorms=u * m, comparisons=m * (u - 1))
    return FuzzySet(relation.target, tuple(values))


def relation_from_rule(
    antecedent: FuzzySet,
    consequent: FuzzySet,
    connective,
) -> FuzzyRelation:
    """The conditional relation of one if-then rule: cell (x, y) = c(A(x), B(y)).

    ``connective`` is either an implication or a t-norm, matching the two
    readings of a rule as a constraint or as a conjunction.
    """
    if not isinstance(connective, (Implication, TNorm)):
        raise SemanticError("relation_from_rule needs an implication or a t-norm")
    matrix = tuple(
        tuple(connective(x, y) for y in consequent.memberships)
        for x in antecedent.memberships
    )
    return FuzzyRelation(antecedent.universe, consequent.universe, matrix)
