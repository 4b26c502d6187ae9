"""Restricted equivalence functions: construction, validation, decomposition.

A restricted equivalence function (REF) is a symmetric map on [0,1]² that
is 1 exactly on the diagonal, 0 exactly at the opposite corners, commutes
with a strong negation, and decreases as its arguments move apart.  REFs
are built here either from a catalog of closed forms or by composing a
binary aggregation M with a mapping f as M(f(x,y), f(y,x)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from .algebra import (
    PROPERTY_TOL,
    Aggregation,
    Generator,
    Implication,
    Negation,
    PropertyReport,
    TNorm,
    check_property,
    unit_grid,
)
from .errors import DecompositionError, SemanticError

CATALOG_NAMES = ("F1", "F2", "F3", "F4", "absdiff", "phi")


def _f1(x: float, y: float) -> float:
    # mean of the two Lukasiewicz implication values
    return 0.5 * (min(1.0, 1.0 - x + y) + min(1.0, 1.0 - y + x))


def _absdiff(x: float, y: float) -> float:
    return 1.0 - abs(x - y)


def _f3(x: float, y: float) -> float:
    if x == y:
        return 1.0
    if x > y:
        x, y = y, x
    # now x < y
    return min(x / y, (1.0 - y) / (1.0 - x))


def _f4(x: float, y: float) -> float:
    if x == y:
        return 1.0
    if x > y:
        x, y = y, x
    # now x < y; ratio of complements below the antidiagonal, plain ratio above
    if x + y < 1.0:
        return (1.0 - y) / (1.0 - x)
    return x / y


@dataclass(frozen=True)
class REF:
    """An evaluable restricted-equivalence candidate.

    ``catalog`` kinds carry a closed form; ``composed`` kinds evaluate
    M(f(x,y), f(y,x)).  Construction never certifies the axioms; use
    ``check_ref_preconditions`` or ``validate_ref`` for that, so that
    deliberately broken candidates stay constructible for negative tests.
    """

    kind: str  # "catalog" | "composed"
    name: str
    aggregation: Aggregation | None = None
    mapping: Callable[[float, float], float] | None = None
    negation: Negation = Negation.standard()
    generator: Generator | None = None

    @cached_property
    def _fn(self) -> Callable[[float, float], float]:
        if self.kind == "catalog":
            if self.name == "F1":
                return _f1
            if self.name in ("F2", "absdiff"):
                return _absdiff
            if self.name == "F3":
                return _f3
            if self.name == "F4":
                return _f4
            if self.name == "phi":
                g, g_inv = self.generator.forward, self.generator.inverse
                return lambda x, y: g_inv(1.0 - abs(g(x) - g(y)))
            raise SemanticError(f"unknown catalog name {self.name!r}")
        m, f = self.aggregation._fn, self.mapping
        if callable(getattr(f, "_fn", None)):
            f = f._fn
        return lambda x, y: m(f(x, y), f(y, x))

    def __call__(self, x: float, y: float) -> float:
        return self._fn(x, y)

    def describe(self) -> str:
        if self.kind == "catalog":
            if self.name == "phi":
                return f"catalog:phi:{self.generator.description}"
            return f"catalog:{self.name}"
        mapping = self.mapping
        if hasattr(mapping, "describe"):
            return f"composed:{self.aggregation.describe()}:{mapping.describe()}"
        return f"composed:{self.aggregation.describe()}:<mapping>"


def catalog_ref(
    name: str,
    generator: Generator | None = None,
    negation: Negation | None = None,
) -> REF:
    """A catalog REF by name; ``phi`` needs a generator."""
    if name not in CATALOG_NAMES:
        raise SemanticError(f"unknown catalog REF {name!r}")
    if name == "phi":
        if generator is None:
            raise SemanticError("the phi catalog entry needs a generator")
        # the warped absolute difference commutes with the generator-conjugate
        # negation, not with 1 - x
        default_negation = Negation.conjugate(generator)
    else:
        default_negation = Negation.standard()
    return REF(
        kind="catalog",
        name=name,
        negation=negation or default_negation,
        generator=generator if name == "phi" else None,
    )


def compose_ref(
    aggregation: Aggregation,
    mapping: Callable[[float, float], float],
    negation: Negation | None = None,
) -> REF:
    """G(x,y) = M(f(x,y), f(y,x)); axioms are not implied, only enabled."""
    return REF(
        kind="composed",
        name="composed",
        aggregation=aggregation,
        mapping=mapping,
        negation=negation or Negation.standard(),
    )


def generated_ref(tnorm) -> REF:
    """The similarity-generating form T(I_T(x,y), I_T(y,x)) for one t-norm."""
    return compose_ref(Aggregation.of_tnorm(tnorm), Implication.residuum_of(tnorm))


def generated_family_tnorm(ref: REF) -> TNorm | None:
    """The t-norm T when ``ref`` has the form T(I_T(x,y), I_T(y,x)), else None."""
    if ref.kind != "composed" or ref.aggregation is None:
        return None
    agg = ref.aggregation
    if agg.kind != "tnorm":
        return None
    mapping = ref.mapping
    if (
        isinstance(mapping, Implication)
        and mapping.kind == "residuum"
        and mapping.tnorm == agg.tnorm
    ):
        return agg.tnorm
    return None


@dataclass(frozen=True)
class RefCertificate:
    """Hypothesis reports plus the verdict of the two construction routes.

    ``route`` is ``zero-one`` when M is commutative, one-strict,
    zero-divisor-free and M(0,1)=0, or ``neutral`` when M is commutative
    with neutral element 1; either route additionally needs f to satisfy
    I1, CC, OP and contraposition with N.
    """

    reports: tuple[PropertyReport, ...]
    certified: bool
    route: str | None

    def holds(self, subject_prefix: str, prop: str) -> bool:
        for r in self.reports:
            if r.property == prop and r.subject.startswith(subject_prefix):
                return r.holds
        raise KeyError(f"no report for {subject_prefix}/{prop}")


def check_ref_preconditions(
    aggregation: Aggregation,
    mapping: Implication,
    negation: Negation | None = None,
    grid_step: float = 0.05,
    tolerance: float = PROPERTY_TOL,
) -> RefCertificate:
    """Check every hypothesis the two composition routes need, and certify."""
    negation = negation or Negation.standard()
    m_props = ["commutative", "one-strict", "zero-divisor-free", "zero-one", "neutral-1"]
    f_props = ["I1", "CC", "OP", "CP"]
    reports = [
        check_property(aggregation, p, grid_step, tolerance=tolerance) for p in m_props
    ]
    reports += [
        check_property(mapping, p, grid_step, negation=negation, tolerance=tolerance)
        for p in f_props
    ]
    by_prop = {r.property: r.holds for r in reports}
    f_ok = all(by_prop[p] for p in f_props)
    route = None
    if f_ok and by_prop["commutative"]:
        if by_prop["one-strict"] and by_prop["zero-divisor-free"] and by_prop["zero-one"]:
            route = "zero-one"
        elif by_prop["neutral-1"]:
            route = "neutral"
    return RefCertificate(tuple(reports), route is not None, route)


_REF_PROPS = ("REF1", "REF2", "REF3", "REF4", "REF5")


def validate_ref(
    ref: REF,
    grid_step: float = 0.02,
    tolerance: float = PROPERTY_TOL,
) -> list[PropertyReport]:
    """Check the five REF axioms directly on the grid.

    REF5 is asserted in both directional readings: for x <= y <= z, both
    F(x,z) <= F(x,y) and F(x,z) <= F(y,z).
    """
    grid = unit_grid(grid_step)
    n = len(grid)
    fn = ref._fn
    neg = ref.negation
    table = [[fn(x, y) for y in grid] for x in grid]

    def make(prop, ce):
        return PropertyReport(
            subject=ref.describe(),
            property=prop,
            holds=ce is None,
            counterexample=ce,
            grid_step=grid_step,
            tolerance=tolerance,
        )

    reports = []

    ce = None
    for i in range(n):
        for j in range(n):
            if abs(table[i][j] - table[j][i]) > tolerance:
                ce = (grid[i], grid[j])
                break
        if ce:
            break
    reports.append(make("REF1", ce))

    ce = None
    for i in range(n):
        for j in range(n):
            if (table[i][j] >= 1.0 - tolerance) != (i == j):
                ce = (grid[i], grid[j])
                break
        if ce:
            break
    reports.append(make("REF2", ce))

    ce = None
    for i in range(n):
        for j in range(n):
            x, y = grid[i], grid[j]
            at_corner = (x == 0.0 and y == 1.0) or (x == 1.0 and y == 0.0)
            if (table[i][j] <= tolerance) != at_corner:
                ce = (x, y)
                break
        if ce:
            break
    reports.append(make("REF3", ce))

    ce = None
    for i in range(n):
        for j in range(n):
            x, y = grid[i], grid[j]
            if abs(table[i][j] - fn(neg(x), neg(y))) > tolerance:
                ce = (x, y)
                break
        if ce:
            break
    reports.append(make("REF4", ce))

    ce = None
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                fxz = table[i][k]
                if fxz > table[i][j] + tolerance or fxz > table[j][k] + tolerance:
                    ce = (grid[i], grid[j], grid[k])
                    break
            if ce:
                break
        if ce:
            break
    reports.append(make("REF5", ce))

    return reports


@dataclass(frozen=True)
class Decomposition:
    """A mapping f recovered from a REF so that M(f(x,y), f(y,x)) rebuilds it.

    ``max_mismatch`` is the worst recomposition error observed on the
    check grid; callers that pass ``strict=False`` to ``decompose_ref``
    must consult it before trusting the mapping.
    """

    ref: REF
    aggregation: Aggregation
    mapping: Callable[[float, float], float]
    pseudo_inverse_tolerance: float
    max_mismatch: float

    def recompose(self) -> REF:
        return compose_ref(self.aggregation, self.mapping, self.ref.negation)


def _section_pseudo_inverse(aggregation: Aggregation, z: float, *, iterations: int = 60) -> float:
    """sup{t : M(1, t) <= z} by monotone bisection; empty set gives 0."""
    m = aggregation._fn
    if m(1.0, 0.0) > z:
        return 0.0
    if m(1.0, 1.0) <= z:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if m(1.0, mid) <= z:
            lo = mid
        else:
            hi = mid
    return lo


def decompose_ref(
    ref: REF,
    aggregation: Aggregation,
    *,
    grid_step: float = 0.02,
    tolerance: float = 1e-6,
    pseudo_inverse_tolerance: float = 1e-10,
    strict: bool = True,
) -> Decomposition:
    """Recover f with f(x,y) = 1 for x <= y and the section pseudo-inverse beyond.

    Requires M commutative with a strictly increasing section t -> M(1, t);
    when 1 is neutral for M the pseudo-inverse collapses to the identity and
    f(x,y) = F(x,y) on x > y.  The recomposition M(f(x,y), f(y,x)) is checked
    against F on the grid; with ``strict`` a mismatch beyond ``tolerance``
    raises, otherwise it is recorded in ``max_mismatch``.
    """
    grid = unit_grid(grid_step)
    if not check_property(aggregation, "commutative", grid_step).holds:
        raise DecompositionError(f"{aggregation.describe()} is not commutative")
    m = aggregation._fn
    previous = -1.0
    for t in grid:
        section = m(1.0, t)
        if section <= previous:
            raise DecompositionError(
                f"section t -> M(1, t) of {aggregation.describe()} is not strictly increasing"
            )
        previous = section

    neutral = check_property(aggregation, "neutral-1", grid_step).holds
    fn = ref._fn

    if neutral:
        def mapping(x: float, y: float) -> float:
            return 1.0 if x <= y else fn(x, y)
    else:
        def mapping(x: float, y: float) -> float:
            if x <= y:
                return 1.0
            return _section_pseudo_inverse(aggregation, fn(x, y))

    worst = 0.0
    worst_at = None
    for x in grid:
        for y in grid:
            rebuilt = m(mapping(x, y), mapping(y, x))
            err = abs(rebuilt - fn(x, y))
            if err > worst:
                worst, worst_at = err, (x, y)
    if strict and worst > tolerance:
        raise DecompositionError(
            f"recomposition misses {ref.describe()} by {worst:.3g} at {worst_at}"
        )
    return Decomposition(
        ref=ref,
        aggregation=aggregation,
        mapping=mapping,
        pseudo_inverse_tolerance=pseudo_inverse_tolerance,
        max_mismatch=worst,
    )
