"""Scalar connectives on the unit interval and grid-based property checkers.

Negations, t-norms, residuated implications and aggregation functions are
immutable value objects; evaluation is pure, so everything here is safe for
unrestricted concurrent use.  Algebraic laws are certified empirically: a
checker sweeps a finite grid and either passes or returns the first
counterexample in lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from .errors import SemanticError, UnsupportedConnectiveError

# Absolute tolerance for arithmetic identities (exact closed forms).
UNIT_TOL = 1e-12
# Absolute tolerance for grid-based property certification.
PROPERTY_TOL = 1e-9


def clamp_unit(value: float, *, tol: float = UNIT_TOL, what: str = "value") -> float:
    """Validate that ``value`` lies in [0,1] up to ``tol`` and clamp it."""
    v = float(value)
    if math.isnan(v) or v < -tol or v > 1.0 + tol:
        raise SemanticError(f"{what} {value!r} is outside [0, 1]")
    return min(1.0, max(0.0, v))


def unit_grid(step: float) -> list[float]:
    """The sample grid {0, step, 2*step, ..., 1}."""
    if not 0.0 < step <= 0.5:
        raise SemanticError(f"grid step {step} must lie in (0, 0.5]")
    n = max(1, round(1.0 / step))
    points = [i * step for i in range(n)]
    points.append(1.0)
    return points


@dataclass(frozen=True, eq=False)
class Generator:
    """An increasing bijection of [0,1] together with its exact inverse.

    Generators compare by description: two ``power:2`` instances are
    interchangeable even though their callables are distinct objects.
    """

    forward: Callable[[float], float]
    inverse: Callable[[float], float]
    description: str = "generator"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Generator):
            return NotImplemented
        return self.description == other.description

    def __hash__(self) -> int:
        return hash(("Generator", self.description))

    @staticmethod
    def identity() -> "Generator":
        return Generator(lambda x: x, lambda x: x, "identity")

    @staticmethod
    def power(exponent: float) -> "Generator":
        """x ** p with inverse x ** (1/p); p > 0."""
        if exponent <= 0:
            raise SemanticError("power generator needs a positive exponent")
        inv = 1.0 / exponent
        return Generator(
            lambda x, p=exponent: x**p,
            lambda x, q=inv: x**q,
            f"power:{exponent:g}",
        )

    def check(self, grid_step: float = 0.01, tol: float = PROPERTY_TOL) -> None:
        """Raise if the map is not an increasing bijection on the grid."""
        grid = unit_grid(grid_step)
        if abs(self.forward(0.0)) > tol or abs(self.forward(1.0) - 1.0) > tol:
            raise SemanticError(f"{self.description}: endpoints not fixed")
        previous = -1.0
        for x in grid:
            fx = self.forward(x)
            if fx <= previous:
                raise SemanticError(f"{self.description}: not strictly increasing at {x}")
            if abs(self.inverse(fx) - x) > tol:
                raise SemanticError(f"{self.description}: inverse mismatch at {x}")
            previous = fx


@dataclass(frozen=True)
class Negation:
    """A fuzzy negation; ``standard`` is 1 - x, ``conjugate`` is g⁻¹(1 - g(x))."""

    kind: str = "standard"
    generator: Generator | None = None

    @staticmethod
    def standard() -> "Negation":
        return Negation("standard")

    @staticmethod
    def conjugate(generator: Generator) -> "Negation":
        return Negation("conjugate", generator)

    def __call__(self, x: float) -> float:
        if self.kind == "standard":
            return 1.0 - x
        g = self.generator
        return g.inverse(1.0 - g.forward(x))

    def is_strong(self, grid_step: float = 0.01, tol: float = PROPERTY_TOL) -> bool:
        """N(N(x)) = x on the grid; both built-in kinds are strong."""
        return all(abs(self(self(x)) - x) <= tol for x in unit_grid(grid_step))

    def describe(self) -> str:
        if self.kind == "standard":
            return "standard"
        return f"conjugate:{self.generator.description}"


_TNORM_KINDS = (
    "minimum",
    "product",
    "lukasiewicz",
    "drastic",
    "nilpotent-minimum",
    "strict",
    "nilpotent",
)


@dataclass(frozen=True)
class TNorm:
    """A t-norm, named or generator-built.

    ``strict`` evaluates g⁻¹(g(x)·g(y)); ``nilpotent`` evaluates
    g⁻¹((g(x)+g(y)-1) ∨ 0).  ``nilpotent-minimum`` uses the convention
    that the tie x + y = 1 still takes min(x, y); that convention makes it
    right- rather than left-continuous on the diagonal.
    """

    kind: str
    generator: Generator | None = None

    def __post_init__(self):
        if self.kind not in _TNORM_KINDS:
            raise SemanticError(f"unknown t-norm kind {self.kind!r}")
        if self.kind in ("strict", "nilpotent") and self.generator is None:
            raise SemanticError(f"{self.kind} t-norm needs a generator")

    @staticmethod
    def minimum() -> "TNorm":
        return TNorm("minimum")

    @staticmethod
    def product() -> "TNorm":
        return TNorm("product")

    @staticmethod
    def lukasiewicz() -> "TNorm":
        return TNorm("lukasiewicz")

    @staticmethod
    def drastic() -> "TNorm":
        return TNorm("drastic")

    @staticmethod
    def nilpotent_minimum() -> "TNorm":
        return TNorm("nilpotent-minimum")

    @staticmethod
    def strict(generator: Generator) -> "TNorm":
        return TNorm("strict", generator)

    @staticmethod
    def nilpotent(generator: Generator) -> "TNorm":
        return TNorm("nilpotent", generator)

    @cached_property
    def _fn(self) -> Callable[[float, float], float]:
        kind = self.kind
        if kind == "minimum":
            return lambda x, y: x if x < y else y
        if kind == "product":
            return lambda x, y: x * y
        if kind == "lukasiewicz":
            return lambda x, y: max(0.0, x + y - 1.0)
        if kind == "drastic":
            return lambda x, y: min(x, y) if x == 1.0 or y == 1.0 else 0.0
        if kind == "nilpotent-minimum":
            return lambda x, y: min(x, y) if x + y >= 1.0 else 0.0
        g, g_inv = self.generator.forward, self.generator.inverse
        if kind == "strict":
            return lambda x, y: g_inv(g(x) * g(y))
        return lambda x, y: g_inv(max(0.0, g(x) + g(y) - 1.0))

    def __call__(self, x: float, y: float) -> float:
        return self._fn(x, y)

    def fold(self, values) -> float:
        """Left-associative n-ary evaluation; empty input gives the neutral 1."""
        acc = 1.0
        fn = self._fn
        for i, v in enumerate(values):
            acc = v if i == 0 else fn(acc, v)
        return acc

    @property
    def is_left_continuous(self) -> bool:
        return self.kind in ("minimum", "product", "lukasiewicz", "strict", "nilpotent")

    @property
    def is_continuous_archimedean(self) -> bool:
        return self.kind in ("product", "lukasiewicz", "strict", "nilpotent")

    @property
    def is_strict_kind(self) -> bool:
        return self.kind in ("product", "strict")

    @property
    def is_nilpotent_kind(self) -> bool:
        return self.kind in ("lukasiewicz", "nilpotent")

    def engages_zero_divisor(self, x: float, y: float) -> bool:
        """True when two positive arguments are annihilated to zero."""
        return x > 0.0 and y > 0.0 and self(x, y) == 0.0

    def describe(self) -> str:
        if self.generator is not None:
            return f"{self.kind}:{self.generator.description}"
        return self.kind


def residuum(tnorm: TNorm, x: float, y: float) -> float:
    """sup{a : T(x, a) <= y}, by closed form per kind.

    The drastic t-norm is rejected: its residuum is not an adjoint and the
    closed forms below all rely on the supremum being a well-behaved
    section bound.
    """
    kind = tnorm.kind
    if kind == "drastic":
        raise UnsupportedConnectiveError("the drastic t-norm has no usable residuum")
    if x <= y:
        return 1.0
    if kind == "minimum":
        return y
    if kind == "product":
        return y / x
    if kind == "lukasiewicz":
        return 1.0 - x + y
    if kind == "nilpotent-minimum":
        return max(1.0 - x, y)
    g, g_inv = tnorm.generator.forward, tnorm.generator.inverse
    if kind == "strict":
        return g_inv(g(y) / g(x))
    return g_inv(min(1.0, 1.0 - g(x) + g(y)))


def residuum_bisect(tnorm: TNorm, x: float, y: float, *, iterations: int = 60) -> float:
    """Generic residuum by bisection; the independent check on the closed forms.

    Maintains T(x, lo) <= y < T(x, hi) and returns the lower endpoint, which
    is the supremum of the (left-closed, under left-continuity) feasible set.
    """
    if tnorm(x, 1.0) <= y:
        return 1.0
    lo, hi = 0.0, 1.0
    fn = tnorm._fn
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if fn(x, mid) <= y:
            lo = mid
        else:
            hi = mid
    return lo


_IMPLICATION_KINDS = ("goedel", "goguen", "lukasiewicz", "residuum", "modified")
_MODIFIER_VARIANTS = ("u", "l", "m", "lc")


@dataclass(frozen=True)
class Implication:
    """A fuzzy implication: named, residuum-of-a-t-norm, or a contrapositive fix.

    The four modification variants rebuild a base implication so that it
    commutes with a strong negation:

    * ``u``  - max(f(x,y), f(N(y),N(x)))
    * ``l``  - min(f(x,y), f(N(y),N(x)))
    * ``m``  - min(f(x,y) ∨ N(x), f(N(y),N(x)) ∨ y)
    * ``lc`` - f(N(y),N(x)) when y < N(x), else f(x,y)
    """

    kind: str
    tnorm: TNorm | None = None
    base: "Implication | None" = None
    variant: str | None = None
    negation: Negation | None = None

    def __post_init__(self):
        if self.kind not in _IMPLICATION_KINDS:
            raise SemanticError(f"unknown implication kind {self.kind!r}")
        if self.kind == "residuum" and self.tnorm is None:
            raise SemanticError("residuum implication needs a t-norm")
        if self.kind == "modified":
            if self.base is None or self.negation is None:
                raise SemanticError("modified implication needs a base and a negation")
            if self.variant not in _MODIFIER_VARIANTS:
                raise SemanticError(f"unknown modifier variant {self.variant!r}")

    @staticmethod
    def goedel() -> "Implication":
        return Implication("goedel")

    @staticmethod
    def goguen() -> "Implication":
        return Implication("goguen")

    @staticmethod
    def lukasiewicz() -> "Implication":
        return Implication("lukasiewicz")

    @staticmethod
    def residuum_of(tnorm: TNorm) -> "Implication":
        return Implication("residuum", tnorm=tnorm)

    @staticmethod
    def modified(base: "Implication", variant: str, negation: Negation | None = None) -> "Implication":
        return Implication(
            "modified", base=base, variant=variant, negation=negation or Negation.standard()
        )

    @cached_property
    def _fn(self) -> Callable[[float, float], float]:
        kind = self.kind
        if kind == "goedel":
            return lambda x, y: 1.0 if x <= y else y
        if kind == "goguen":
            return lambda x, y: 1.0 if x <= y else y / x
        if kind == "lukasiewicz":
            return lambda x, y: min(1.0, 1.0 - x + y)
        if kind == "residuum":
            t = self.tnorm
            return lambda x, y: residuum(t, x, y)
        f = self.base._fn
        n = self.negation
        variant = self.variant
        if variant == "u":
            return lambda x, y: max(f(x, y), f(n(y), n(x)))
        if variant == "l":
            return lambda x, y: min(f(x, y), f(n(y), n(x)))
        if variant == "m":
            return lambda x, y: min(max(f(x, y), n(x)), max(f(n(y), n(x)), y))
        return lambda x, y: f(n(y), n(x)) if y < n(x) else f(x, y)

    def __call__(self, x: float, y: float) -> float:
        return self._fn(x, y)

    def describe(self) -> str:
        if self.kind == "residuum":
            return f"residuum:{self.tnorm.describe()}"
        if self.kind == "modified":
            return f"{self.variant}:{self.base.describe()}"
        return self.kind


_AGGREGATION_KINDS = ("minimum", "maximum", "mean", "product", "tnorm")


@dataclass(frozen=True)
class Aggregation:
    """A (binary) aggregation function; n-ary use folds left-associatively.

    For minimum/maximum/product the fold equals the symmetric n-ary form;
    for ``mean`` the fold is the iterated binary mean, which is what the
    two-argument composition machinery needs.
    """

    kind: str
    tnorm: TNorm | None = None

    def __post_init__(self):
        if self.kind not in _AGGREGATION_KINDS:
            raise SemanticError(f"unknown aggregation kind {self.kind!r}")
        if self.kind == "tnorm" and self.tnorm is None:
            raise SemanticError("tnorm aggregation needs a t-norm")

    @staticmethod
    def minimum() -> "Aggregation":
        return Aggregation("minimum")

    @staticmethod
    def maximum() -> "Aggregation":
        return Aggregation("maximum")

    @staticmethod
    def mean() -> "Aggregation":
        return Aggregation("mean")

    @staticmethod
    def product() -> "Aggregation":
        return Aggregation("product")

    @staticmethod
    def of_tnorm(tnorm: TNorm) -> "Aggregation":
        return Aggregation("tnorm", tnorm)

    @cached_property
    def _fn(self) -> Callable[[float, float], float]:
        kind = self.kind
        if kind == "minimum":
            return lambda x, y: x if x < y else y
        if kind == "maximum":
            return lambda x, y: x if x > y else y
        if kind == "mean":
            return lambda x, y: 0.5 * (x + y)
        if kind == "product":
            return lambda x, y: x * y
        return self.tnorm._fn

    def __call__(self, *args: float) -> float:
        if not args:
            raise SemanticError("aggregation needs at least one argument")
        fn = self._fn
        acc = args[0]
        for v in args[1:]:
            acc = fn(acc, v)
        return acc

    def describe(self) -> str:
        if self.kind == "tnorm":
            return f"tnorm:{self.tnorm.describe()}"
        return self.kind


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one grid-certified algebraic property.

    ``counterexample`` is the first violating grid tuple in lexicographic
    order; re-evaluating the property there violates it by more than
    ``tolerance``.
    """

    subject: str
    property: str
    holds: bool
    counterexample: tuple[float, ...] | None
    grid_step: float
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "property": self.property,
            "holds": self.holds,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "grid_step": self.grid_step,
            "tolerance": self.tolerance,
        }


def _report(subject, prop, grid_step, tol, counterexample=None) -> PropertyReport:
    return PropertyReport(
        subject=subject.describe() if hasattr(subject, "describe") else str(subject),
        property=prop,
        holds=counterexample is None,
        counterexample=counterexample,
        grid_step=grid_step,
        tolerance=tol,
    )


def _check_tnorm_like(op, prop, grid, tol, *, associative_ok: bool):
    eq = lambda a, b: abs(a - b) <= tol
    if prop == "commutative":
        for x in grid:
            for y in grid:
                if not eq(op(x, y), op(y, x)):
                    return (x, y)
        return None
    if prop == "associative":
        if not associative_ok:
            raise SemanticError(f"property {prop!r} applies to binary t-norms only")
        for x in grid:
            for y in grid:
                for z in grid:
                    if not eq(op(op(x, y), z), op(x, op(y, z))):
                        return (x, y, z)
        return None
    if prop == "monotone":
        for i, x in enumerate(grid):
            for x2 in grid[i:]:
                for y in grid:
                    if op(x, y) > op(x2, y) + tol or op(y, x) > op(y, x2) + tol:
                        return (x, x2, y)
        return None
    if prop == "neutral-1":
        for x in grid:
            if not eq(op(x, 1.0), x) or not eq(op(1.0, x), x):
                return (x,)
        return None
    if prop == "boundary":
        if not eq(op(0.0, 0.0), 0.0):
            return (0.0, 0.0)
        if not eq(op(1.0, 1.0), 1.0):
            return (1.0, 1.0)
        return None
    if prop == "one-strict":
        for x in grid:
            for y in grid:
                if op(x, y) >= 1.0 - tol and (x < 1.0 - tol or y < 1.0 - tol):
                    return (x, y)
        return None
    if prop == "zero-divisor-free":
        interior = [v for v in grid if 0.0 < v < 1.0]
        for x in interior:
            for y in interior:
                if op(x, y) <= tol:
                    return (x, y)
        return None
    if prop == "zero-one":
        if op(0.0, 1.0) > tol:
            return (0.0, 1.0)
        if op(1.0, 0.0) > tol:
            return (1.0, 0.0)
        return None
    if prop == "left-continuity":
        # Empirical probe: a jump bigger than 1e-3 when backing off by 1e-6.
        h = 1e-6
        for x in grid:
            for y in grid:
                if x >= h and op(x, y) - op(x - h, y) > 1e-3:
                    return (x, y)
                if y >= h and op(x, y) - op(x, y - h) > 1e-3:
                    return (x, y)
        return None
    raise SemanticError(f"unknown t-norm/aggregation property {prop!r}")


def _check_annihilator(op, value, grid, tol):
    for x in grid:
        if abs(op(x, value) - value) > tol or abs(op(value, x) - value) > tol:
            return (x,)
    return None


def _check_implication(imp, prop, grid, tol, negation):
    eq = lambda a, b: abs(a - b) <= tol
    if prop == "I1":
        for i, x in enumerate(grid):
            for x2 in grid[i:]:
                for y in grid:
                    if imp(x2, y) > imp(x, y) + tol:
                        return (x, x2, y)
        return None
    if prop == "I2":
        for j, y in enumerate(grid):
            for y2 in grid[j:]:
                for x in grid:
                    if imp(x, y) > imp(x, y2) + tol:
                        return (x, y, y2)
        return None
    if prop == "boundary":
        for x, y, expected in ((0.0, 0.0, 1.0), (0.0, 1.0, 1.0), (1.0, 0.0, 0.0)):
            if not eq(imp(x, y), expected):
                return (x, y)
        return None
    if prop == "CC":
        for x in grid:
            for y in grid:
                is_zero = imp(x, y) <= tol
                at_corner = x == 1.0 and y == 0.0
                if is_zero != at_corner:
                    return (x, y)
        return None
    if prop == "CP":
        if negation is None:
            raise SemanticError("the contraposition property needs a negation")
        for x in grid:
            for y in grid:
                if not eq(imp(x, y), imp(negation(y), negation(x))):
                    return (x, y)
        return None
    if prop == "EP":
        for x in grid:
            for y in grid:
                for z in grid:
                    if not eq(imp(x, imp(y, z)), imp(y, imp(x, z))):
                        return (x, y, z)
        return None
    if prop == "IP":
        for x in grid:
            if not eq(imp(x, x), 1.0):
                return (x,)
        return None
    if prop == "NP":
        for y in grid:
            if not eq(imp(1.0, y), y):
                return (y,)
        return None
    if prop == "OP":
        for x in grid:
            for y in grid:
                if (imp(x, y) >= 1.0 - tol) != (x <= y):
                    return (x, y)
        return None
    if prop == "LOP":
        for x in grid:
            for y in grid:
                if x <= y and imp(x, y) < 1.0 - tol:
                    return (x, y)
        return None
    raise SemanticError(f"unknown implication property {prop!r}")


def check_property(
    subject,
    property_name: str,
    grid_step: float,
    *,
    negation: Negation | None = None,
    value: float | None = None,
    tolerance: float = PROPERTY_TOL,
) -> PropertyReport:
    """Certify one algebraic property of a connective on a sampled grid."""
    grid = unit_grid(grid_step)
    if isinstance(subject, Implication):
        ce = _check_implication(subject, property_name, grid, tolerance, negation)
    elif isinstance(subject, (TNorm, Aggregation)):
        if property_name == "annihilator":
            if value is None:
                raise SemanticError("the annihilator property needs a value")
            ce = _check_annihilator(subject, value, grid, tolerance)
        else:
            ce = _check_tnorm_like(
                subject,
                property_name,
                grid,
                tolerance,
                associative_ok=isinstance(subject, TNorm),
            )
    else:
        raise SemanticError(f"cannot check properties of {type(subject).__name__}")
    return _report(subject, property_name, grid_step, tolerance, ce)
