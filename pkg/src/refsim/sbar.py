"""Flat similarity-based inference for a single multi-antecedent if-then rule.

The rule's relation is read either as a conjunction (output is a supremum
over the joint universe) or as an implication (output is an infimum), and
the firing strength is the similarity between the inputs and the rule
antecedents.  The similarity can be combined per antecedent through the
rule's t-norm, or measured directly on the materialized product universe.

Because universes are finite and the residuated implication is monotone,
the inner sup/inf over the joint universe collapses onto the peak of the
materialized antecedent; the engine exploits that, and the brute-force
evaluation over every cell is kept in the test suite as the independent
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .algebra import Implication, TNorm
from .counters import OpCounter
from .errors import SemanticError, UniverseMismatchError
from .fuzzyset import DEFAULT_CELL_CAP, FuzzySet, product_extend, similarity
from .ref import REF, generated_ref

RULE_FORMS = ("implication", "conjunction")
SIMILARITY_MODES = ("t-combined", "product-direct")


@dataclass(frozen=True)
class Rule:
    """One if-then rule: antecedents over distinct universes, one consequent.

    The t-norm interprets the rule's AND; its residuum and the generated
    equivalence function T(I_T(x,y), I_T(y,x)) follow from it unless an
    explicit similarity REF is supplied.
    """

    antecedents: tuple[FuzzySet, ...]
    consequent: FuzzySet
    tnorm: TNorm
    form: str = "implication"
    similarity_ref: REF | None = None

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(self.antecedents))
        if not self.antecedents:
            raise SemanticError("a rule needs at least one antecedent")
        if self.form not in RULE_FORMS:
            raise SemanticError(f"unknown rule form {self.form!r}")
        if not self.tnorm.is_left_continuous:
            raise SemanticError(
                f"rule t-norm must be left continuous, got {self.tnorm.describe()}"
            )

    @property
    def n_antecedents(self) -> int:
        return len(self.antecedents)

    @cached_property
    def implication(self) -> Implication:
        return Implication.residuum_of(self.tnorm)

    @cached_property
    def ref(self) -> REF:
        return self.similarity_ref or generated_ref(self.tnorm)

    @property
    def uses_generated_ref(self) -> bool:
        return self.similarity_ref is None


@dataclass(frozen=True)
class InferenceResult:
    """Inferred consequent plus provenance.

    ``antecedent_similarities`` is None when the similarity was measured
    directly on the product universe.  ``zero_divisor_cells`` lists
    (stage antecedent index, element label, output label) triples where a
    nilpotent t-norm annihilated positive arguments, which voids the
    stagewise/flat exchange guarantee at those cells.
    """

    output: FuzzySet
    similarity: float
    antecedent_similarities: tuple[float, ...] | None
    intermediates: tuple[FuzzySet, ...]
    counter: OpCounter
    zero_divisor_cells: tuple[tuple[int, str, str], ...] = field(default=())


def _validate_inputs(rule: Rule, inputs: list[FuzzySet]) -> None:
    if len(inputs) != rule.n_antecedents:
        raise SemanticError(
            f"rule has {rule.n_antecedents} antecedents but got {len(inputs)} inputs"
        )
    for i, (given, wanted) in enumerate(zip(inputs, rule.antecedents)):
        if given.universe != wanted.universe:
            raise UniverseMismatchError(
                f"input {i + 1} lives on {given.universe.name!r}, "
                f"antecedent on {wanted.universe.name!r}"
            )
        if given.is_empty:
            raise SemanticError(f"input {i + 1} is empty (all memberships zero)")


def infer_flat(
    rule: Rule,
    inputs: list[FuzzySet],
    similarity_mode: str = "t-combined",
    *,
    cap: int = DEFAULT_CELL_CAP,
    counter: OpCounter | None = None,
) -> InferenceResult:
    """Run the flat method over the materialized product universe.

    ``t-combined`` folds per-antecedent similarities through the rule's
    t-norm; ``product-direct`` materializes both product extensions and
    measures one similarity on the joint universe.
    """
    if similarity_mode not in SIMILARITY_MODES:
        raise SemanticError(f"unknown similarity mode {similarity_mode!r}")
    _validate_inputs(rule, inputs)
    counter = counter if counter is not None else OpCounter()
    tnorm = rule.tnorm
    imp = rule.implication._fn
    ref = rule.ref
    n = rule.n_antecedents
    labels = [f"A{i + 1}" for i in range(n)]

    per_antecedent: tuple[float, ...] | None
    if similarity_mode == "t-combined":
        sims = tuple(
            similarity(ref, a_in, a_rule, counter=counter, label=f"S(A'{i + 1},A{i + 1})")
            for i, (a_in, a_rule) in enumerate(zip(inputs, rule.antecedents))
        )
        s = tnorm.fold(sims)
        if n > 1:
            counter.record("s", tnorms=n - 1)
        per_antecedent = sims
        joined = product_extend(list(rule.antecedents), tnorm, cap=cap, counter=counter, labels=labels)
    else:
        joined = product_extend(list(rule.antecedents), tnorm, cap=cap, counter=counter, labels=labels)
        joined_inputs = product_extend(
            list(inputs), tnorm, cap=cap, counter=counter, labels=[f"A'{i + 1}" for i in range(n)]
        )
        s = similarity(ref, joined_inputs, joined, counter=counter, label="S(A',A)")
        per_antecedent = None

    peak = joined.max_membership
    counter.record("a", comparisons=joined.universe.size - 1)

    consequent = rule.consequent
    m = consequent.universe.size
    if rule.form == "implication":
        reduced = tuple(imp(peak, b) for b in consequent.memberships)
        counter.record("I(a,B)", implications=m)
    else:
        tn = tnorm._fn
        reduced = tuple(tn(peak, b) for b in consequent.memberships)
        counter.record("T(a,B)", tnorms=m)
    modified = FuzzySet(consequent.universe, reduced)

    out = tuple(imp(s, v) for v in modified.memberships)
    counter.record("B'", implications=m)

    return InferenceResult(
        output=FuzzySet(consequent.universe, out),
        similarity=s,
        antecedent_similarities=per_antecedent,
        intermediates=(modified,),
        counter=counter,
    )


@dataclass(frozen=True)
class BoundReport:
    """Numbers behind one perturbation-stability check of the flat method."""

    alpha2: float
    alpha3: float
    beta: float
    bound: float
    output_similarity: float
    holds: bool


def check_equality_bound(
    rule: Rule,
    input_primary: FuzzySet,
    input_secondary: FuzzySet,
    antecedent_variant: FuzzySet,
    consequent_variant: FuzzySet,
    *,
    tolerance: float = 1e-9,
) -> BoundReport:
    """Perturb a single-antecedent rule everywhere and bound the output drift.

    With alpha2 the antecedent similarity, alpha3 the consequent similarity
    and beta the equivalence of the two firing strengths, the outputs of the
    original and the perturbed inference stay at least T(beta, alpha2,
    alpha3)-similar.
    """
    if rule.n_antecedents != 1:
        raise SemanticError("the equality bound applies to single-antecedent rules")
    if not rule.uses_generated_ref:
        raise SemanticError("the equality bound needs the t-norm-generated similarity")
    ref = rule.ref
    tnorm = rule.tnorm
    antecedent = rule.antecedents[0]

    alpha2 = similarity(ref, antecedent, antecedent_variant)
    alpha3 = similarity(ref, rule.consequent, consequent_variant)
    s_primary = similarity(ref, input_primary, antecedent)
    s_secondary = similarity(ref, input_secondary, antecedent_variant)
    beta = ref(s_primary, s_secondary)

    variant_rule = Rule(
        antecedents=(antecedent_variant,),
        consequent=consequent_variant,
        tnorm=tnorm,
        form=rule.form,
    )
    out_primary = infer_flat(rule, [input_primary]).output
    out_secondary = infer_flat(variant_rule, [input_secondary]).output

    bound = tnorm.fold((beta, alpha2, alpha3))
    achieved = similarity(ref, out_primary, out_secondary)
    return BoundReport(
        alpha2=alpha2,
        alpha3=alpha3,
        beta=beta,
        bound=bound,
        output_similarity=achieved,
        holds=achieved >= bound - tolerance,
    )


def similarity_difference_bound(
    ref: REF,
    a: FuzzySet,
    b: FuzzySet,
    a2: FuzzySet,
    b2: FuzzySet,
    *,
    tolerance: float = 1e-9,
) -> tuple[bool, float]:
    """|S(a,b) - S(a2,b2)| <= 2 - S(a,a2) - S(b,b2); returns (holds, margin)."""
    lhs = abs(similarity(ref, a, b) - similarity(ref, a2, b2))
    rhs = 2.0 - similarity(ref, a, a2) - similarity(ref, b, b2)
    margin = rhs - lhs
    return margin >= -tolerance, margin
