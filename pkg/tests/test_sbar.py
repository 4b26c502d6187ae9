"""Flat inference: worked values, oracle agreement, stability bounds."""

import random

import pytest

from refsim.algebra import Implication, TNorm
from refsim.counters import OpCounter
from refsim.errors import SemanticError, UniverseMismatchError
from refsim.fuzzyset import FuzzySet
from refsim.ref import catalog_ref
from refsim.sbar import (
    Rule,
    check_equality_bound,
    infer_flat,
    similarity_difference_bound,
)

from tests.helpers import (
    flat_oracle,
    make_universe,
    random_rule_instance,
    random_set,
    worked_three_input_example,
)


class TestRuleValidation:
    def test_needs_antecedents(self):
        v = make_universe("V", 2)
        with pytest.raises(SemanticError):
            Rule((), FuzzySet(v, (0.5, 0.5)), TNorm.product())

    def test_rejects_non_left_continuous_tnorms(self):
        u, v = make_universe("U", 2), make_universe("V", 2)
        a, b = FuzzySet(u, (0.5, 1.0)), FuzzySet(v, (0.5, 0.5))
        for tnorm in (TNorm.drastic(), TNorm.nilpotent_minimum()):
            with pytest.raises(SemanticError):
                Rule((a,), b, tnorm)

    def test_rejects_unknown_form(self):
        u, v = make_universe("U", 2), make_universe("V", 2)
        with pytest.raises(SemanticError):
            Rule((FuzzySet(u, (1.0, 0.5)),), FuzzySet(v, (0.5, 0.5)), TNorm.product(), form="other")

    def test_derived_connectives(self):
        u, v = make_universe("U", 2), make_universe("V", 2)
        rule = Rule((FuzzySet(u, (1.0, 0.5)),), FuzzySet(v, (0.5, 0.5)), TNorm.product())
        assert rule.implication == Implication.residuum_of(TNorm.product())
        assert rule.uses_generated_ref


class TestInferFlat:
    def test_worked_three_input_example(self):
        rule, inputs = worked_three_input_example()
        result = infer_flat(rule, inputs)
        assert result.similarity == pytest.approx(10.0 / 63.0, abs=1e-12)
        assert result.antecedent_similarities == pytest.approx(
            (5.0 / 9.0, 2.0 / 3.0, 3.0 / 7.0), abs=1e-12
        )
        assert result.output.memberships == pytest.approx((1.0,) * 4, abs=1e-12)

    def test_identical_inputs_give_full_similarity(self):
        rule, _ = worked_three_input_example()
        result = infer_flat(rule, list(rule.antecedents))
        assert result.similarity == 1.0
        # at similarity 1 the output is the reduced relation itself
        imp = rule.implication
        peak = 0.36
        expected = tuple(imp(peak, b) for b in rule.consequent.memberships)
        assert result.output.memberships == pytest.approx(expected, abs=1e-12)

    def test_crisp_match_returns_consequent(self):
        """A crisp singleton matching itself fires the rule exactly."""
        u, v = make_universe("U", 3), make_universe("V", 3)
        a = FuzzySet(u, (0.0, 1.0, 0.0))
        b = FuzzySet(v, (0.3, 0.7, 0.2))
        for tnorm in (TNorm.minimum(), TNorm.product(), TNorm.lukasiewicz()):
            rule = Rule((a,), b, tnorm, form="conjunction")
            result = infer_flat(rule, [a])
            assert result.output.memberships == pytest.approx(b.memberships, abs=1e-12)

    @pytest.mark.parametrize("form", ["implication", "conjunction"])
    @pytest.mark.parametrize("mode", ["t-combined", "product-direct"])
    @pytest.mark.parametrize(
        "tnorm", [TNorm.minimum(), TNorm.product(), TNorm.lukasiewicz()], ids=lambda t: t.kind
    )
    def test_matches_bruteforce_oracle(self, form, mode, tnorm):
        """The peak-reduced engine equals cell-by-cell evaluation."""
        rng = random.Random(29)
        for _ in range(25):
            rule, inputs = random_rule_instance(rng, rng.randint(1, 3), tnorm, form)
            result = infer_flat(rule, inputs, mode)
            expected, s = flat_oracle(rule, inputs, mode)
            assert result.similarity == pytest.approx(s, abs=1e-12)
            assert result.output.memberships == pytest.approx(
                expected.memberships, abs=1e-12
            )

    def test_output_antitone_in_similarity(self):
        """Raising the firing similarity never raises the implication output."""
        rule, inputs = worked_three_input_example()
        low = infer_flat(rule, inputs)
        high = infer_flat(rule, list(rule.antecedents))
        assert high.similarity > low.similarity
        for lo_v, hi_v in zip(low.output.memberships, high.output.memberships):
            assert lo_v >= hi_v - 1e-12

    def test_empty_input_rejected(self):
        u, v = make_universe("U", 2), make_universe("V", 2)
        rule = Rule((FuzzySet(u, (1.0, 0.5)),), FuzzySet(v, (0.5, 0.5)), TNorm.product())
        with pytest.raises(SemanticError):
            infer_flat(rule, [FuzzySet(u, (0.0, 0.0))])

    def test_universe_mismatch_rejected(self):
        u, v, w = make_universe("U", 2), make_universe("V", 2), make_universe("W", 2)
        rule = Rule((FuzzySet(u, (1.0, 0.5)),), FuzzySet(v, (0.5, 0.5)), TNorm.product())
        with pytest.raises(UniverseMismatchError):
            infer_flat(rule, [FuzzySet(w, (1.0, 0.5))])
        with pytest.raises(SemanticError):
            infer_flat(rule, [])

    def test_counter_neutrality(self):
        """Passing a counter changes nothing about the numbers."""
        rule, inputs = worked_three_input_example()
        counted = infer_flat(rule, inputs, counter=OpCounter())
        plain = infer_flat(rule, inputs)
        assert counted.output.memberships == plain.output.memberships
        assert counted.similarity == plain.similarity


class TestStabilityBounds:
    def _single_rule(self, tnorm, form="conjunction"):
        u, v = make_universe("U", 4), make_universe("V", 3)
        rng = random.Random(31)
        antecedent = random_set(rng, u, 0.05)
        consequent = random_set(rng, v, 0.05)
        return Rule((antecedent,), consequent, tnorm, form=form), u, v

    def test_unperturbed_bound_is_tight(self):
        rule, u, v = self._single_rule(TNorm.lukasiewicz())
        a_in = rule.antecedents[0]
        report = check_equality_bound(rule, a_in, a_in, rule.antecedents[0], rule.consequent)
        assert report.beta == 1.0
        assert report.bound == 1.0
        assert report.output_similarity == 1.0
        assert report.holds

    @pytest.mark.parametrize("tnorm", [TNorm.lukasiewicz(), TNorm.product()], ids=lambda t: t.kind)
    @pytest.mark.parametrize("form", ["conjunction", "implication"])
    def test_random_perturbations_respect_bound(self, tnorm, form):
        rule, u, v = self._single_rule(tnorm, form)
        rng = random.Random(37)
        for _ in range(100):
            report = check_equality_bound(
                rule,
                random_set(rng, u, 0.05),
                random_set(rng, u, 0.05),
                random_set(rng, u, 0.05),
                random_set(rng, v, 0.05),
            )
            assert report.holds, report

    def test_bound_requires_single_antecedent(self):
        rule, inputs = worked_three_input_example()
        with pytest.raises(SemanticError):
            check_equality_bound(
                rule, inputs[0], inputs[0], rule.antecedents[0], rule.consequent
            )

    def test_similarity_difference_bound(self):
        u = make_universe("U", 3)
        ref = catalog_ref("F2")
        a = FuzzySet(u, (0.7, 0.8, 0.4))
        b = FuzzySet(u, (0.9, 0.6, 0.6))
        holds, margin = similarity_difference_bound(ref, a, b, a, b)
        assert holds and margin == pytest.approx(0.0, abs=1e-12)
        rng = random.Random(41)
        for _ in range(300):
            sets = [random_set(rng, u) for _ in range(4)]
            holds, _ = similarity_difference_bound(ref, *sets)
            assert holds
