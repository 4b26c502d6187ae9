"""Connective algebra: closed forms, grid-certified laws, property checkers."""

import random

import pytest

from refsim.algebra import (
    Aggregation,
    Generator,
    Implication,
    Negation,
    TNorm,
    check_property,
    clamp_unit,
    residuum,
    residuum_bisect,
    unit_grid,
)
from refsim.errors import SemanticError, UnsupportedConnectiveError

from tests.helpers import residuum_grid_oracle

ALL_TNORMS = [
    TNorm.minimum(),
    TNorm.product(),
    TNorm.lukasiewicz(),
    TNorm.drastic(),
    TNorm.nilpotent_minimum(),
    TNorm.strict(Generator.power(2.0)),
    TNorm.nilpotent(Generator.power(2.0)),
]

RESIDUATED_TNORMS = [t for t in ALL_TNORMS if t.kind != "drastic"]
LEFT_CONTINUOUS = [t for t in ALL_TNORMS if t.is_left_continuous]


class TestUnitValues:
    def test_clamp_accepts_and_clamps(self):
        assert clamp_unit(0.5) == 0.5
        assert clamp_unit(1.0 + 1e-13) == 1.0
        assert clamp_unit(-1e-13) == 0.0

    def test_clamp_rejects_out_of_range(self):
        with pytest.raises(SemanticError):
            clamp_unit(1.1)
        with pytest.raises(SemanticError):
            clamp_unit(-0.2)

    def test_grid_endpoints(self):
        grid = unit_grid(0.02)
        assert grid[0] == 0.0 and grid[-1] == 1.0
        assert len(grid) == 51


class TestNegation:
    def test_standard_values(self):
        n = Negation.standard()
        assert n(0.0) == 1.0
        assert n(0.3) == 0.7
        assert n(n(0.42)) == pytest.approx(0.42, abs=1e-12)

    def test_conjugate_is_strong(self):
        n = Negation.conjugate(Generator.power(2.0))
        assert n.is_strong()
        assert n(0.0) == 1.0 and n(1.0) == 0.0


class TestGenerators:
    def test_identity_and_power_check(self):
        Generator.identity().check()
        Generator.power(2.0).check()
        Generator.power(0.5).check()

    def test_non_positive_exponent_rejected(self):
        with pytest.raises(SemanticError):
            Generator.power(0.0)


class TestTNormValues:
    def test_basic_values(self):
        assert TNorm.lukasiewicz()(0.7, 0.4) == pytest.approx(0.1, abs=1e-12)
        assert TNorm.minimum()(0.3, 0.8) == 0.3
        assert TNorm.product()(0.5, 0.4) == 0.2

    def test_nilpotent_minimum_tie_convention(self):
        """The tie x + y = 1 keeps min(x, y); below the antidiagonal it is 0."""
        t = TNorm.nilpotent_minimum()
        assert t(0.8, 0.4) == 0.4
        assert t(0.4, 0.3) == 0.0
        assert t(0.6, 0.4) == 0.4

    def test_strict_identity_generator_is_product(self):
        rng = random.Random(7)
        strict = TNorm.strict(Generator.identity())
        product = TNorm.product()
        for _ in range(100):
            x, y = rng.random(), rng.random()
            assert abs(strict(x, y) - product(x, y)) <= 1e-12

    def test_fold_left_associative(self):
        t = TNorm.lukasiewicz()
        assert t.fold([0.9, 0.8, 0.7]) == pytest.approx(t(t(0.9, 0.8), 0.7), abs=1e-15)
        assert t.fold([0.42]) == 0.42


class TestTNormLaws:
    @pytest.mark.parametrize("tnorm", ALL_TNORMS, ids=lambda t: t.describe())
    def test_axioms_on_grid(self, tnorm):
        """Commutativity, associativity, monotonicity and neutral 1 hold at step 0.02."""
        for prop in ("commutative", "associative", "monotone", "neutral-1"):
            report = check_property(tnorm, prop, 0.02)
            assert report.holds, (tnorm.describe(), prop, report.counterexample)

    def test_zero_divisors(self):
        assert check_property(TNorm.minimum(), "zero-divisor-free", 0.1).holds
        assert check_property(TNorm.product(), "zero-divisor-free", 0.1).holds
        report = check_property(TNorm.lukasiewicz(), "zero-divisor-free", 0.1)
        assert not report.holds
        x, y = report.counterexample
        assert TNorm.lukasiewicz()(x, y) == 0.0 and x > 0 and y > 0

    def test_left_continuity_probe(self):
        assert check_property(TNorm.lukasiewicz(), "left-continuity", 0.1).holds
        assert not check_property(TNorm.nilpotent_minimum(), "left-continuity", 0.1).holds
        assert not check_property(TNorm.drastic(), "left-continuity", 0.1).holds

    def test_annihilator(self):
        assert check_property(TNorm.product(), "annihilator", 0.1, value=0.0).holds
        assert not check_property(TNorm.product(), "annihilator", 0.1, value=0.5).holds


class TestResiduum:
    def test_closed_form_values(self):
        assert residuum(TNorm.product(), 0.6, 0.3) == pytest.approx(0.5, abs=1e-12)
        assert residuum(TNorm.lukasiewicz(), 0.8, 0.5) == pytest.approx(0.7, abs=1e-12)
        assert residuum(TNorm.minimum(), 0.7, 0.2) == 0.2
        assert residuum(TNorm.minimum(), 0.2, 0.7) == 1.0

    def test_nilpotent_minimum_matches_brute_force(self):
        """sup{a : T(0.6, a) <= 0.2} scanned at step 1e-5 equals max(1-x, y)."""
        t = TNorm.nilpotent_minimum()
        closed = residuum(t, 0.6, 0.2)
        assert closed == pytest.approx(0.4, abs=1e-12)
        assert residuum_grid_oracle(t, 0.6, 0.2) == pytest.approx(closed, abs=2e-5)
        assert residuum_bisect(t, 0.6, 0.2) == pytest.approx(closed, abs=1e-12)

    def test_drastic_rejected(self):
        with pytest.raises(UnsupportedConnectiveError):
            residuum(TNorm.drastic(), 0.5, 0.4)

    @pytest.mark.parametrize("tnorm", RESIDUATED_TNORMS, ids=lambda t: t.describe())
    def test_bisection_agrees_with_closed_form(self, tnorm):
        rng = random.Random(11)
        for _ in range(200):
            x, y = rng.random(), rng.random()
            assert abs(residuum(tnorm, x, y) - residuum_bisect(tnorm, x, y)) <= 1e-8

    def test_named_implications_match_residuum_at_random_pairs(self):
        rng = random.Random(3)
        pairs = [(rng.random(), rng.random()) for _ in range(10_000)]
        named = {
            "minimum": Implication.goedel(),
            "product": Implication.goguen(),
            "lukasiewicz": Implication.lukasiewicz(),
        }
        for kind, imp in named.items():
            t = TNorm(kind)
            for x, y in pairs:
                assert abs(residuum(t, x, y) - imp(x, y)) <= 1e-12

    @pytest.mark.parametrize("tnorm", LEFT_CONTINUOUS, ids=lambda t: t.describe())
    def test_adjunction_on_grid(self, tnorm):
        """T(x, y) <= z exactly when x <= residuum(y, z), at step 0.05."""
        # generator kinds amplify unit roundoff through the root of the
        # generator (sqrt(eps) ~ 1.5e-8), so they get a wider slack
        tol = 1e-6 if tnorm.generator is not None else 1e-9
        grid = unit_grid(0.05)
        for x in grid:
            for y in grid:
                for z in grid:
                    left = tnorm(x, y) <= z + tol
                    right = x <= residuum(tnorm, y, z) + tol
                    assert left == right, (tnorm.describe(), x, y, z)


class TestImplications:
    def test_goedel_branch(self):
        assert Implication.goedel()(0.7, 0.9) == 1.0
        assert Implication.goedel()(0.9, 0.7) == 0.7

    def test_contrapositive_section_variant_of_goguen(self):
        """y below N(x) routes through the contrapositive: (0.8, 0.1) -> 2/9."""
        imp = Implication.modified(Implication.goguen(), "lc")
        assert imp(0.8, 0.1) == pytest.approx(2.0 / 9.0, abs=1e-12)
        assert imp(0.8, 0.5) == pytest.approx(0.625, abs=1e-12)

    def test_u_variant_of_lukasiewicz_is_identity(self):
        imp = Implication.modified(Implication.lukasiewicz(), "u")
        base = Implication.lukasiewicz()
        for x in unit_grid(0.05):
            for y in unit_grid(0.05):
                assert imp(x, y) == pytest.approx(base(x, y), abs=1e-15)

    def test_boundary_conditions_all_kinds(self):
        kinds = [
            Implication.goedel(),
            Implication.goguen(),
            Implication.lukasiewicz(),
            Implication.residuum_of(TNorm.nilpotent_minimum()),
            Implication.modified(Implication.goguen(), "lc"),
        ]
        for imp in kinds:
            assert check_property(imp, "boundary", 0.1).holds
            assert check_property(imp, "I1", 0.1).holds
            assert check_property(imp, "I2", 0.1).holds


class TestPropertyChecker:
    def test_goedel_satisfies_op(self):
        assert check_property(Implication.goedel(), "OP", 0.05).holds

    def test_goguen_fails_contraposition_with_counterexample(self):
        report = check_property(Implication.goguen(), "CP", 0.05, negation=Negation.standard())
        assert not report.holds
        x, y = report.counterexample
        imp, n = Implication.goguen(), Negation.standard()
        assert abs(imp(x, y) - imp(n(y), n(x))) > report.tolerance

    def test_counterexample_is_lexicographically_first(self):
        report = check_property(TNorm.lukasiewicz(), "zero-divisor-free", 0.1)
        assert report.counterexample == (0.1, 0.1)

    def test_arity_mismatch_rejected(self):
        with pytest.raises(SemanticError):
            check_property(Aggregation.mean(), "associative", 0.1)
        with pytest.raises(SemanticError):
            check_property(Implication.goedel(), "CP", 0.1)  # needs a negation

    def test_aggregation_properties(self):
        mean = Aggregation.mean()
        assert check_property(mean, "commutative", 0.05).holds
        assert check_property(mean, "one-strict", 0.05).holds
        assert check_property(mean, "zero-divisor-free", 0.05).holds
        assert not check_property(mean, "zero-one", 0.05).holds
        assert not check_property(mean, "neutral-1", 0.05).holds
        assert check_property(Aggregation.minimum(), "neutral-1", 0.05).holds
        assert check_property(Aggregation.product(), "zero-one", 0.05).holds


# bases satisfying I1, CC, OP whose contrapositive fixes must keep them and gain CP
_CC_OP_BASES = [
    Implication.lukasiewicz(),
    Implication.residuum_of(TNorm.nilpotent(Generator.power(2.0))),
]


class TestModifiedVariantsPreserveProperties:
    @pytest.mark.parametrize("base", _CC_OP_BASES, ids=lambda i: i.describe())
    @pytest.mark.parametrize("variant", ["u", "l", "m", "lc"])
    def test_variants_keep_i1_cc_op_and_gain_cp(self, base, variant):
        modified = Implication.modified(base, variant)
        negation = Negation.standard()
        for prop in ("I1", "CC", "OP"):
            assert check_property(modified, prop, 0.02).holds, (variant, prop)
        assert check_property(modified, "CP", 0.02, negation=negation).holds

    def test_u_and_lc_variants_repair_goguen_zero_set(self):
        """The Goguen implication fails CC; its u and lc fixes restore it."""
        assert not check_property(Implication.goguen(), "CC", 0.05).holds
        for variant in ("u", "lc"):
            fixed = Implication.modified(Implication.goguen(), variant)
            assert check_property(fixed, "CC", 0.05).holds, variant
        # the min variant does not: it inherits the zero at (x, 0)
        assert not check_property(
            Implication.modified(Implication.goguen(), "l"), "CC", 0.05
        ).holds

    def test_residuated_implications_satisfy_ep_and_op(self):
        for tnorm in (TNorm.minimum(), TNorm.product(), TNorm.lukasiewicz()):
            imp = Implication.residuum_of(tnorm)
            assert check_property(imp, "EP", 0.05).holds
            assert check_property(imp, "OP", 0.05).holds
            assert check_property(imp, "NP", 0.05).holds
            assert check_property(imp, "IP", 0.05).holds
