"""Shared builders, fixtures, and independent oracles for the test suite.

The oracles here deliberately avoid the production shortcuts: the flat
oracle evaluates every cell of the joint universe, and the residuum oracle
scans a fine argument grid for the supremum.  Expected values asserted in
the tests were computed with these oracles and then frozen.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from refsim import (
    FuzzyRelation,
    FuzzySet,
    Rule,
    Universe,
    compose_ref,
    generated_ref,
    product_extend,
    similarity,
)
from refsim.algebra import Aggregation, Implication, TNorm

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


def make_universe(name: str, size: int) -> Universe:
    return Universe(name, tuple(f"{name}.{i + 1}" for i in range(size)))


def random_set(rng: random.Random, universe: Universe, lo: float = 0.0, hi: float = 1.0) -> FuzzySet:
    return FuzzySet(universe, tuple(rng.uniform(lo, hi) for _ in universe.labels))


def random_normal_set(rng: random.Random, universe: Universe, lo: float = 0.05) -> FuzzySet:
    """A random set with peak membership exactly 1."""
    values = [rng.uniform(lo, 1.0) for _ in universe.labels]
    values[rng.randrange(len(values))] = 1.0
    return FuzzySet(universe, tuple(values))


def worked_three_input_example():
    """The bundled three-antecedent product-rule instance, built in memory."""
    u1 = Universe("X1", ("x1.1", "x1.2", "x1.3", "x1.4"))
    u2 = Universe("X2", ("x2.1", "x2.2", "x2.3", "x2.4", "x2.5"))
    u3 = Universe("X3", ("x3.1", "x3.2", "x3.3"))
    v = Universe("Y", ("y1", "y2", "y3", "y4"))
    rule = Rule(
        antecedents=(
            FuzzySet(u1, (1.0, 0.9, 0.6, 0.7)),
            FuzzySet(u2, (0.4, 0.4, 0.6, 0.5, 0.3)),
            FuzzySet(u3, (0.6, 0.3, 0.5)),
        ),
        consequent=FuzzySet(v, (0.3, 0.4, 0.2, 0.1)),
        tnorm=TNorm.product(),
        form="implication",
    )
    inputs = [
        FuzzySet(u1, (0.8, 0.5, 0.7, 0.9)),
        FuzzySet(u2, (0.5, 0.6, 0.7, 0.4, 0.4)),
        FuzzySet(u3, (0.8, 0.7, 0.9)),
    ]
    return rule, inputs


def cri_example():
    """The bundled composition instance: sets, relation, and connectives."""
    doc = load_fixture("cri_similarity_drop.json")
    universe = Universe(doc["universe"]["id"], tuple(doc["universe"]["labels"]))
    target = Universe(doc["target"]["id"], tuple(doc["target"]["labels"]))
    a = FuzzySet(universe, tuple(doc["sets"]["A"]))
    a_variant = FuzzySet(universe, tuple(doc["sets"]["A_variant"]))
    relation = FuzzyRelation(universe, target, tuple(tuple(row) for row in doc["relation"]))
    return doc, a, a_variant, relation


# The three similarity families exercised by the randomized property suites:
# (name, combining t-norm, equivalence function).  The first two use the
# residuum pair of the same t-norm; the third combines the bounded-sum
# implication through the minimum, which evaluates to the same function as
# the lukasiewicz pair.
def similarity_families():
    return (
        (
            "minimum/lukasiewicz",
            TNorm.lukasiewicz(),
            compose_ref(Aggregation.minimum(), Implication.lukasiewicz()),
        ),
        ("product/goguen", TNorm.product(), generated_ref(TNorm.product())),
        ("lukasiewicz/lukasiewicz", TNorm.lukasiewicz(), generated_ref(TNorm.lukasiewicz())),
    )


def residuum_grid_oracle(tnorm: TNorm, x: float, y: float, step: float = 1e-5) -> float:
    """Brute-force sup{a : T(x, a) <= y} over an argument grid."""
    best = 0.0
    n = round(1.0 / step)
    for i in range(n + 1):
        a = min(1.0, i * step)
        if tnorm(x, a) <= y:
            best = max(best, a)
    return best


def flat_oracle(rule: Rule, inputs, similarity_mode: str = "t-combined"):
    """Direct flat evaluation: no peak reduction, every joint cell visited."""
    ref = rule.ref
    tnorm = rule.tnorm
    imp = rule.implication
    if similarity_mode == "t-combined":
        sims = [
            similarity(ref, given, wanted)
            for given, wanted in zip(inputs, rule.antecedents)
        ]
        s = tnorm.fold(sims)
    else:
        joined_inputs = product_extend(list(inputs), tnorm)
        joined_rule = product_extend(list(rule.antecedents), tnorm)
        s = similarity(ref, joined_inputs, joined_rule)
    joined = product_extend(list(rule.antecedents), tnorm)
    out = []
    for b in rule.consequent.memberships:
        if rule.form == "implication":
            cells = [imp(s, imp(a, b)) for a in joined.memberships]
            out.append(min(cells))
        else:
            cells = [imp(s, tnorm(a, b)) for a in joined.memberships]
            out.append(max(cells))
    return FuzzySet(rule.consequent.universe, tuple(out)), s


def random_rule_instance(
    rng: random.Random,
    n: int,
    tnorm: TNorm,
    form: str,
    *,
    membership_lo: float = 0.05,
    normal_antecedents: bool = False,
    size_lo: int = 2,
    size_hi: int = 5,
    m: int | None = None,
):
    """A random rule plus matching inputs over universes of size 2..5."""
    universes = [make_universe(f"U{i + 1}", rng.randint(size_lo, size_hi)) for i in range(n)]
    out_universe = make_universe("V", m if m is not None else rng.randint(size_lo, size_hi))
    if normal_antecedents:
        antecedents = tuple(random_normal_set(rng, u, membership_lo) for u in universes)
    else:
        antecedents = tuple(random_set(rng, u, membership_lo, 1.0) for u in universes)
    consequent = random_set(rng, out_universe, membership_lo, 1.0)
    rule = Rule(antecedents, consequent, tnorm, form=form)
    inputs = [random_set(rng, u, membership_lo, 1.0) for u in universes]
    return rule, inputs
