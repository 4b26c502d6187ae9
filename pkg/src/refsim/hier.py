"""Stagewise inference and the functional equations that justify it.

Instead of materializing the joint antecedent universe, the hierarchical
engines thread the consequent through one stage per antecedent, so cost
grows linearly in the number of antecedents rather than exponentially.
The stage/flat agreement rests on two functional equations of the
connectives, checked here on grids:

* factorization  I(T(x,y), T(x',y')) = T(I(x,x'), I(y,y'))   for x>x', y>y'
* exchange       I(x, T(y,z)) = T(y, I(x,z))                  for x>z

For nilpotent t-norms both laws need the engaged pairs to be free of zero
divisors; the checkers apply that restriction and also report whether the
unrestricted grid violates the law.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Implication, TNorm, unit_grid
from .counters import OpCounter
from .errors import SemanticError
from .fuzzyset import FuzzySet, is_subset, product_extend, similarity
from .ref import REF, generated_family_tnorm, generated_ref
from .sbar import InferenceResult, Rule, _validate_inputs


def _resolve_stage_order(rule: Rule, stage_order) -> tuple[int, ...]:
    n = rule.n_antecedents
    if stage_order is None:
        return tuple(range(n - 1, -1, -1))
    order = tuple(stage_order)
    if sorted(order) != list(range(n)):
        raise SemanticError(f"stage order {order} is not a permutation of 0..{n - 1}")
    return order


def _hier_infer(
    rule: Rule,
    inputs: list[FuzzySet],
    stage_order,
    sup_reduction: bool,
    counter: OpCounter | None,
    conjunction: bool,
) -> InferenceResult:
    _validate_inputs(rule, inputs)
    order = _resolve_stage_order(rule, stage_order)
    counter = counter if counter is not None else OpCounter()
    imp = rule.implication._fn
    tn = rule.tnorm._fn
    ref = rule.ref
    track_zero_divisors = conjunction and rule.tnorm.is_nilpotent_kind

    sims = tuple(
        similarity(ref, a_in, a_rule, counter=counter, label=f"S(A'{i + 1},A{i + 1})")
        for i, (a_in, a_rule) in enumerate(zip(inputs, rule.antecedents))
    )
    if sup_reduction:
        peaks = []
        for i, antecedent in enumerate(rule.antecedents):
            peaks.append(antecedent.max_membership)
            counter.record(f"sup A{i + 1}", comparisons=antecedent.universe.size - 1)

    consequent = rule.consequent
    out_labels = consequent.universe.labels
    m = consequent.universe.size
    current = consequent.memberships
    intermediates = []
    zero_cells: list[tuple[int, str, str]] = []

    for i in order:
        s_i = sims[i]
        antecedent = rule.antecedents[i]
        if sup_reduction:
            a_i = peaks[i]
            values = []
            for j, b in enumerate(current):
                inner = tn(a_i, b) if conjunction else imp(a_i, b)
                if track_zero_divisors and a_i > 0.0 and b > 0.0 and inner == 0.0:
                    zero_cells.append((i, "sup", out_labels[j]))
                values.append(imp(s_i, inner))
            counter.record(f"B'(A{i + 1})", implications=2 * m if not conjunction else m,
                           tnorms=m if conjunction else 0)
        else:
            u = antecedent.universe.size
            values = []
            for j, b in enumerate(current):
                cell_values = []
                for x_idx, a_x in enumerate(antecedent.memberships):
                    inner = tn(a_x, b) if conjunction else imp(a_x, b)
                    if track_zero_divisors and a_x > 0.0 and b > 0.0 and inner == 0.0:
                        zero_cells.append(
                            (i, antecedent.universe.labels[x_idx], out_labels[j])
                        )
                    cell_values.append(imp(s_i, inner))
                values.append(max(cell_values) if conjunction else min(cell_values))
            counter.record(
                f"B'(A{i + 1})",
                implications=(2 * u * m) if not conjunction else u * m,
                tnorms=u * m if conjunction else 0,
                comparisons=(u - 1) * m,
            )
        current = tuple(values)
        intermediates.append(FuzzySet(consequent.universe, current))

    return InferenceResult(
        output=intermediates[-1],
        similarity=rule.tnorm.fold(sims),
        antecedent_similarities=sims,
        intermediates=tuple(intermediates),
        counter=counter,
        zero_divisor_cells=tuple(zero_cells),
    )


def infer_hier_implication(
    rule: Rule,
    inputs: list[FuzzySet],
    *,
    stage_order=None,
    sup_reduction: bool = True,
    counter: OpCounter | None = None,
) -> InferenceResult:
    """Stagewise inf-chain for the implication reading of the rule.

    Each stage rewrites the running consequent as
    ``inf over x_i of I(s_i, I(A_i(x_i), B(y)))``; with ``sup_reduction``
    the inner inf collapses to ``I(sup A_i, B(y))``, which is exact because
    the implication is non-increasing in its first argument and universes
    are finite.  The default stage order processes the last antecedent
    first.
    """
    if rule.form != "implication":
        raise SemanticError("this method needs a rule in implication form")
    return _hier_infer(rule, inputs, stage_order, sup_reduction, counter, conjunction=False)


def infer_hier_conjunction(
    rule: Rule,
    inputs: list[FuzzySet],
    *,
    stage_order=None,
    sup_reduction: bool = True,
    counter: OpCounter | None = None,
) -> InferenceResult:
    """Stagewise sup-chain for the conjunction reading of the rule.

    Each stage computes ``sup over x_i of I(s_i, T(A_i(x_i), B(y)))``.
    Requires a continuous Archimedean t-norm; for nilpotent kinds, cells
    whose conjunction collapses to zero through a zero divisor are
    reported in ``zero_divisor_cells`` because the stagewise/flat
    agreement is not guaranteed there.
    """
    if rule.form != "conjunction":
        raise SemanticError("this method needs a rule in conjunction form")
    if not rule.tnorm.is_continuous_archimedean:
        raise SemanticError(
            f"the conjunction-form stagewise method needs a continuous Archimedean "
            f"t-norm, got {rule.tnorm.describe()}"
        )
    return _hier_infer(rule, inputs, stage_order, sup_reduction, counter, conjunction=True)


@dataclass(frozen=True)
class EquationReport:
    """Grid verdict for one functional equation of a connective pair.

    ``holds`` refers to the restricted domain when one applies;
    ``unrestricted_holds`` reports the full grid for nilpotent kinds,
    where engaged zero divisors are expected to break the law.
    """

    equation: str
    connective: str
    holds: bool
    counterexample: tuple[float, ...] | None
    grid_step: float
    tolerance: float
    restricted_domain: str = "none"
    unrestricted_holds: bool | None = None
    unrestricted_counterexample: tuple[float, ...] | None = None

    def as_dict(self) -> dict:
        return {
            "equation": self.equation,
            "connective": self.connective,
            "holds": self.holds,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "grid_step": self.grid_step,
            "tolerance": self.tolerance,
            "restricted_domain": self.restricted_domain,
            "unrestricted_holds": self.unrestricted_holds,
            "unrestricted_counterexample": (
                list(self.unrestricted_counterexample)
                if self.unrestricted_counterexample
                else None
            ),
        }


def _factorization_scan(grid, tn, imp, tol, restricted):
    """First quadruple (x, x', y, y') with x>x', y>y' violating factorization."""
    n = len(grid)
    pairs = [(i, i2) for i in range(n) for i2 in range(i)]  # grid[i] > grid[i2]
    t_table = [[tn(a, b) for b in grid] for a in grid]
    i_pairs = [[imp(a, b) for b in grid] for a in grid]
    for i, i2 in pairs:
        trow_i = t_table[i]
        trow_i2 = t_table[i2]
        left_imp = i_pairs[i][i2]
        for j, j2 in pairs:
            u = trow_i[j]
            v = trow_i2[j2]
            if restricted and (u <= 0.0 or v <= 0.0):
                continue
            if abs(imp(u, v) - tn(left_imp, i_pairs[j][j2])) > tol:
                return (grid[i], grid[i2], grid[j], grid[j2])
    return None


def check_factorization(
    tnorm: TNorm,
    grid_step: float,
    *,
    tolerance: float = 1e-9,
) -> EquationReport:
    """Check I(T(x,y), T(x',y')) = T(I(x,x'), I(y,y')) over grid quadruples."""
    imp = Implication.residuum_of(tnorm)._fn
    tn = tnorm._fn
    grid = unit_grid(grid_step)
    if tnorm.is_nilpotent_kind:
        ce = _factorization_scan(grid, tn, imp, tolerance, restricted=True)
        un_ce = _factorization_scan(grid, tn, imp, tolerance, restricted=False)
        return EquationReport(
            equation="factorization",
            connective=tnorm.describe(),
            holds=ce is None,
            counterexample=ce,
            grid_step=grid_step,
            tolerance=tolerance,
            restricted_domain="pairs (x,y) and (x',y') with a positive conjunction",
            unrestricted_holds=un_ce is None,
            unrestricted_counterexample=un_ce,
        )
    ce = _factorization_scan(grid, tn, imp, tolerance, restricted=False)
    return EquationReport(
        equation="factorization",
        connective=tnorm.describe(),
        holds=ce is None,
        counterexample=ce,
        grid_step=grid_step,
        tolerance=tolerance,
    )


def _exchange_scan(grid, tn, imp, tol, restricted):
    """First triple (x, y, z) with x>z violating the exchange law."""
    n = len(grid)
    for i in range(n):
        x = grid[i]
        for k in range(i):  # z = grid[k] < x
            z = grid[k]
            ixz = imp(x, z)
            for y in grid:
                if restricted and tn(y, z) <= 0.0:
                    continue
                if abs(imp(x, tn(y, z)) - tn(y, ixz)) > tol:
                    return (x, y, z)
    return None


def check_exchange(
    tnorm: TNorm,
    grid_step: float,
    *,
    tolerance: float = 1e-9,
) -> EquationReport:
    """Check I(x, T(y,z)) = T(y, I(x,z)) over grid triples with x > z."""
    imp = Implication.residuum_of(tnorm)._fn
    tn = tnorm._fn
    grid = unit_grid(grid_step)
    if tnorm.is_nilpotent_kind:
        ce = _exchange_scan(grid, tn, imp, tolerance, restricted=True)
        un_ce = _exchange_scan(grid, tn, imp, tolerance, restricted=False)
        return EquationReport(
            equation="exchange",
            connective=tnorm.describe(),
            holds=ce is None,
            counterexample=ce,
            grid_step=grid_step,
            tolerance=tolerance,
            restricted_domain="pairs (y,z) with a positive conjunction",
            unrestricted_holds=un_ce is None,
            unrestricted_counterexample=un_ce,
        )
    ce = _exchange_scan(grid, tn, imp, tolerance, restricted=False)
    return EquationReport(
        equation="exchange",
        connective=tnorm.describe(),
        holds=ce is None,
        counterexample=ce,
        grid_step=grid_step,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class DistributivityReport:
    """Both sides of the similarity-splitting identity on one instance.

    ``relation`` is "equal", "lhs-greater" or "rhs-greater", comparing the
    joint-universe similarity (lhs) against the t-norm combination of the
    per-antecedent similarities (rhs).
    """

    connective: str
    lhs: float
    rhs: float
    relation: str
    inputs_nested_in_antecedents: bool
    antecedents_nested_in_inputs: bool
    zero_divisors_engaged: bool
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.relation == "equal"

    def as_dict(self) -> dict:
        return {
            "connective": self.connective,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "inputs_nested_in_antecedents": self.inputs_nested_in_antecedents,
            "antecedents_nested_in_inputs": self.antecedents_nested_in_inputs,
            "zero_divisors_engaged": self.zero_divisors_engaged,
            "tolerance": self.tolerance,
        }


def check_similarity_distributivity(
    tnorm: TNorm,
    antecedent1: FuzzySet,
    antecedent2: FuzzySet,
    input1: FuzzySet,
    input2: FuzzySet,
    *,
    ref: REF | None = None,
    tolerance: float = 1e-12,
) -> DistributivityReport:
    """Compare joint-universe similarity against its per-antecedent split.

    lhs = S(T(A1,A2), T(A1',A2')) over the product universe;
    rhs = T(S(A1,A1'), S(A2,A2')).  The report also flags which nesting
    condition the instance satisfies and whether any zero divisor of a
    nilpotent t-norm was engaged while materializing the products.
    """
    if ref is None:
        ref = generated_ref(tnorm)
    elif generated_family_tnorm(ref) != tnorm:
        raise SemanticError(
            "similarity distributivity needs the similarity generated by the same t-norm"
        )
    joint_rule = product_extend([antecedent1, antecedent2], tnorm)
    joint_input = product_extend([input1, input2], tnorm)
    lhs = similarity(ref, joint_rule, joint_input)
    rhs = tnorm(
        similarity(ref, antecedent1, input1), similarity(ref, antecedent2, input2)
    )
    if abs(lhs - rhs) <= tolerance:
        relation = "equal"
    else:
        relation = "lhs-greater" if lhs > rhs else "rhs-greater"

    engaged = False
    if tnorm.is_nilpotent_kind:
        for pair in ((antecedent1, antecedent2), (input1, input2)):
            for x in pair[0].memberships:
                for y in pair[1].memberships:
                    if tnorm.engages_zero_divisor(x, y):
                        engaged = True
                        break
                if engaged:
                    break
            if engaged:
                break

    return DistributivityReport(
        connective=tnorm.describe(),
        lhs=lhs,
        rhs=rhs,
        relation=relation,
        inputs_nested_in_antecedents=is_subset(input1, antecedent1)
        and is_subset(input2, antecedent2),
        antecedents_nested_in_inputs=is_subset(antecedent1, input1)
        and is_subset(antecedent2, input2),
        zero_divisors_engaged=engaged,
        tolerance=tolerance,
    )
