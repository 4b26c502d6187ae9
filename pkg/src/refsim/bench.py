"""Operation-count benchmarking of the flat and stagewise inference arms.

Counts follow the package cost convention (see ``counters``); they are the
acceptance currency.  Wall times are medians of repeated runs and are
reported for orientation only, since they are hardware dependent.  Totals
are always recomputed from the rows an arm actually produced, never copied
from any bundled reference values; disagreements with a reference are
surfaced as notes.
"""

from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass, field

from .algebra import TNorm
from .counters import OpCounter
from .errors import ExplosionError
from .fuzzyset import DEFAULT_CELL_CAP, FuzzySet, Universe
from .hier import infer_hier_implication
from .sbar import Rule, infer_flat


def count_flat(
    rule: Rule,
    inputs: list[FuzzySet],
    similarity_mode: str = "t-combined",
    *,
    cap: int = DEFAULT_CELL_CAP,
) -> OpCounter:
    """Counted-cost run of the flat method."""
    return infer_flat(rule, inputs, similarity_mode, cap=cap).counter


def count_hier(rule: Rule, inputs: list[FuzzySet]) -> OpCounter:
    """Counted-cost run of the stagewise implication method (peak reduction on)."""
    return infer_hier_implication(rule, inputs, sup_reduction=True).counter


def _median_wall_ns(fn, repetitions: int) -> int:
    times = []
    for _ in range(max(5, repetitions)):
        start = time.perf_counter_ns()
        fn()
        times.append(time.perf_counter_ns() - start)
    return int(statistics.median(times))


@dataclass(frozen=True)
class BenchReport:
    """Side-by-side counted cost of the two arms on one instance."""

    config: str
    flat_rows: tuple[tuple[str, int], ...]
    hier_rows: tuple[tuple[str, int], ...]
    flat_total: int
    hier_total: int
    flat_wall_ns: int
    hier_wall_ns: int
    notes: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "flat_rows": [{"label": l, "count": c} for l, c in self.flat_rows],
            "hier_rows": [{"label": l, "count": c} for l, c in self.hier_rows],
            "flat_total": self.flat_total,
            "hier_total": self.hier_total,
            "flat_wall_ns": self.flat_wall_ns,
            "hier_wall_ns": self.hier_wall_ns,
            "notes": list(self.notes),
        }


def _reference_notes(arm: str, rows, total: int, reference: dict) -> list[str]:
    notes = []
    ref_rows = reference.get(f"{arm}_rows")
    if ref_rows is not None:
        computed = [count for _, count in rows]
        if list(ref_rows) != computed:
            notes.append(
                f"{arm} rows: computed {computed} differ from reference {list(ref_rows)}"
            )
        ref_row_sum = sum(ref_rows)
    else:
        ref_row_sum = None
    ref_total = reference.get(f"{arm}_total")
    if ref_total is not None and ref_total != total:
        note = f"{arm} total: computed {total} from its own rows; reference states {ref_total}"
        if ref_row_sum is not None and ref_row_sum != ref_total:
            note += f" (the reference rows themselves sum to {ref_row_sum})"
        notes.append(note)
    return notes


def compare_counts(
    rule: Rule,
    inputs: list[FuzzySet],
    *,
    similarity_mode: str = "t-combined",
    cap: int = DEFAULT_CELL_CAP,
    repetitions: int = 5,
    reference: dict | None = None,
) -> BenchReport:
    """Count both arms on one instance and reconcile against reference values."""
    flat_counter = count_flat(rule, inputs, similarity_mode, cap=cap)
    hier_counter = count_hier(rule, inputs)
    flat_wall = _median_wall_ns(lambda: infer_flat(rule, inputs, similarity_mode, cap=cap), repetitions)
    hier_wall = _median_wall_ns(lambda: infer_hier_implication(rule, inputs), repetitions)
    notes: list[str] = []
    if reference:
        notes += _reference_notes("flat", flat_counter.rows, flat_counter.total, reference)
        notes += _reference_notes("hier", hier_counter.rows, hier_counter.total, reference)
    sizes = "x".join(str(a.universe.size) for a in rule.antecedents)
    config = (
        f"tnorm={rule.tnorm.describe()} form={rule.form} sizes={sizes} "
        f"m={rule.consequent.universe.size} similarity_mode={similarity_mode}"
    )
    return BenchReport(
        config=config,
        flat_rows=tuple(flat_counter.rows),
        hier_rows=tuple(hier_counter.rows),
        flat_total=flat_counter.total,
        hier_total=hier_counter.total,
        flat_wall_ns=flat_wall,
        hier_wall_ns=hier_wall,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class SweepRow:
    arm: str
    n: int
    u: int
    m: int
    ops: int
    wall_ns: int

    def as_dict(self) -> dict:
        return {
            "arm": self.arm,
            "n": self.n,
            "u": self.u,
            "m": self.m,
            "ops": self.ops,
            "wall_ns": self.wall_ns,
        }


@dataclass(frozen=True)
class FitReport:
    """One fitted growth model with its worst relative error over the points."""

    model: str
    params: dict
    max_rel_error: float

    def as_dict(self) -> dict:
        return {"model": self.model, "params": self.params, "max_rel_error": self.max_rel_error}


@dataclass(frozen=True)
class SweepReport:
    """Counted ops and wall times of both arms across antecedent counts."""

    config: str
    rows: tuple[SweepRow, ...]
    flat_fit: FitReport | None
    hier_fit: FitReport | None
    notes: tuple[str, ...]

    def csv(self) -> str:
        lines = ["arm,n,u,m,ops,wall_ns"]
        for row in self.rows:
            lines.append(f"{row.arm},{row.n},{row.u},{row.m},{row.ops},{row.wall_ns}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "rows": [r.as_dict() for r in self.rows],
            "flat_fit": self.flat_fit.as_dict() if self.flat_fit else None,
            "hier_fit": self.hier_fit.as_dict() if self.hier_fit else None,
            "notes": list(self.notes),
        }


def _random_instance(rng: random.Random, n: int, u: int, m: int) -> tuple[Rule, list[FuzzySet]]:
    # memberships bounded away from 0 so inputs are never empty
    universes = [Universe(f"U{i + 1}", tuple(f"x{i + 1}.{j + 1}" for j in range(u))) for i in range(n)]
    out = Universe("V", tuple(f"y{j + 1}" for j in range(m)))
    antecedents = tuple(
        FuzzySet(uv, tuple(rng.uniform(0.05, 1.0) for _ in range(u))) for uv in universes
    )
    consequent = FuzzySet(out, tuple(rng.uniform(0.05, 1.0) for _ in range(m)))
    inputs = [FuzzySet(uv, tuple(rng.uniform(0.05, 1.0) for _ in range(u))) for uv in universes]
    rule = Rule(antecedents, consequent, TNorm.product(), form="implication")
    return rule, inputs


def _fit_exponential(points: list[tuple[int, int]], base: float) -> FitReport:
    """Least-squares c for ops = c * base**n, plus a free-base diagnostic."""
    logs = [math.log(ops) - n * math.log(base) for n, ops in points]
    c = math.exp(sum(logs) / len(logs))
    max_rel = max(abs(c * base**n - ops) / ops for n, ops in points)
    xs = [n for n, _ in points]
    ys = [math.log(ops) for _, ops in points]
    slope, intercept = _linear_least_squares(xs, ys)
    return FitReport(
        model="c*base^n",
        params={"c": c, "base": base, "free_fit_base": math.exp(slope), "free_fit_c": math.exp(intercept)},
        max_rel_error=max_rel,
    )


def _linear_least_squares(xs, ys) -> tuple[float, float]:
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx if sxx else 0.0
    return slope, mean_y - slope * mean_x


def _fit_linear(points: list[tuple[int, int]]) -> FitReport:
    xs = [n for n, _ in points]
    ys = [float(ops) for _, ops in points]
    slope, intercept = _linear_least_squares(xs, ys)
    max_rel = max(abs(intercept + slope * n - ops) / ops for n, ops in points)
    return FitReport(
        model="a+b*n", params={"a": intercept, "b": slope}, max_rel_error=max_rel
    )


def scaling_sweep(
    n_values,
    u: int,
    m: int,
    *,
    trials: int = 3,
    seed: int = 0,
    cap: int = DEFAULT_CELL_CAP,
    repetitions: int = 5,
    flat_similarity_mode: str = "product-direct",
) -> SweepReport:
    """Measure counted ops and wall time of both arms as antecedents multiply.

    The flat arm measures the similarity directly on the joint universe, the
    cost profile whose leading term is the product of the universe sizes;
    the stagewise arm stays per-antecedent.  Counts depend only on shapes,
    so the sweep asserts they agree across the random trials and fits
    c*u^n to the flat arm and a linear model to the stagewise arm.
    """
    n_values = list(n_values)
    rng = random.Random(seed)
    rows: list[SweepRow] = []
    notes: list[str] = []
    flat_points: list[tuple[int, int]] = []
    hier_points: list[tuple[int, int]] = []

    for n in n_values:
        flat_ops = None
        hier_ops = None
        flat_instance = None
        hier_instance = None
        skip_noted = False
        for _ in range(max(1, trials)):
            rule, inputs = _random_instance(rng, n, u, m)
            try:
                ops = count_flat(rule, inputs, flat_similarity_mode, cap=cap).total
                if flat_ops is None:
                    flat_ops, flat_instance = ops, (rule, inputs)
                elif ops != flat_ops:
                    notes.append(f"flat ops varied across trials at n={n}: {flat_ops} vs {ops}")
            except ExplosionError as exc:
                if not skip_noted:
                    notes.append(f"flat arm skipped at n={n}: {exc}")
                    skip_noted = True
            ops = count_hier(rule, inputs).total
            if hier_ops is None:
                hier_ops, hier_instance = ops, (rule, inputs)
            elif ops != hier_ops:
                notes.append(f"hier ops varied across trials at n={n}: {hier_ops} vs {ops}")

        if flat_ops is not None:
            wall = _median_wall_ns(
                lambda: infer_flat(flat_instance[0], flat_instance[1], flat_similarity_mode, cap=cap),
                repetitions,
            )
            rows.append(SweepRow("flat", n, u, m, flat_ops, wall))
            flat_points.append((n, flat_ops))
        if hier_ops is not None:
            wall = _median_wall_ns(
                lambda: infer_hier_implication(hier_instance[0], hier_instance[1]), repetitions
            )
            rows.append(SweepRow("hier", n, u, m, hier_ops, wall))
            hier_points.append((n, hier_ops))

    flat_fit = _fit_exponential(flat_points, float(u)) if len(flat_points) >= 2 else None
    hier_fit = _fit_linear(hier_points) if len(hier_points) >= 2 else None
    config = f"u={u} m={m} n={n_values} trials={trials} seed={seed} cap={cap}"
    return SweepReport(
        config=config,
        rows=tuple(rows),
        flat_fit=flat_fit,
        hier_fit=hier_fit,
        notes=tuple(notes),
    )
