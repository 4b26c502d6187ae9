"""Operation counting under the package-wide cost convention.

A counter is a single-owner accumulator: inference code records labeled
rows as it works, and the total is always the sum of the rows.  Counting
is a cost model, not wall-clock profiling; enabling it never changes any
computed value.
"""

from __future__ import annotations


class OpCounter:
    """Labeled operation counts split into implications, t-norms, comparisons."""

    __slots__ = ("implication_evals", "tnorm_evals", "comparisons", "rows")

    def __init__(self):
        self.implication_evals = 0
        self.tnorm_evals = 0
        self.comparisons = 0
        self.rows: list[tuple[str, int]] = []

    def record(self, label: str, *, implications: int = 0, tnorms: int = 0, comparisons: int = 0) -> None:
        if min(implications, tnorms, comparisons) < 0:
            raise ValueError("operation counts must be non-negative")
        self.implication_evals += implications
        self.tnorm_evals += tnorms
        self.comparisons += comparisons
        self.rows.append((label, implications + tnorms + comparisons))

    @property
    def total(self) -> int:
        return sum(count for _, count in self.rows)

    def row_values(self) -> list[int]:
        return [count for _, count in self.rows]

    def as_dict(self) -> dict:
        return {
            "rows": [{"label": label, "count": count} for label, count in self.rows],
            "implication_evals": self.implication_evals,
            "tnorm_evals": self.tnorm_evals,
            "comparisons": self.comparisons,
            "total": self.total,
        }

    def __repr__(self) -> str:
        return f"OpCounter(total={self.total}, rows={len(self.rows)})"
