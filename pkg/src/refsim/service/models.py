"""Request and response models for the HTTP service.

These models define the wire format; deeper validation (reference
resolution, membership ranges, connective compatibility) happens in the
core package so that the CLI and the service share one code path.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class UniverseModel(BaseModel):
    id: str
    labels: list[str]


class SetModel(BaseModel):
    id: str
    universe: str
    memberships: list[float]


class RuleModel(BaseModel):
    antecedents: list[str]
    consequent: str
    tnorm: str
    implication: Optional[str] = None
    form: Literal["implication", "conjunction"] = "implication"


class SystemModel(BaseModel):
    universes: list[UniverseModel]
    sets: list[SetModel]
    rule: RuleModel
    inputs: list[str]
    ref: str = "generated"
    negation: str = "standard"
    reference: Optional[dict] = None
    notes: Optional[list[str]] = None

    def as_document(self) -> dict:
        doc = self.model_dump(exclude_none=True)
        if self.rule.implication is None:
            doc["rule"].pop("implication", None)
        return doc


class LabelValue(BaseModel):
    label: str
    value: float


class CountRow(BaseModel):
    label: str
    count: int


class CountsModel(BaseModel):
    rows: list[CountRow]
    implication_evals: int
    tnorm_evals: int
    comparisons: int
    total: int


class ReferenceEntryModel(BaseModel):
    name: str
    reference: object = None
    computed: object = None
    matches: bool


class InferRequest(BaseModel):
    system: SystemModel
    method: Literal["flat", "hier1", "hier2"] = "flat"
    similarity_mode: Literal["t-combined", "product-direct"] = "t-combined"
    include_counts: bool = False
    include_intermediates: bool = False
    include_reference: bool = False
    cap: int = Field(default=10_000_000, gt=0)


class InferResponse(BaseModel):
    method: str
    output: list[LabelValue]
    similarity: float
    antecedent_similarities: Optional[list[float]] = None
    intermediates: Optional[list[list[LabelValue]]] = None
    counts: Optional[CountsModel] = None
    reference: Optional[list[ReferenceEntryModel]] = None
    zero_divisor_cells: Optional[list[list[object]]] = None


class NormalizeRequest(BaseModel):
    system: SystemModel


class NormalizeResponse(BaseModel):
    system: dict


class PropertyReportModel(BaseModel):
    subject: str
    property: str
    holds: bool
    counterexample: Optional[list[float]] = None
    grid_step: float
    tolerance: float


class ValidateRefRequest(BaseModel):
    ref: str
    step: float = Field(default=0.02, gt=0, le=0.5)
    tolerance: float = 1e-9


class ValidateRefResponse(BaseModel):
    ref: str
    reports: list[PropertyReportModel]
    passed: bool
    certificate_route: Optional[str] = None
    certificate_reports: Optional[list[PropertyReportModel]] = None


class CheckEqRequest(BaseModel):
    equation: Literal["factorization", "exchange"]
    tnorm: str
    step: float = Field(default=0.05, gt=0, le=0.5)
    tolerance: float = 1e-9


class CheckEqResponse(BaseModel):
    equation: str
    connective: str
    holds: bool
    counterexample: Optional[list[float]] = None
    grid_step: float
    tolerance: float
    restricted_domain: str
    unrestricted_holds: Optional[bool] = None
    unrestricted_counterexample: Optional[list[float]] = None


class BenchCompareRequest(BaseModel):
    system: SystemModel
    similarity_mode: Literal["t-combined", "product-direct"] = "t-combined"
    repetitions: int = Field(default=5, ge=1)
    cap: int = Field(default=10_000_000, gt=0)


class BenchCompareResponse(BaseModel):
    config: str
    flat_rows: list[CountRow]
    hier_rows: list[CountRow]
    flat_total: int
    hier_total: int
    flat_wall_ns: int
    hier_wall_ns: int
    notes: list[str]


class SweepRowModel(BaseModel):
    arm: str
    n: int
    u: int
    m: int
    ops: int
    wall_ns: int


class FitModel(BaseModel):
    model: str
    params: dict
    max_rel_error: float


class BenchSweepRequest(BaseModel):
    n_min: int = Field(ge=1)
    n_max: int = Field(ge=1)
    u: int = Field(ge=1)
    m: int = Field(ge=1)
    trials: int = Field(default=3, ge=1)
    seed: int = 0
    cap: int = Field(default=10_000_000, gt=0)
    repetitions: int = Field(default=5, ge=1)


class BenchSweepResponse(BaseModel):
    config: str
    rows: list[SweepRowModel]
    flat_fit: Optional[FitModel] = None
    hier_fit: Optional[FitModel] = None
    notes: list[str]
    csv: str


class ErrorEnvelope(BaseModel):
    kind: Literal["validation", "semantic", "explosion"]
    detail: str
    diagnostics: Optional[list[str]] = None
