"""Endpoint implementations, shared verbatim by the HTTP app and the CLI.

Each handler is a pure function from a request model to a response model;
errors propagate as the package's exception types and are mapped to HTTP
statuses (or CLI exit codes) by the caller.
"""

from __future__ import annotations

from ..algebra import Implication
from ..bench import compare_counts, scaling_sweep
from ..errors import SemanticError
from ..fuzzyset import FuzzySet
from ..hier import check_exchange, check_factorization, infer_hier_conjunction, infer_hier_implication
from ..ref import check_ref_preconditions, validate_ref
from ..sbar import InferenceResult, infer_flat
from ..system import dump_normalized, load_system, parse_ref, parse_tnorm, verify_reference
from . import models


def _label_values(fuzzy_set: FuzzySet) -> list[models.LabelValue]:
    return [models.LabelValue(label=l, value=v) for l, v in fuzzy_set.items()]


def _counts_model(counter) -> models.CountsModel:
    return models.CountsModel(
        rows=[models.CountRow(label=l, count=c) for l, c in counter.rows],
        implication_evals=counter.implication_evals,
        tnorm_evals=counter.tnorm_evals,
        comparisons=counter.comparisons,
        total=counter.total,
    )


def infer(request: models.InferRequest) -> models.InferResponse:
    system = load_system(request.system.as_document())
    inputs = list(system.inputs)
    result: InferenceResult
    if request.method == "flat":
        result = infer_flat(system.rule, inputs, request.similarity_mode, cap=request.cap)
    elif request.method == "hier1":
        result = infer_hier_implication(system.rule, inputs)
    else:
        result = infer_hier_conjunction(system.rule, inputs)

    reference = None
    if request.include_reference:
        report = verify_reference(system, cap=request.cap)
        reference = [models.ReferenceEntryModel(**e.as_dict()) for e in report.entries]

    return models.InferResponse(
        method=request.method,
        output=_label_values(result.output),
        similarity=result.similarity,
        antecedent_similarities=(
            list(result.antecedent_similarities)
            if result.antecedent_similarities is not None
            else None
        ),
        intermediates=(
            [_label_values(f) for f in result.intermediates]
            if request.include_intermediates
            else None
        ),
        counts=_counts_model(result.counter) if request.include_counts else None,
        reference=reference,
        zero_divisor_cells=(
            [list(cell) for cell in result.zero_divisor_cells]
            if result.zero_divisor_cells
            else None
        ),
    )


def normalize(request: models.NormalizeRequest) -> models.NormalizeResponse:
    system = load_system(request.system.as_document())
    return models.NormalizeResponse(system=dump_normalized(system))


def validate_ref_handler(request: models.ValidateRefRequest) -> models.ValidateRefResponse:
    ref = parse_ref(request.ref)
    if ref is None:
        raise SemanticError("ref 'generated' needs a rule context; name a t-norm instead")
    reports = validate_ref(ref, request.step, request.tolerance)
    certificate_route = None
    certificate_reports = None
    if ref.kind == "composed" and isinstance(ref.mapping, Implication):
        certificate = check_ref_preconditions(
            ref.aggregation, ref.mapping, ref.negation, request.step, request.tolerance
        )
        certificate_route = certificate.route
        certificate_reports = [
            models.PropertyReportModel(**r.as_dict()) for r in certificate.reports
        ]
    return models.ValidateRefResponse(
        ref=request.ref,
        reports=[models.PropertyReportModel(**r.as_dict()) for r in reports],
        passed=all(r.holds for r in reports),
        certificate_route=certificate_route,
        certificate_reports=certificate_reports,
    )


def check_eq(request: models.CheckEqRequest) -> models.CheckEqResponse:
    tnorm = parse_tnorm(request.tnorm)
    if request.equation == "factorization":
        report = check_factorization(tnorm, request.step, tolerance=request.tolerance)
    else:
        report = check_exchange(tnorm, request.step, tolerance=request.tolerance)
    return models.CheckEqResponse(**report.as_dict())


def bench_compare(request: models.BenchCompareRequest) -> models.BenchCompareResponse:
    system = load_system(request.system.as_document())
    report = compare_counts(
        system.rule,
        list(system.inputs),
        similarity_mode=request.similarity_mode,
        cap=request.cap,
        repetitions=request.repetitions,
        reference=system.reference,
    )
    return models.BenchCompareResponse(
        config=report.config,
        flat_rows=[models.CountRow(label=l, count=c) for l, c in report.flat_rows],
        hier_rows=[models.CountRow(label=l, count=c) for l, c in report.hier_rows],
        flat_total=report.flat_total,
        hier_total=report.hier_total,
        flat_wall_ns=report.flat_wall_ns,
        hier_wall_ns=report.hier_wall_ns,
        notes=list(report.notes),
    )


def bench_sweep(request: models.BenchSweepRequest) -> models.BenchSweepResponse:
    if request.n_max < request.n_min:
        raise SemanticError("n_max must be at least n_min")
    report = scaling_sweep(
        range(request.n_min, request.n_max + 1),
        request.u,
        request.m,
        trials=request.trials,
        seed=request.seed,
        cap=request.cap,
        repetitions=request.repetitions,
    )
    return models.BenchSweepResponse(
        config=report.config,
        rows=[models.SweepRowModel(**r.as_dict()) for r in report.rows],
        flat_fit=models.FitModel(**report.flat_fit.as_dict()) if report.flat_fit else None,
        hier_fit=models.FitModel(**report.hier_fit.as_dict()) if report.hier_fit else None,
        notes=list(report.notes),
        csv=report.csv(),
    )
