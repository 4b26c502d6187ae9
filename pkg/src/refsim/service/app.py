"""FastAPI application exposing the inference engine to multiple clients."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ExplosionError, RefsimError, SemanticError, SystemFileError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(
        title="refsim",
        description="Similarity-based fuzzy inference with restricted equivalence functions.",
        version="0.1.0",
    )

    @app.exception_handler(RefsimError)
    async def refsim_error_handler(_: Request, exc: RefsimError) -> JSONResponse:
        if isinstance(exc, SystemFileError):
            status, kind, diagnostics = 400, "validation", exc.diagnostics
        elif isinstance(exc, ExplosionError):
            status, kind, diagnostics = 413, "explosion", None
        elif isinstance(exc, SemanticError):
            status, kind, diagnostics = 422, "semantic", None
        else:
            status, kind, diagnostics = 422, "semantic", None
        envelope = models.ErrorEnvelope(kind=kind, detail=str(exc), diagnostics=diagnostics)
        return JSONResponse(status_code=status, content=envelope.model_dump(exclude_none=True))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/infer", response_model=models.InferResponse, response_model_exclude_none=True)
    def infer(request: models.InferRequest) -> models.InferResponse:
        return handlers.infer(request)

    @app.post(
        "/normalize", response_model=models.NormalizeResponse, response_model_exclude_none=True
    )
    def normalize(request: models.NormalizeRequest) -> models.NormalizeResponse:
        return handlers.normalize(request)

    @app.post(
        "/validate-ref", response_model=models.ValidateRefResponse, response_model_exclude_none=True
    )
    def validate_ref(request: models.ValidateRefRequest) -> models.ValidateRefResponse:
        return handlers.validate_ref_handler(request)

    @app.post("/check-eq", response_model=models.CheckEqResponse, response_model_exclude_none=True)
    def check_eq(request: models.CheckEqRequest) -> models.CheckEqResponse:
        return handlers.check_eq(request)

    @app.post(
        "/bench/compare",
        response_model=models.BenchCompareResponse,
        response_model_exclude_none=True,
    )
    def bench_compare(request: models.BenchCompareRequest) -> models.BenchCompareResponse:
        return handlers.bench_compare(request)

    @app.post(
        "/bench/sweep", response_model=models.BenchSweepResponse, response_model_exclude_none=True
    )
    def bench_sweep(request: models.BenchSweepRequest) -> models.BenchSweepResponse:
        return handlers.bench_sweep(request)

    return app


app = create_app()
