"""Command-line front end.

The CLI is a thin client of the service layer: it builds the same request
models the HTTP endpoints accept, dispatches them in process by default or
to a remote server with ``--url``, and renders the response.  Exit codes:
0 success, 1 parse/validation error, 2 semantic error, 3 product-size cap
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from .errors import ExplosionError, RefsimError, SemanticError, SystemFileError
from .service import handlers, models

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SEMANTIC = 2
EXIT_EXPLOSION = 3

_ERROR_KIND_TO_EXIT = {
    "validation": EXIT_VALIDATION,
    "semantic": EXIT_SEMANTIC,
    "explosion": EXIT_EXPLOSION,
}


def format_value(value: float) -> str:
    """Small-denominator rational when exact to 1e-12, else 12 significant digits."""
    fraction = Fraction(value).limit_denominator(999)
    if abs(float(fraction) - value) <= 1e-12:
        if fraction.denominator == 1:
            return str(fraction.numerator)
        return f"{fraction.numerator}/{fraction.denominator}"
    return f"{value:.12g}"


class _CliFailure(Exception):
    def __init__(self, exit_code: int, message: str, diagnostics=None):
        self.exit_code = exit_code
        self.message = message
        self.diagnostics = diagnostics or []
        super().__init__(message)


def _load_document(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _CliFailure(EXIT_VALIDATION, f"cannot read {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliFailure(
            EXIT_VALIDATION, f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}"
        )


def _system_model(path: str) -> models.SystemModel:
    doc = _load_document(path)
    try:
        return models.SystemModel.model_validate(doc)
    except ValidationError as exc:
        diagnostics = [
            ".".join(str(p) for p in err["loc"]) + ": " + err["msg"] for err in exc.errors()
        ]
        raise _CliFailure(EXIT_VALIDATION, f"{path}: invalid system document", diagnostics)


def _dispatch(args, endpoint: str, request, response_model):
    """Run a request against the in-process handler or a remote server."""
    if args.url:
        import httpx

        url = args.url.rstrip("/") + endpoint
        reply = httpx.post(url, json=request.model_dump(), timeout=300.0)
        if reply.status_code != 200:
            try:
                envelope = models.ErrorEnvelope.model_validate(reply.json())
            except Exception:
                raise _CliFailure(EXIT_SEMANTIC, f"{url}: HTTP {reply.status_code}")
            raise _CliFailure(
                _ERROR_KIND_TO_EXIT.get(envelope.kind, EXIT_SEMANTIC),
                envelope.detail,
                envelope.diagnostics,
            )
        return response_model.model_validate(reply.json())
    handler = {
        "/infer": handlers.infer,
        "/normalize": handlers.normalize,
        "/validate-ref": handlers.validate_ref_handler,
        "/check-eq": handlers.check_eq,
        "/bench/compare": handlers.bench_compare,
        "/bench/sweep": handlers.bench_sweep,
    }[endpoint]
    try:
        return handler(request)
    except SystemFileError as exc:
        raise _CliFailure(EXIT_VALIDATION, "system document failed validation", exc.diagnostics)
    except ExplosionError as exc:
        raise _CliFailure(EXIT_EXPLOSION, str(exc))
    except SemanticError as exc:
        raise _CliFailure(EXIT_SEMANTIC, str(exc))
    except RefsimError as exc:
        raise _CliFailure(EXIT_SEMANTIC, str(exc))


def _emit_json(payload_model) -> None:
    print(payload_model.model_dump_json(indent=2, exclude_none=True))


def _cmd_infer(args) -> int:
    system = _system_model(args.file)
    if args.dump_normalized:
        response = _dispatch(
            args, "/normalize", models.NormalizeRequest(system=system), models.NormalizeResponse
        )
        print(json.dumps(response.system, indent=2))
        return EXIT_OK
    request = models.InferRequest(
        system=system,
        method=args.method,
        similarity_mode=args.similarity_mode,
        include_counts=args.count,
        include_intermediates=args.verbose,
        include_reference=args.reference,
        cap=args.cap,
    )
    response = _dispatch(args, "/infer", request, models.InferResponse)
    if args.json:
        _emit_json(response)
        return EXIT_OK
    print("output:")
    for item in response.output:
        print(f"  {item.label}: {format_value(item.value)}")
    print("similarity:")
    if response.antecedent_similarities:
        for i, value in enumerate(response.antecedent_similarities):
            print(f"  input {i + 1}: {format_value(value)}")
    print(f"  combined: {format_value(response.similarity)}")
    if response.intermediates:
        print("intermediates:")
        for i, stage in enumerate(response.intermediates):
            print(f"  stage {i + 1}:")
            for item in stage:
                print(f"    {item.label}: {format_value(item.value)}")
    if response.zero_divisor_cells:
        print("zero-divisor cells:")
        for cell in response.zero_divisor_cells:
            print(f"  antecedent {cell[0]}, element {cell[1]}, output {cell[2]}")
    if response.counts:
        print("counts:")
        for row in response.counts.rows:
            print(f"  {row.label}: {row.count}")
        print(f"  total: {response.counts.total}")
    if response.reference is not None:
        print("reference check:")
        for entry in response.reference:
            if entry.matches:
                print(f"  {entry.name}: matches")
            else:
                print(
                    f"  {entry.name}: MISMATCH reference={entry.reference} "
                    f"computed={entry.computed}"
                )
    return EXIT_OK


def _cmd_validate_ref(args) -> int:
    request = models.ValidateRefRequest(ref=args.ref, step=args.step, tolerance=args.tolerance)
    response = _dispatch(args, "/validate-ref", request, models.ValidateRefResponse)
    if args.json:
        _emit_json(response)
        return EXIT_OK
    print(f"ref: {response.ref}")
    for report in response.reports:
        status = "holds" if report.holds else "FAILS"
        line = f"  {report.property}: {status}"
        if report.counterexample:
            line += f" at ({', '.join(format_value(v) for v in report.counterexample)})"
        print(line)
    print(f"all axioms: {'pass' if response.passed else 'FAIL'}")
    if response.certificate_route is not None:
        print(f"construction certificate: {response.certificate_route}")
    elif response.certificate_reports is not None:
        failed = [r.property for r in response.certificate_reports if not r.holds]
        print(f"construction certificate: none (failing hypotheses: {', '.join(failed)})")
    return EXIT_OK


def _cmd_check_eq(args) -> int:
    request = models.CheckEqRequest(
        equation=args.eq, tnorm=args.tnorm, step=args.step, tolerance=args.tolerance
    )
    response = _dispatch(args, "/check-eq", request, models.CheckEqResponse)
    if args.json:
        _emit_json(response)
        return EXIT_OK
    print(f"equation: {response.equation}")
    print(f"connective: {response.connective}")
    if response.restricted_domain != "none":
        print(f"restricted to: {response.restricted_domain}")
    print(f"holds: {response.holds}")
    if response.counterexample:
        print(f"counterexample: ({', '.join(format_value(v) for v in response.counterexample)})")
    if response.unrestricted_holds is not None:
        print(f"unrestricted holds: {response.unrestricted_holds}")
        if response.unrestricted_counterexample:
            values = ", ".join(format_value(v) for v in response.unrestricted_counterexample)
            print(f"unrestricted counterexample: ({values})")
    return EXIT_OK


def _parse_sweep_tokens(tokens: list[str]) -> dict:
    values = {}
    for token in tokens:
        if "=" not in token:
            raise _CliFailure(EXIT_VALIDATION, f"bad sweep token {token!r}, expected key=value")
        key, value = token.split("=", 1)
        values[key] = value
    missing = {"n", "u", "m"} - set(values)
    if missing:
        raise _CliFailure(EXIT_VALIDATION, f"sweep needs {sorted(missing)}")
    try:
        if ".." in values["n"]:
            lo, hi = values["n"].split("..", 1)
            n_min, n_max = int(lo), int(hi)
        else:
            n_min = n_max = int(values["n"])
        return {"n_min": n_min, "n_max": n_max, "u": int(values["u"]), "m": int(values["m"])}
    except ValueError as exc:
        raise _CliFailure(EXIT_VALIDATION, f"bad sweep value: {exc}")


def _cmd_bench(args) -> int:
    if bool(args.sweep) == bool(args.file):
        raise _CliFailure(EXIT_VALIDATION, "bench needs exactly one of --sweep or --file")
    if args.sweep:
        params = _parse_sweep_tokens(args.sweep)
        request = models.BenchSweepRequest(
            **params, trials=args.trials, seed=args.seed, cap=args.cap
        )
        response = _dispatch(args, "/bench/sweep", request, models.BenchSweepResponse)
        if args.csv:
            Path(args.csv).write_text(response.csv)
        if args.json:
            _emit_json(response)
            return EXIT_OK
        print(response.csv, end="")
        for fit in (response.flat_fit, response.hier_fit):
            if fit:
                params_text = ", ".join(f"{k}={v:.6g}" for k, v in fit.params.items())
                print(f"# fit {fit.model}: {params_text} (max rel err {fit.max_rel_error:.3%})")
        for note in response.notes:
            print(f"# {note}")
        return EXIT_OK
    system = _system_model(args.file)
    request = models.BenchCompareRequest(
        system=system, similarity_mode=args.similarity_mode, cap=args.cap
    )
    response = _dispatch(args, "/bench/compare", request, models.BenchCompareResponse)
    if args.json:
        _emit_json(response)
        return EXIT_OK
    print(f"config: {response.config}")
    print("flat:")
    for row in response.flat_rows:
        print(f"  {row.label}: {row.count}")
    print(f"  total: {response.flat_total}")
    print("hier:")
    for row in response.hier_rows:
        print(f"  {row.label}: {row.count}")
    print(f"  total: {response.hier_total}")
    for note in response.notes:
        print(f"note: {note}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    common.add_argument("--verbose", action="store_true", help="include intermediates")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    common.add_argument(
        "--cap", type=int, default=10_000_000, help="product universe cell cap"
    )
    common.add_argument("--url", default=None, help="remote service URL (default: in-process)")

    parser = argparse.ArgumentParser(
        prog="refsim",
        description="Similarity-based fuzzy inference with restricted equivalence functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", parents=[common], help="run a system file through inference")
    p.add_argument("file", help="system document (JSON)")
    p.add_argument("--method", choices=["flat", "hier1", "hier2"], default="flat")
    p.add_argument(
        "--similarity-mode", choices=["t-combined", "product-direct"], default="t-combined"
    )
    p.add_argument("--count", action="store_true", help="include operation counts")
    p.add_argument(
        "--reference", action="store_true", help="recompute bundled reference values"
    )
    p.add_argument(
        "--dump-normalized", action="store_true", help="print the normalized document and exit"
    )
    p.set_defaults(fn=_cmd_infer)

    p = sub.add_parser("validate-ref", parents=[common], help="check the equivalence axioms")
    p.add_argument("--ref", required=True, help="e.g. catalog:F1 or composed:mean:lukasiewicz")
    p.add_argument("--step", type=float, default=0.02)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(fn=_cmd_validate_ref)

    p = sub.add_parser("check-eq", parents=[common], help="check a functional equation")
    p.add_argument("--eq", choices=["factorization", "exchange"], required=True)
    p.add_argument("--tnorm", required=True)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(fn=_cmd_check_eq)

    p = sub.add_parser("bench", parents=[common], help="operation-count benchmarks")
    p.add_argument("--file", help="system document for a flat-vs-hier comparison")
    p.add_argument(
        "--sweep", nargs="+", metavar="KEY=VALUE", help="scaling sweep, e.g. n=2..8 u=3 m=4"
    )
    p.add_argument(
        "--similarity-mode", choices=["t-combined", "product-direct"], default="t-combined"
    )
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--csv", help="also write the sweep CSV to this path")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CliFailure as failure:
        print(f"error: {failure.message}", file=sys.stderr)
        for line in failure.diagnostics:
            print(f"  {line}", file=sys.stderr)
        return failure.exit_code


if __name__ == "__main__":
    sys.exit(main())
