"""
milnorlab command-line front end.

    python -m milnorlab fibration -f "x^3+y^2" -g "x^2+y^2"
    python -m milnorlab batch demo/worked_examples.json --threads 4

Every job produces a deterministic JSON report (or its text rendering) and an
exit code: 0 computed, 1 input error, 2 precondition violated, 3 inconclusive.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from joblib import Parallel, delayed
from pydantic import ValidationError

from .config import Settings, get_settings
from .critloc import classify_faces, fibration_verdict, jacobian
from .errors import (
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_OK,
    BatchFileError,
    MilnorLabError,
    exit_code_for,
)
from .explanation import render_text
from .models import BatchReport, ErrorInfo, Job, Report
from .newton import (
    gamma_minus_area,
    multiplicity_condition,
    newton_boundary,
    newton_number_2d,
    nondegeneracy_2d,
    weighted_degree,
)
from .polycore import Polynomial, format_factored, parse_polynomial
from .puiseux import branches
from .zeta import homog3_data, zeta_mixed_plane, zeta_plane, zeta_plane_product

logger = logging.getLogger(__name__)


def configure_logging(level: str = "WARNING"):
    """Logs go to stderr so reports on stdout stay byte-deterministic."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


# ====================================================================
# commands
# ====================================================================

def _polys(job: Job) -> Tuple[Polynomial, Optional[Polynomial]]:
    f = parse_polynomial(job.f, job.variables)
    g = parse_polynomial(job.g, job.variables) if job.g else None
    return f, g


def _newton_doc(p: Polynomial) -> Dict[str, Any]:
    data = newton_boundary(p)
    doc = {"polynomial": str(p), "boundary": data.to_json(), "newton_number": None,
           "area": None, "nondegenerate": None, "detail": None}
    if p.nvars == 2:
        check = nondegeneracy_2d(p)
        doc["nondegenerate"] = check.holds
        doc["detail"] = check.detail or None
        if data.convenient:
            doc["newton_number"] = newton_number_2d(p)
            doc["area"] = str(gamma_minus_area(p))
    return doc


def cmd_newton(job: Job) -> Tuple[Dict[str, Any], int]:
    f, g = _polys(job)
    result = {"f": _newton_doc(f)}
    if g is not None:
        result["g"] = _newton_doc(g)
    return result, EXIT_OK


def cmd_multcond(job: Job):
    f, g = _polys(job)
    verdict = multiplicity_condition(f, g)
    result = {"verdict": verdict.to_json(), "d_f": None, "d_g": None}
    if verdict.witness is not None:
        result["d_f"] = weighted_degree(verdict.witness, f)
        result["d_g"] = weighted_degree(verdict.witness, g)
    return result, EXIT_OK


def cmd_zeta(job: Job):
    f, g = _polys(job)
    result = {"f": zeta_plane(f).to_json()}
    if g is not None:
        result["g"] = zeta_plane(g).to_json()
        result["h"] = zeta_plane_product(f, g).to_json()
    return result, EXIT_OK


def cmd_zeta_mixed(job: Job):
    f, g = _polys(job)
    zeta = zeta_mixed_plane(f, g)
    return {"zeta": zeta.to_json(), "direction": multiplicity_condition(f, g).direction}, EXIT_OK


def cmd_zeta3h(job: Job):
    f, g = _polys(job)
    return homog3_data(f, g).to_json(), EXIT_OK


def cmd_jacobian(job: Job):
    f, g = _polys(job)
    J = jacobian(f, g)
    faces = []
    if not J.is_zero and J.constant_term == 0:
        faces = [face.to_json() for face in classify_faces(J, f, g)]
    return {"expanded": str(J), "factored": format_factored(J), "faces": faces}, EXIT_OK


def cmd_puiseux(job: Job):
    k, _ = _polys(job)
    found = branches(k, job.order)
    return {"polynomial": str(k), "order": job.order, "branches": [b.to_json() for b in found]}, EXIT_OK


def cmd_fibration(job: Job):
    f, g = _polys(job)
    report = fibration_verdict(f, g, job.order, job.tol, job.radius, job.samples)
    return report.to_json(), EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK


COMMANDS = {
    "newton": cmd_newton,
    "multcond": cmd_multcond,
    "zeta": cmd_zeta,
    "zeta-mixed": cmd_zeta_mixed,
    "zeta3h": cmd_zeta3h,
    "jacobian": cmd_jacobian,
    "puiseux": cmd_puiseux,
    "fibration": cmd_fibration,
}


# ====================================================================
# run / run_batch
# ====================================================================

def _error_report(command: str, inputs: Dict[str, Any], settings: Dict[str, Any],
                  exc: BaseException, code: int) -> Report:
    return Report(
        command=command,
        input=inputs,
        settings=settings,
        exit_code=code,
        error=ErrorInfo(type=type(exc).__name__, message=str(exc)),
    )


def run(job: Job) -> Report:
    """
    Execute one job; errors become error reports, never tracebacks.

    Parameters:
    -----------
    job : Job
        Validated job

    Returns:
    --------
    Report
        result on success, error otherwise; exit_code per the error family
    """
    logger.info(f"Running {job.command} on f={job.f!r} g={job.g!r}")
    try:
        result, code = COMMANDS[job.command](job)
    except MilnorLabError as exc:
        code = exit_code_for(exc)
        logger.info(f"{job.command} stopped: {type(exc).__name__}: {exc}")
        logger.debug("details", exc_info=True)
        return _error_report(job.command, job.echo(), job.tolerances(), exc, code)
    except Exception as exc:
        logger.error(f"❌ {job.command} failed unexpectedly: {exc}")
        logger.debug("details", exc_info=True)
        return _error_report(job.command, job.echo(), job.tolerances(), exc, EXIT_INPUT)
    logger.info(f"✅ {job.command} finished with exit code {code}")
    return Report(command=job.command, input=job.echo(), settings=job.tolerances(),
                  exit_code=code, result=result)


def job_defaults(settings: Settings) -> Dict[str, Any]:
    return {"order": settings.order, "tol": settings.tol, "samples": settings.samples, "radius": settings.radius}


def _run_raw(raw: Any, defaults: Dict[str, Any]) -> Report:
    if not isinstance(raw, dict):
        exc = BatchFileError(f"job must be an object, got {type(raw).__name__}")
        return _error_report("invalid", {}, defaults, exc, EXIT_INPUT)
    try:
        job = Job.model_validate({**defaults, **raw})
    except ValidationError as exc:
        inputs = {"f": raw.get("f"), "g": raw.get("g"), "variables": raw.get("variables")}
        message = "; ".join(f"{'.'.join(str(p) for p in e['loc']) or 'job'}: {e['msg']}" for e in exc.errors())
        return _error_report(str(raw.get("command", "invalid")), inputs, defaults,
                             BatchFileError(message), EXIT_INPUT)
    return run(job)


def load_jobs(path: str) -> List[Any]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise BatchFileError(f"cannot read job file {path}: {exc}") from exc
    if not isinstance(raw, list):
        raise BatchFileError(f"job file {path} must hold a JSON list of jobs")
    return raw


def run_batch(path: str, settings: Optional[Settings] = None) -> BatchReport:
    """Run every job of a JSON job file; reports keep input order, exit code is the max."""
    settings = settings or get_settings()
    jobs = load_jobs(path)
    defaults = job_defaults(settings)
    logger.info(f"Batch of {len(jobs)} jobs on {settings.threads} thread(s)")
    reports = Parallel(n_jobs=settings.threads, prefer="threads")(
        delayed(_run_raw)(raw, defaults) for raw in jobs
    )
    code = max((r.exit_code for r in reports), default=EXIT_OK)
    return BatchReport(exit_code=code, reports=list(reports))


def dump(document: Dict[str, Any], fmt: str = "json") -> str:
    if fmt == "text":
        return render_text(document) + "\n"
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


# ====================================================================
# argument parsing
# ====================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default=None, help="Output format (default json)")
    common.add_argument("--out", default=None, help="Write the report to PATH instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="Parallelism (overrides MILNORLAB_THREADS)")

    job_flags = argparse.ArgumentParser(add_help=False)
    job_flags.add_argument("-f", "--f", required=True, help="Expression for f")
    job_flags.add_argument("-g", "--g", default=None, help="Expression for g")
    job_flags.add_argument("--vars", default=None, help="Comma-separated variable names")
    job_flags.add_argument("--order", type=int, default=None, help="Series truncation N")
    job_flags.add_argument("--tol", type=float, default=None, help="Unit-modulus tolerance")
    job_flags.add_argument("--samples", type=int, default=None, help="Circle samples")
    job_flags.add_argument("--radius", type=float, default=None, help="Circle radius")

    parser = argparse.ArgumentParser(prog="milnorlab", description="Milnor fibration diagnostics for f·ḡ")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common, job_flags])
    batch = sub.add_parser("batch", parents=[common], help="Run a JSON list of jobs")
    batch.add_argument("path")
    return parser


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    configure_logging(settings.log_level)
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        settings = settings.model_copy(update={"threads": max(1, args.threads)})
    fmt = args.format or "json"

    if args.command == "batch":
        try:
            batch = run_batch(args.path, settings)
        except BatchFileError as exc:
            sys.stderr.write(f"milnorlab: {exc}\n")
            return exit_code_for(exc)
        _emit(dump(batch.model_dump(), fmt), args.out)
        return batch.exit_code

    raw = {"command": args.command, "f": args.f, "g": args.g, "format": fmt}
    if args.vars:
        raw["variables"] = [v.strip() for v in args.vars.split(",") if v.strip()]
    for flag in ("order", "tol", "samples", "radius"):
        value = getattr(args, flag)
        if value is not None:
            raw[flag] = value
    report = _run_raw(raw, job_defaults(settings))
    _emit(dump(report.model_dump(), fmt), args.out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
