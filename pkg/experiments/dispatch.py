"""
Subcommand handlers for the zetalab command

Each handler turns a RunConfig into an Artifact; `execute` wraps a handler
with the run's numerical overrides, the run journal and output writing.
"""
import json
import logging
import re
from typing import Callable, Dict, List, Optional, Sequence, TextIO

import numpy as np

from core.exceptions import ParamOutOfRange, ParseError, ZetaLabError
from core.utils.analytic import AnalyticFunction
from core.utils.contour import count_zeros_rect
from core.utils.geometry import ComplexRect, Disk
from core.utils.localize import localize_zeros
from core.utils.numerics import numerics_override
from counting.density import DensitySweep, density_sweep
from counting.formulas import ZeroCounting, berndt_count, derivative_zeros, lm_weighted_sum, speiser_check
from counting.mean_values import ingham_integral, mean_square_integral
from experiments.config import RunConfig
from experiments.expressions import parse_expression
from experiments.outputs import Artifact, emit, jsonable
from experiments.recorder import RunRecorder
from gallery import entries as gallery
from polynomials.composer import ComposedFunction, as_analytic
from rouche.alignment import align_search
from rouche.certificates import RoucheCertificate
from rouche.jets import Jet, jet_log_solve
from rouche.scan import TauScanResult, certify_shift, tau_grid, tau_scan
from rouche.targets import aux_monomial_target, aux_poly_target, solve_theta, suggest_alpha

logger = logging.getLogger(__name__)

HANDLERS: Dict[str, Callable[[RunConfig], Artifact]] = {}

DEFAULT_ALPHA = "0.75+0.5i"
ALPHA_SEARCH_RECT = ComplexRect(0.55, 0.95, 0.5, 10.0)


def handler(name: str):
    def register(func):
        HANDLERS[name] = func
        return func

    return register


# Argument parsing


def parse_complex(text) -> complex:
    """'2.5+1i', '(2+0i)', '-i', 3 -> complex"""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    cleaned = str(text).strip().replace(" ", "")
    if cleaned.startswith("(") and cleaned.endswith(")"):
        cleaned = cleaned[1:-1]
    cleaned = re.sub(r"(?<![\d.])i", "1i", cleaned).replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise ParseError(f"not a complex number: {text!r}") from None


def parse_floats(text, count: Optional[int] = None) -> List[float]:
    if isinstance(text, (list, tuple)):
        values = [float(v) for v in text]
    else:
        try:
            values = [float(v) for v in str(text).split(",") if v.strip()]
        except ValueError:
            raise ParseError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(values) != count:
        raise ParamOutOfRange(f"expected {count} numbers, got {len(values)} in {text!r}")
    return values


def parse_params(items: Sequence[str]) -> dict:
    """--param key=value items; values are read as JSON, then as complex numbers, else kept as text"""
    params = {}
    for item in items or ():
        key, sep, raw = item.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {item!r}")
        try:
            value = json.loads(raw)
        except ValueError:
            try:
                value = parse_complex(raw)
            except ParseError:
                value = raw
        params[key.strip()] = value
    return params


def _param(p: dict, key: str, default):
    """p[key] unless it is missing or None; zero is a value"""
    value = p.get(key)
    return default if value is None else value


def _rect(text) -> ComplexRect:
    return ComplexRect(*parse_floats(text, 4))


def _expression(p: dict, default: Optional[str] = None) -> str:
    expression = p.get("expr") or default
    if not expression:
        raise ParamOutOfRange("either --expr or --entry is required")
    return expression


def resolve_function(p: dict, default: Optional[str] = None) -> AnalyticFunction:
    if p.get("entry"):
        return gallery.build(p["entry"], parse_params(p.get("param")))
    return as_analytic(parse_expression(_expression(p, default)))


def resolve_composition(p: dict, default: Optional[str] = None) -> ComposedFunction:
    if p.get("entry"):
        return gallery.compose(p["entry"], parse_params(p.get("param")))
    return parse_expression(_expression(p, default))


# Subcommands


@handler("eval")
def run_eval(config: RunConfig) -> Artifact:
    p = config.params
    f = resolve_function(p, "zeta")
    if p.get("random"):
        rect = _rect(p.get("rect") or "0.5,3,0,50")
        rng = np.random.default_rng(config.seed)
        n = int(p["random"])
        points = rng.uniform(rect.sigma_min, rect.sigma_max, n) + 1j * rng.uniform(rect.t_min, rect.t_max, n)
    elif p.get("at"):
        points = np.array([parse_complex(s) for s in str(p["at"]).split(";") if s.strip()])
    else:
        points = np.array(gallery.REFERENCE_POINTS)
    k = int(_param(p, "derivative", 0))
    values = f.values(points) if k == 0 else np.atleast_1d(f.deriv(points, k))
    data = {
        "function": f.name,
        "derivative": k,
        "points": list(points),
        "values": list(values),
    }
    return Artifact(kind="json", data=data, summary={"function": f.name, "points": len(points)})


@handler("count")
def run_count(config: RunConfig) -> Artifact:
    p = config.params
    f = resolve_function(p)
    rect = _rect(p.get("rect") or "0.51,0.99,0,100")
    report = localize_zeros(f, rect) if p.get("localize") else count_zeros_rect(f, rect)
    return Artifact(kind="json", data=report.to_dict(), summary={"function": f.name, "count": report.count})


def _celery_sweep(expression: str, strip, grid, t_min: float) -> DensitySweep:
    from celery import group

    from counting.tasks import count_rectangle_task

    job = group(count_rectangle_task.s(expression, strip[0], strip[1], t_min, T) for T in grid)
    results = job.apply_async().get()
    results = sorted(results, key=lambda r: r["t_max"])
    return DensitySweep(
        function=expression,
        strip=tuple(strip),
        T_grid=list(grid),
        counts=[r.get("count") if "error" not in r else None for r in results],
        t_min=t_min,
        errors=[f"{r['error']}: {r['message']}" if "error" in r else None for r in results],
    )


@handler("sweep")
def run_sweep(config: RunConfig) -> Artifact:
    p = config.params
    strip = parse_floats(p.get("strip") or "0.51,0.99", 2)
    grid = parse_floats(_param(p, "T", "100,200,400"))
    t_min = float(_param(p, "t_min", 0.0))
    if config.backend == "celery":
        if p.get("entry"):
            raise ParamOutOfRange("the celery backend takes --expr, not --entry")
        sweep = _celery_sweep(_expression(p), strip, grid, t_min)
    else:
        sweep = density_sweep(resolve_function(p), strip, grid, workers=config.workers, t_min=t_min)
    fit = sweep.fit
    summary = {
        "function": sweep.function,
        "completed": len(sweep.completed),
        "slope": fit.slope if fit else None,
        "residual": fit.residual if fit else None,
    }
    return Artifact(
        kind="csv",
        data=sweep.to_dict(),
        frame=sweep.to_frame(),
        columns=[(T, c) for T, c in sweep.completed],
        summary=summary,
    )


def _target(config: RunConfig, F: ComposedFunction):
    p = config.params
    kind = p.get("target") or "monomial"
    if kind == "monomial":
        alpha = parse_complex(p.get("alpha") or DEFAULT_ALPHA)
        return alpha, aux_monomial_target(alpha, int(_param(p, "k", 1)))
    if kind == "poly":
        raw = p.get("alpha") or "auto"
        alpha = suggest_alpha(F.poly, ALPHA_SEARCH_RECT, seed=config.seed) if raw == "auto" else parse_complex(raw)
        return alpha, aux_poly_target(F.poly, alpha)
    raise ParamOutOfRange(f"target must be monomial or poly, got {kind!r}")


@handler("rouche-demo")
def run_rouche_demo(config: RunConfig) -> Artifact:
    p = config.params
    F = resolve_composition(p, "D1")
    alpha, A = _target(config, F)
    disk = Disk(alpha, float(_param(p, "radius", 0.1)))
    cert = certify_shift(F, A, disk, float(_param(p, "tau", 0.0)), p.get("samples"))
    data = {"function": F.name, "target": A.name, "alpha": alpha, "certificate": cert.to_dict()}
    return Artifact(kind="json", data=data, summary={"pass": cert.passed, "tau": cert.tau})


def _celery_scan(config: RunConfig, disk: Disk, k: int, tau_range, step) -> TauScanResult:
    from celery import group

    from rouche.tasks import certificate_task

    p = config.params
    if p.get("entry") or (p.get("target") or "monomial") != "monomial":
        raise ParamOutOfRange("the celery backend scans --expr against the monomial target only")
    grid = tau_grid(tau_range, step)
    center = complex(disk.center)
    job = group(
        certificate_task.s(_expression(p, "D1"), k, center.real, center.imag, disk.radius, float(tau), p.get("samples"))
        for tau in grid
    )
    certificates = []
    for record in job.apply_async().get():
        if "error" in record:
            cert = RoucheCertificate(disk=disk, tau=record["tau"], max_diff=np.inf, min_target=0.0, passed=False, samples=0)
            cert.notes.append(f"{record['error']}: {record['message']}")
        else:
            cert = RoucheCertificate.from_dict(record)
        certificates.append(cert)
    certificates.sort(key=lambda c: c.tau)
    return TauScanResult(certificates=certificates, grid_size=len(grid))


@handler("tau-scan")
def run_tau_scan(config: RunConfig) -> Artifact:
    p = config.params
    F = resolve_composition(p, "D1")
    alpha, A = _target(config, F)
    disk = Disk(alpha, float(_param(p, "radius", 0.1)))
    tau_range = parse_floats(p.get("tau_range") or "0,10", 2)
    step = float(p["step"]) if p.get("step") is not None else None
    if config.backend == "celery":
        result = _celery_scan(config, disk, int(_param(p, "k", 1)), tau_range, step or 0.05)
        streamed = None
    else:
        streamed = config.output if config.output and config.output != "-" else None
        result = tau_scan(
            F,
            A,
            disk,
            tau_range,
            step=step,
            workers=config.workers,
            sink=streamed,
            resume=bool(p.get("resume")),
            checkpoint_every=int(p["checkpoint"]) if p.get("checkpoint") is not None else None,
            samples=p.get("samples"),
            header=config.to_header(),
        )
    summary = {"function": F.name, "target": A.name, **result.summary()}
    return Artifact(
        kind="jsonl",
        data=[c.to_dict() for c in result.certificates],
        columns=[(c.tau, c.margin) for c in result.certificates if np.isfinite(c.margin)],
        summary=summary,
        written=streamed,
    )


@handler("lemma-solve")
def run_lemma_solve(config: RunConfig) -> Artifact:
    p = config.params
    if p.get("jet"):
        jet = Jet(tuple(parse_complex(c) for c in str(p["jet"]).split(",")))
        b = jet_log_solve(jet)
        data = {"jet": list(jet.values), "b": list(b)}
        return Artifact(kind="json", data=data, summary={"order": jet.order})
    F = resolve_composition(p)
    alpha = parse_complex(p.get("alpha") or DEFAULT_ALPHA)
    solution = solve_theta(F.poly, alpha)
    data = {
        "polynomial": str(F.poly),
        "alpha": alpha,
        "theta": list(solution.theta),
        "pivot": solution.pivot,
        "residual": solution.residual,
        "attempts": solution.attempts,
    }
    return Artifact(kind="json", data=data, summary={"residual": solution.residual, "attempts": solution.attempts})


@handler("meanvalue")
def run_meanvalue(config: RunConfig) -> Artifact:
    p = config.params
    f = resolve_function(p, "zeta")
    result = mean_square_integral(
        f, float(_param(p, "sigma", 0.75)), float(_param(p, "T", 1000.0)), float(_param(p, "t_min", 0.0))
    )
    return Artifact(kind="json", data=result.to_dict(), summary={"rel_error": result.rel_error})


@handler("ingham")
def run_ingham(config: RunConfig) -> Artifact:
    p = config.params
    result = ingham_integral(
        int(_param(p, "u", 0)),
        int(_param(p, "v", 0)),
        float(_param(p, "eta", 0.8)),
        float(_param(p, "theta", 0.8)),
        float(_param(p, "T", 1000.0)),
    )
    return Artifact(kind="json", data=result.to_dict(), summary={"rel_error": result.rel_error})


@handler("berndt")
def run_berndt(config: RunConfig) -> Artifact:
    p = config.params
    k = int(_param(p, "k", 1))
    T = float(_param(p, "T", 200.0))
    if p.get("speiser"):
        report = speiser_check(k, float(_param(p, "sigma_max", 0.5)), T)
        return Artifact(kind="json", data=report.to_dict(), summary={"count": report.count})
    if p.get("weighted"):
        empirical, predicted = lm_weighted_sum(k, T, derivative_zeros(k, T))
        data = {"k": k, "T": T, "empirical": empirical, "predicted": predicted, "band": ZeroCounting.band(T)}
        return Artifact(kind="json", data=data, summary={"difference": empirical - predicted})
    data = berndt_count(k, T)
    return Artifact(kind="json", data=data, summary={"count": data["count"], "ratio": data["ratio"]})


@handler("align")
def run_align(config: RunConfig) -> Artifact:
    p = config.params
    lambdas = parse_floats(p.get("lambdas") or "0.6931471805599453,1.0986122886681098")
    hits = align_search(
        lambdas,
        int(_param(p, "M", 1)),
        float(_param(p, "delta", 0.05)),
        parse_floats(p.get("tau_range") or "0.01,10000", 2),
        float(_param(p, "step", 0.01)),
    )
    data = {"lambdas": lambdas, "hits": list(hits), "count": len(hits), "first": hits[0] if len(hits) else None}
    return Artifact(kind="json", data=data, summary={"count": len(hits), "first": data["first"]})


@handler("gallery")
def run_gallery(config: RunConfig) -> Artifact:
    p = config.params
    action = p.get("action") or "list"
    name = p.get("name")
    params = parse_params(p.get("param"))
    if action == "list":
        data = {"entries": gallery.list_entries()}
    elif action == "remark1":
        taus = parse_floats(_param(p, "tau", "0"))
        radius = float(p["radius"]) if p.get("radius") is not None else None
        data = {
            **gallery.remark1_zero_spacing(),
            "checks": [{"tau": tau, "count": gallery.remark1_disk_check(tau, radius).count} for tau in taus],
        }
    elif action == "stopple":
        sweeps = gallery.stopple_mu_sweep(parse_floats(_param(p, "T", "100,200,400")), workers=config.workers)
        data = {str(delta): {"slope": s.fit.slope if s.fit else None, "counts": s.counts} for delta, s in sweeps.items()}
    elif not name:
        raise ParamOutOfRange(f"gallery {action} needs an entry name")
    elif action == "describe":
        data = gallery.describe(name)
    elif action == "check":
        data = {"name": name, "claims": gallery.check_claims(name, params)}
    elif action == "smoke":
        data = {"name": name, "points": list(gallery.REFERENCE_POINTS), "values": gallery.smoke(name, params)}
    else:
        raise ParamOutOfRange(f"unknown gallery action {action!r}")
    return Artifact(kind="json", data=data, summary={"action": action, "name": name})


@handler("runs")
def run_runs(config: RunConfig) -> Artifact:
    runs = RunRecorder.recent(config.params.get("filter"), int(config.params.get("limit") or 20))
    data = [
        {
            "id": run.pk,
            "command": run.command,
            "status": run.status,
            "exit_code": run.exit_code,
            "started_at": run.started_at.isoformat(),
            "output_path": run.output_path,
            "summary": run.summary,
        }
        for run in runs
    ]
    return Artifact(kind="json", data=data, summary={"runs": len(data)})


def dispatch(config: RunConfig) -> Artifact:
    """
    Run one subcommand under the run's numerical overrides

    Raises:
        ZetaLabError: carries the exit code (2 input, 3 numerical, 4 budget)
    """
    try:
        run = HANDLERS[config.command]
    except KeyError:
        raise ParamOutOfRange(f"unknown command {config.command!r}; known: {', '.join(sorted(HANDLERS))}")
    with numerics_override(config.numerics):
        return run(config)


def execute(config: RunConfig, stream: TextIO) -> Artifact:
    """
    dispatch plus run journal and output

    Args:
        config: Resolved run configuration
        stream: Where output goes without --output

    Returns:
        The Artifact written
    """
    record = config.record and config.command != "runs"
    journal = RunRecorder.start(config.command, config.to_header()) if record else None
    try:
        artifact = dispatch(config)
        emit(artifact, config.to_header(), config.output, stream, config.format)
    except ZetaLabError as exc:
        logger.error(f"{config.command} failed ({exc.__class__.__name__}, exit {exc.exit_code}): {exc}")
        if record:
            RunRecorder.fail(journal, exc.exit_code, f"{exc.__class__.__name__}: {exc}")
        raise
    if record:
        RunRecorder.finish(journal, summary=jsonable(artifact.summary), output_path=config.output or "")
    return artifact
