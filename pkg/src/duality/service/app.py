"""FastAPI service wrapping the core package.

All endpoints are pure functions of their request payload (seeds included),
so responses are reproducible and the service can be scaled or called
in-process by the CLI interchangeably.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..borders import (
    BorderCurve,
    p1_measure_borders,
    ququart_conjectured_border,
    qubit_border,
    qunit_entropic_conjecture,
    qutrit_region,
    random_state_scan,
)
from ..clicks import estimate_pv, sample_particle_mode, sample_wave_mode
from ..errors import BadMeasure, BadParameter, DualityError, EmptyRuns
from ..fourier import FourierFamily
from ..measures import CANONICAL_MEASURES, knowledge, parse_measure
from ..states import state_from_dict
from ..strength import SearchConfig, strength
from ..verify import run_suite
from . import schemas


def _search_config(model: schemas.SearchModel | None) -> SearchConfig:
    if model is None:
        return SearchConfig()
    return SearchConfig(
        starts=model.starts,
        grid=model.grid,
        tol=model.tol,
        max_iter=model.max_iter,
        seed=model.seed,
    )


def _fourier_model(family: FourierFamily) -> schemas.FourierModel:
    return schemas.FourierModel(**family.to_dict())


def _family_from_model(model: schemas.FourierModel) -> FourierFamily:
    return FourierFamily.from_dict(model.model_dump())


def _curve_model(curve: BorderCurve, label: str = "") -> schemas.CurveModel:
    return schemas.CurveModel(
        measure=curve.measure,
        n=curve.n,
        kind=curve.kind,
        label=label,
        points=[
            schemas.CurvePointModel(p=q.p, v=q.v, param=q.param) for q in curve.points
        ],
    )


def build_border_curves(n: int, measure_text: str, samples: int, curve: str) -> list[schemas.CurveModel]:
    """Dispatch the border request onto the catalogued curves.

    n=2: any measure (analytic).  n=3: the four canonical measures, outer
    and/or inner.  n=4 linear: the conjectured curve.  one-guess /
    renyi:inf / renyi:0: the top-probability ellipses for any n.  entropy
    with n >= 4: the conjectured entropic curve.
    """
    measure = parse_measure(measure_text)
    if curve not in ("auto", "outer", "inner", "both", "conjectured"):
        raise BadParameter(f"unknown curve selector {curve!r}")
    if n == 2:
        if curve in ("inner", "conjectured"):
            raise BadParameter(f"two paths have no {curve} border curve")
        return [_curve_model(qubit_border(measure, samples), label="outer")]
    if n == 3 and measure.kind in CANONICAL_MEASURES:
        if curve == "conjectured":
            raise BadParameter("three-path borders are analytic, not conjectured")
        outer, inner = qutrit_region(measure, samples)
        if curve in ("auto", "outer"):
            return [_curve_model(outer, label="outer")]
        if curve == "inner":
            return [_curve_model(inner, label="inner")]
        return [_curve_model(outer, label="outer"), _curve_model(inner, label="inner")]
    if measure.kind == "one-guess":
        return [_curve_model(p1_measure_borders(n, "one-guess", samples), label="outer")]
    if measure.kind == "renyi-inf":
        return [_curve_model(p1_measure_borders(n, "renyi-inf", samples), label="outer")]
    if measure.kind == "renyi-0":
        return [_curve_model(p1_measure_borders(n, "renyi-0", samples), label="outer")]
    if n == 4 and measure.kind == "linear":
        return [_curve_model(ququart_conjectured_border(samples), label="conjectured")]
    if measure.kind == "entropy":
        curve_obj, _, _ = qunit_entropic_conjecture(n, samples)
        return [_curve_model(curve_obj, label="conjectured")]
    raise BadMeasure(
        f"no catalogued border for measure {measure_text!r} at n={n}; "
        "use scan for a numeric cloud"
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="multipath-duality",
        version=__version__,
        description="Path knowledge and interference strength computations",
    )

    @app.exception_handler(DualityError)
    async def _domain_error(_: Request, exc: DualityError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content=schemas.ErrorModel(
                error=type(exc).__name__, message=str(exc)
            ).model_dump(),
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/measure", response_model=schemas.MeasureResponse)
    def measure(req: schemas.MeasureRequest) -> schemas.MeasureResponse:
        rho = state_from_dict(req.state.model_dump())
        spec = parse_measure(req.measure)
        result = strength(spec, rho, _search_config(req.search))
        return schemas.MeasureResponse(
            p=knowledge(spec, rho),
            v=result.v,
            argmax_fourier=_fourier_model(result.argmax),
            iterations=result.iterations,
            residual=result.residual,
            lower_bound_only=result.lower_bound_only,
        )

    @app.post("/border", response_model=schemas.BorderResponse)
    def border(req: schemas.BorderRequest) -> schemas.BorderResponse:
        return schemas.BorderResponse(
            curves=build_border_curves(req.n, req.measure, req.samples, req.curve)
        )

    @app.post("/scan", response_model=schemas.ScanResponse)
    def scan(req: schemas.ScanRequest) -> schemas.ScanResponse:
        spec = parse_measure(req.measure)
        points = random_state_scan(
            req.n,
            spec,
            req.count,
            purity_mix=req.purity_mix,
            seed=req.seed,
            cfg=_search_config(req.search),
        )
        return schemas.ScanResponse(
            measure=str(spec),
            n=req.n,
            points=[
                schemas.CurvePointModel(p=q.p, v=q.v, param=q.param) for q in points
            ],
        )

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
        rho = state_from_dict(req.state.model_dump())
        spec = parse_measure(req.measure) if req.measure else None
        families = [_family_from_model(f) for f in req.fourier]
        if req.optimize:
            if spec is None:
                raise BadParameter("optimize=true needs a measure")
            cfg = _search_config(req.search)
            if req.search is None:
                cfg = SearchConfig(seed=req.seed)
            families.append(strength(spec, rho, cfg).argmax)
        particle = sample_particle_mode(rho, req.shots, seed=req.seed)
        waves = [
            sample_wave_mode(rho, fam, req.shots, seed=req.seed + 1 + k)
            for k, fam in enumerate(families)
        ]
        records = [particle] + waves
        estimate = None
        if spec is not None:
            if not waves:
                raise EmptyRuns("estimation needs at least one wave run; pass fourier settings or optimize=true")
            est = estimate_pv(
                spec, particle, waves, resamples=req.resamples, seed=req.seed + 1000
            )
            estimate = schemas.EstimateModel(
                p=est.p, v=est.v, p_stderr=est.p_stderr, v_stderr=est.v_stderr
            )
        return schemas.SimulateResponse(
            records=[
                schemas.RecordModel(
                    mode=r.mode,
                    shots=r.shots,
                    counts=list(r.counts),
                    fourier=None if r.fourier is None else _fourier_model(r.fourier),
                )
                for r in records
            ],
            estimate=estimate,
        )

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
        report = run_suite(req.suite, seed=req.seed)
        return schemas.VerifyResponse(
            suite=report.suite,
            passed=report.passed,
            checks=[schemas.CheckModel(**c.to_dict()) for c in report.checks],
        )

    return app


app = create_app()
