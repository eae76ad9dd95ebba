"""Pydantic request/response models for the duality service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class StateModel(BaseModel):
    """Density matrix payload: entries are rows of [re, im] pairs."""

    n: Optional[int] = None
    entries: list[list[list[float]]]


class FourierModel(BaseModel):
    n: int
    family: str
    t: Optional[float] = None
    input_phases: list[float] = Field(default_factory=list)
    output_phases: list[float] = Field(default_factory=list)
    column_perm: Optional[list[int]] = None


class SearchModel(BaseModel):
    starts: Optional[int] = None
    grid: int = 24
    tol: float = 1e-10
    max_iter: int = 60
    seed: int = 0


class MeasureRequest(BaseModel):
    state: StateModel
    measure: str
    search: Optional[SearchModel] = None


class MeasureResponse(BaseModel):
    p: float
    v: float
    argmax_fourier: FourierModel
    iterations: int
    residual: float
    lower_bound_only: bool


class BorderRequest(BaseModel):
    n: int
    measure: str
    samples: int = 101
    curve: str = "auto"  # auto | outer | inner | both | conjectured


class CurvePointModel(BaseModel):
    p: float
    v: float
    param: Optional[float] = None


class CurveModel(BaseModel):
    measure: str
    n: int
    kind: str
    label: str = ""
    points: list[CurvePointModel]


class BorderResponse(BaseModel):
    curves: list[CurveModel]


class ScanRequest(BaseModel):
    n: int
    measure: str
    count: int
    purity_mix: float = 0.0
    seed: int = 0
    search: Optional[SearchModel] = None


class ScanResponse(BaseModel):
    measure: str
    n: int
    points: list[CurvePointModel]


class SimulateRequest(BaseModel):
    state: StateModel
    shots: int
    seed: int = 0
    fourier: list[FourierModel] = Field(default_factory=list)
    measure: Optional[str] = None
    optimize: bool = False
    resamples: int = 200
    search: Optional[SearchModel] = None


class RecordModel(BaseModel):
    mode: str
    shots: int
    counts: list[int]
    fourier: Optional[FourierModel] = None


class EstimateModel(BaseModel):
    p: float
    v: float
    p_stderr: float
    v_stderr: float


class SimulateResponse(BaseModel):
    records: list[RecordModel]
    estimate: Optional[EstimateModel] = None


class VerifyRequest(BaseModel):
    suite: str
    seed: int = 0


class CheckModel(BaseModel):
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


class VerifyResponse(BaseModel):
    suite: str
    passed: bool
    checks: list[CheckModel]


class ErrorModel(BaseModel):
    error: str
    message: str
