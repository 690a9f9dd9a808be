"""Pydantic request/response models for the HTTP surface.

All responses carry a top-level schemaVersion plus the tolerance/precision
settings that produced their numbers.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class FieldRange(BaseModel):
    start: float = Field(ge=0)
    stop: float = Field(ge=0)
    steps: int = Field(ge=1, le=100_000)


class SectorRange(BaseModel):
    start: int = Field(ge=0)
    stop: int = Field(ge=0)


class EnergyRequest(BaseModel):
    N: int = Field(ge=2)
    J: float = Field(default=1.0, gt=0)
    B: Optional[float] = Field(default=None, ge=0)
    b_range: Optional[FieldRange] = None
    auto_grid: bool = False
    r: Optional[int] = Field(default=None, ge=0)
    r_range: Optional[SectorRange] = None


class EnergyRow(BaseModel):
    r: int
    B: float
    energy: float


class EnergyResponse(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    command: Literal["energy"] = "energy"
    N: int
    J: float
    precision: str = "standard"
    rows: list[EnergyRow]


class PhaseDiagramRequest(BaseModel):
    N: int = Field(ge=2)
    J: float = Field(default=1.0, gt=0)
    samples_per_interval: int = Field(default=3, ge=1, le=1000)


class IntervalModel(BaseModel):
    r: int
    bLow: float
    bHigh: Optional[float]   # None encodes the unbounded top interval
    dCoefficient: float
    dEdB: float


class PlotRow(BaseModel):
    B: float
    eMin: float
    dEdB: float
    r: int


class PhaseDiagramResponse(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    command: Literal["phase_diagram"] = "phase_diagram"
    N: int
    J: float
    precision: str = "standard"
    criticalFields: list[float]
    derivativeJumps: list[float]
    intervals: list[IntervalModel]
    plot: list[PlotRow]


class SchmidtRequest(BaseModel):
    N: int = Field(ge=2)
    M: Optional[int] = Field(default=None, ge=1)
    r: Optional[int] = Field(default=None, ge=0)
    r_range: Optional[SectorRange] = None
    tolerance: float = Field(default=1e-10, gt=0, lt=1)
    precision: Literal["standard", "extended"] = "standard"


class BlockRankModel(BaseModel):
    l: int
    rank: int
    rows: int
    cols: int
    smallestRetained: float
    largestDiscarded: float
    gap: float
    reliable: bool
    precision: str


class RankReportModel(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    N: int
    M: int
    r: int
    tolerance: float
    blocks: list[BlockRankModel]
    totalRank: int
    reliable: bool


class SchmidtResponse(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    command: Literal["schmidt"] = "schmidt"
    N: int
    M: int
    tolerance: float
    precision: str
    reports: list[RankReportModel]
    reliable: bool


class ClassifyRequest(BaseModel):
    N: int = Field(ge=2)
    J: float = Field(default=1.0, gt=0)
    M: Optional[int] = Field(default=None, ge=1)
    tolerance: float = Field(default=1e-10, gt=0, lt=1)
    precision: Literal["standard", "extended"] = "standard"


class TransitionModel(BaseModel):
    r: int
    criticalField: float
    rankAbove: int       # Schmidt rank of the sector-r state (B just above)
    rankBelow: int       # Schmidt rank of the sector-(r+1) state (B just below)
    verdict: str
    reliable: bool


class ClassifyResponse(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    command: Literal["classify"] = "classify"
    N: int
    J: float
    M: int
    tolerance: float
    precision: str
    transitions: list[TransitionModel]
    reliable: bool


class VerifyRequest(BaseModel):
    N: int = Field(ge=2)
    J: float = Field(default=1.0, gt=0)
    tolerance: float = Field(default=1e-10, gt=0, lt=1)


class CheckModel(BaseModel):
    name: str
    passed: bool
    cases: int
    failures: list[str]
    detail: str = ""


class VerifyResponse(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    command: Literal["verify"] = "verify"
    N: int
    J: float
    tolerance: float
    checks: list[CheckModel]
    allPassed: bool


class StateRequest(BaseModel):
    N: int = Field(ge=2)
    r: int = Field(ge=0)


class StateResponse(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    command: Literal["state"] = "state"
    N: int
    r: int
    normConstant: float
    entries: list[list[float]]


class ErrorDetail(BaseModel):
    errorType: str
    message: str
