"""Request and response schemas.

Numbers that come from the multiprecision engine travel as decimal strings
so nothing is lost to binary floats; sampled web coordinates are doubles
written with 17 significant digits.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

Num = str  # decimal string
Pair = tuple[str, str]


class Settings(BaseModel):
    digits: int = Field(50, ge=15, le=2000)
    max_iter: int = Field(10**7, ge=1)


class TileModel(BaseModel):
    kind: str
    index: Optional[int] = None
    center: Pair
    radius: Num
    sides: int
    mutation: bool = False
    expected_period: Optional[int] = None
    virtual: Optional[bool] = False
    woven_radii: Optional[Pair] = None


class StarModel(BaseModel):
    k: int
    location: Pair


class FamilyRequest(Settings):
    n: int = Field(..., ge=3)
    svg: bool = False


class FamilyResponse(BaseModel):
    n: int
    digits: int
    side: Num
    gen_scale: Num
    gen_star: Pair
    r_d: Num
    c_d: Pair
    scales: list[Num]
    star_points: list[StarModel]
    tiles: list[TileModel]
    svg: Optional[str] = None


class WebRequest(Settings):
    n: int = Field(..., ge=3)
    levels: int = Field(10, ge=0)
    samples: int = Field(200, ge=1)
    mode: Literal["forward", "inverse", "combined"] = "combined"
    extent: float = 12.0
    window: Optional[tuple[float, float, float, float]] = None
    include_points: bool = False
    svg: bool = False


class WebResponse(BaseModel):
    n: int
    levels: int
    mode: str
    point_count: int
    survival: list[float]
    points: Optional[list[Pair]] = None
    layers: Optional[list[str]] = None  # per point: forward or inverse
    svg: Optional[str] = None


class OrbitRequest(Settings):
    n: int = Field(..., ge=3)
    point: Optional[Pair] = None
    tile: Optional[str] = None
    backend: Literal["mp", "float"] = "mp"
    record_steps: int = Field(200, ge=0)
    svg: bool = False

    @field_validator("tile")
    @classmethod
    def _one_of(cls, v, info):
        if v is None and info.data.get("point") is None:
            raise ValueError("give a point or a tile name")
        return v


class OrbitResponse(BaseModel):
    n: int
    start: Pair
    period: Optional[int]
    termination: str
    winding: Optional[str]
    steps: list[int]
    svg: Optional[str] = None


class PeriodsRequest(Settings):
    n: int = Field(..., ge=3)
    formula: bool = False
    upto: int = Field(10, ge=1)
    depth: int = Field(2, ge=1)
    backend: Literal["mp", "float"] = "mp"


class PeriodRow(BaseModel):
    generation: int
    kind: str
    period: Optional[int]
    status: str


class PeriodsResponse(BaseModel):
    n: int
    d: Optional[list[int]] = None
    p: Optional[list[int]] = None
    rows: Optional[list[PeriodRow]] = None


class RingRequest(Settings):
    n: int = Field(..., ge=3)
    k: int = Field(0, ge=0)
    simulate: bool = False
    svg: bool = False


class RingResponse(BaseModel):
    n: int
    k: int
    count: int
    periods: list[int]
    step_sequence: list[int]
    winding: str
    simulated: bool
    centers: Optional[list[Pair]] = None
    svg: Optional[str] = None


class DfRequest(Settings):
    rho: str = "1/14"
    levels: int = Field(20, ge=0)
    samples: int = Field(200, ge=1)
    rectify: bool = False
    include_points: bool = False
    svg: bool = False


class DfResponse(BaseModel):
    rho: str
    theta: str
    a: str
    polygon: int
    step: int
    point_count: int
    rectified: bool
    points: Optional[list[Pair]] = None
    atoms: Optional[list[int]] = None
    svg: Optional[str] = None


class QuasiRequest(Settings):
    kind: Literal["ring2", "riffle", "woven"]
    n: Optional[int] = None
    rho: Optional[str] = None
    k: Optional[int] = None
    ratio: Optional[str] = None
    svg: bool = False


class FactorModel(BaseModel):
    name: str
    d: int
    indices: list[int]
    radius: Num


class QuasiResponse(BaseModel):
    kind: str
    sides: int
    vertices: list[Pair]
    factors: list[FactorModel]
    svg: Optional[str] = None


class VerifyRequest(BaseModel):
    criteria: Optional[list[int]] = None


class CriterionModel(BaseModel):
    number: int
    title: str
    passed: bool
    detail: str


class VerifyResponse(BaseModel):
    results: list[CriterionModel]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)
