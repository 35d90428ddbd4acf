import math
from typing import Literal

from pydantic import BaseModel, Field

from app.dressed.schemas import Ansatz
from app.gauge.schemas import Subspace
from app.perturbation.schemas import Limit


class GaugeRequest(BaseModel):
    theta_rad: float = Field(ge=0, le=math.pi)
    subspace: Subspace | None = None
    numeric: bool = False
    dphi: float | None = Field(None, gt=0)


class RatesRequest(BaseModel):
    b: float = Field(ge=0)
    omega: float = Field(gt=0)
    theta_rad: float = Field(ge=0, le=math.pi)


class DressRequest(RatesRequest):
    ansatz: Ansatz = Ansatz.STANDARD


class PerturbRequest(RatesRequest):
    limit: Literal["abelian", "non_abelian"] = "abelian"


class SenseRequest(RatesRequest):
    limit: Limit = Limit.EXACT
    sigma_b: float | None = Field(None, ge=0)
    sigma_omega: float = Field(0.0, ge=0)
    n: int = Field(100_000, ge=1)
    seed: int = 0
