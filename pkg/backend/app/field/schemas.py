import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.config import get_settings


class FieldConfig(BaseModel):
    """Quadrupole coupling c, magnetic splitting b, drive frequency omega and cone angle theta.

    Rates are angular frequencies (ħ = 1). The path parameter φ = ωt is
    derived from time, never stored.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    c: float = Field(gt=0)
    b: float = Field(0.0, ge=0)
    omega: float = Field(gt=0)
    theta: float = Field(alias="theta_rad", ge=0, le=math.pi)

    @property
    def x(self) -> float:
        return self.b / self.omega

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def is_adiabatic(self, threshold: float | None = None) -> bool:
        if threshold is None:
            threshold = get_settings().adiabatic_ratio_threshold
        return self.omega / self.c <= threshold

    def to_json_dict(self) -> dict:
        return self.model_dump(by_alias=True)


class Regime(str, Enum):
    NON_ABELIAN = "non_abelian"
    ABELIAN = "abelian"


@dataclass(frozen=True)
class LabHamiltonian:
    config: FieldConfig
    regime: Regime

    @property
    def b(self) -> float:
        return 0.0 if self.regime is Regime.NON_ABELIAN else self.config.b


@dataclass(frozen=True)
class EigenBasis:
    """Instantaneous eigenpairs ordered m = +3/2, +1/2, −1/2, −3/2 (columns of ``vectors``)."""

    t: float
    energies: np.ndarray
    vectors: np.ndarray
