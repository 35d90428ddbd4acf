from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.dressed.schemas import Ansatz

Axis = Literal["b", "omega", "theta", "x"]
Output = Literal["gauge_exact", "dressed", "oracle", "perturbation", "sensitivity"]


class FixedParameters(BaseModel):
    """The parameters held constant along a sweep; theta is in radians."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    c: float = Field(1.0, gt=0)
    b: float | None = Field(None, ge=0)
    omega: float | None = Field(None, gt=0)
    theta: float | None = Field(None, ge=0, le=3.141592653589793, alias="theta_rad")


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis: Axis
    start: float
    stop: float
    points: int = Field(101, ge=2)
    log: bool = False
    fixed: FixedParameters = FixedParameters()
    outputs: list[Output] = ["gauge_exact"]
    ansatz: Ansatz = Ansatz.STANDARD
    steps: int | None = Field(None, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _check(self) -> "SweepSpec":
        if not self.start < self.stop:
            raise ValueError(f"start ({self.start}) must be below stop ({self.stop})")
        if self.log and self.start <= 0:
            raise ValueError("a logarithmic grid needs start > 0")

        fixed = self.fixed
        swept = {"b": fixed.b, "omega": fixed.omega, "theta": fixed.theta}
        if self.axis in swept and swept[self.axis] is not None:
            raise ValueError(f"'{self.axis}' is swept and cannot also be fixed")
        if self.axis == "x":
            if fixed.b is not None:
                raise ValueError("an x sweep derives b from omega; do not fix b")
            needed = ("omega", "theta")
        else:
            needed = tuple(k for k in swept if k != self.axis)
        missing = [k for k in needed if swept[k] is None]
        if missing:
            raise ValueError(f"fixed parameters missing: {', '.join(missing)}")

        if self.axis == "theta" and not (0 <= self.start and self.stop <= 3.141592653589793):
            raise ValueError("theta must stay within [0, π]")
        if self.axis in ("b", "x") and self.start < 0:
            raise ValueError(f"{self.axis} must be non-negative")
        if self.axis == "omega" and self.start <= 0:
            raise ValueError("omega must be positive")
        if not self.outputs:
            raise ValueError("at least one output column group is required")
        if "oracle" in self.outputs and self.steps is None:
            raise ValueError("oracle columns need an explicit step count")
        return self
