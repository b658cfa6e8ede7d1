from fractions import Fraction
from typing import Any

from pydantic import BaseModel, Field, field_validator

from ..config import settings


class GeneratorConfig(BaseModel):
    a: int = Field(..., ge=1, le=64)
    k: int = Field(2, ge=0)
    seed: int = Field(default_factory=lambda: settings.default_seed, ge=0, lt=2**64)
    arc_probability: float = Field(default_factory=lambda: settings.default_arc_probability, ge=0.0, le=1.0)
    max_attempts: int = Field(default_factory=lambda: settings.default_max_attempts, ge=1)
    repair_iterations: int = Field(default_factory=lambda: settings.default_repair_iterations, ge=0)

    @field_validator("arc_probability", mode="before")
    @classmethod
    def _rational(cls, value: Any) -> Any:
        # "3/4" style rationals are accepted alongside floats
        if isinstance(value, str) and "/" in value:
            return float(Fraction(value))
        return value


class ExperimentConfig(GeneratorConfig):
    # instances per experiment (per (a, k) cell for proposition_1)
    count: int = Field(100, ge=0)
    # node budget for enumerate-mode searches
    budget: int = Field(200_000, ge=1)
