"""Experiment configuration for bsgeom.

This module holds the budgets, tolerances and output options shared by the
CLI, the tool server and the library entry points that enumerate or optimise.
Values come from keyword arguments or from BSGEOM_* environment variables.
"""

import hashlib
import json
import os
from typing import Any, Dict, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

ENV_PREFIX = "BSGEOM_"


class ExperimentConfig(BaseModel):
    """Budgets, tolerances, seed and output format for one run."""

    model_config = {"frozen": True}

    n: int = Field(2, ge=2, description="Base n of BS(1,n), Q_n and T_n")
    ball_budget: int = Field(
        10_000_000, gt=0, description="Maximum number of group elements enumerated"
    )
    breakpoint_cap: int = Field(1_000_000, gt=0, description="Maximum breakpoints of a PL composition")
    grid_samples: int = Field(64, gt=1, description="Initial grid samples per optimiser parameter")
    optimizer_tol: float = Field(
        1e-9, gt=0, description="Absolute tolerance on the distance upper bound"
    )
    conjugacy_grid: int = Field(4096, gt=1, description="Grid points for conjugacy error checks")
    conjugacy_window: float = Field(
        1000.0, gt=0, description="Half-width of the conjugacy check window"
    )
    conjugacy_tol: float = Field(1e-9, gt=0, description="Admissible conjugacy sup-error")
    declared_qs_constant: float = Field(
        16.0, ge=1, description="Declared K' for non-uniformity witnesses"
    )
    witness_max_power: int = Field(4096, gt=0, description="Largest power tried when building a witness")
    witness_length_constant: int = Field(
        8,
        gt=0,
        description="C in |word(g)| <= C * n * (ceil log_n(size of triple) + 1) for cocompact witnesses",
    )
    seed: int = Field(0, description="Random seed for sampled experiments")
    output_format: Literal["json", "csv", "svg", "table"] = Field("json", description="Artefact format")

    @field_validator("ball_budget", "breakpoint_cap", mode="before")
    @classmethod
    def _coerce_float_budgets(cls, value: Any) -> Any:
        # allow 1e7 style values from the environment
        if isinstance(value, str) and ("e" in value.lower() or "." in value):
            return int(float(value))
        return value

    @classmethod
    def from_env(cls, **overrides: Any) -> "ExperimentConfig":
        """Create a configuration from BSGEOM_* environment variables.

        Explicit keyword overrides win over the environment.

        Returns:
            ExperimentConfig: Validated configuration

        Raises:
            ValueError: If a variable does not validate
        """
        load_dotenv()
        values: Dict[str, Any] = {}
        for name in cls.model_fields:
            raw = os.getenv(f"{ENV_PREFIX}{name.upper()}")
            if raw is not None:
                values[name] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_overrides(self, **overrides: Optional[Any]) -> "ExperimentConfig":
        """Return a copy with the non-None overrides applied and re-validated."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return ExperimentConfig(**data)


def config_hash(config: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON form of a configuration."""
    payload = json.dumps(config.model_dump(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()
