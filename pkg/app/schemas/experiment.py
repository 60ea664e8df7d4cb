"""
Experiment configuration and result rows.
"""
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.schemas.measures import EXPERIMENT_MEASURES, MeasureName, OmegaMode, RmiEncoding

UINT64_MAX = 2**64 - 1


class RngSeed(BaseModel):
    """Seed plus substream id; identical pairs reproduce identical random draws."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(0, ge=0, le=UINT64_MAX)
    stream_id: int = Field(0, ge=0, le=UINT64_MAX)

    def substream(self, stream_id: int) -> "RngSeed":
        return RngSeed(seed=self.seed, stream_id=stream_id)


class GroundTruthKind(str, Enum):
    EQUAL_32 = "equal_32"
    ASYMMETRIC = "asymmetric"


class GroundTruthSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: GroundTruthKind
    n: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_size(self) -> "GroundTruthSpec":
        if self.kind is GroundTruthKind.EQUAL_32 and self.n % 32 != 0:
            raise ValueError(f"equal_32 ground truth needs n divisible by 32, got {self.n}")
        if self.kind is GroundTruthKind.ASYMMETRIC and self.n < 8:
            raise ValueError(f"asymmetric ground truth needs n >= 8, got {self.n}")
        return self


class ExperimentKind(str, Enum):
    RANDOM_REASSIGN = "a"
    MERGE_SPLIT = "b"
    SHUFFLE = "c"
    SHUFFLE_OUTSIDE_MAIN = "d"
    NETWORK = "network"

    @property
    def sweeps_cluster_count(self) -> bool:
        return self in (ExperimentKind.RANDOM_REASSIGN, ExperimentKind.MERGE_SPLIT, ExperimentKind.NETWORK)


class ExperimentRecord(BaseModel):
    """Aggregated similarity for one (experiment, param, measure)."""

    model_config = ConfigDict(frozen=True)

    experiment: ExperimentKind
    param: float
    measure: MeasureName
    mean: float
    std: float = Field(..., ge=0.0)
    runs: int = Field(..., ge=1)


class RunValue(BaseModel):
    """A single run's measure value, kept for the debug output."""

    model_config = ConfigDict(frozen=True)

    experiment: ExperimentKind
    param: float
    measure: MeasureName
    run: int
    value: float
    defined: bool


class RunConfig(BaseModel):
    n: int = Field(default_factory=lambda: settings.EXPERIMENT_N, ge=2)
    runs: int = Field(default_factory=lambda: settings.EXPERIMENT_RUNS, ge=1)
    seed: int = Field(default_factory=lambda: settings.EXPERIMENT_SEED, ge=0, le=UINT64_MAX)
    grid: Optional[list[float]] = Field(None, description="Parameter grid; experiment default when omitted")
    measures: list[MeasureName] = Field(default_factory=lambda: list(EXPERIMENT_MEASURES))
    output: Optional[Path] = None
    plot: bool = False
    largest_component: bool = False
    omega_mode: OmegaMode = OmegaMode.AUTO
    rmi_encoding: Optional[RmiEncoding] = Field(None, description="RMI correction code; settings default when omitted")
    full_precision: bool = False
    debug_runs: Optional[Path] = None

    @field_validator("measures")
    @classmethod
    def check_measures(cls, v: list[MeasureName]) -> list[MeasureName]:
        if not v:
            raise ValueError("at least one measure is required")
        return list(dict.fromkeys(v))
