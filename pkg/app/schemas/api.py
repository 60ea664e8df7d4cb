"""
Request/response schemas for the HTTP surface.
"""
from typing import Optional, Union

from pydantic import BaseModel, Field

from app.schemas.experiment import ExperimentRecord
from app.schemas.measures import (
    EXPERIMENT_MEASURES,
    MeasureName,
    MeasureResult,
    NmiNormalization,
    OmegaMode,
    RmiEncoding,
)

LabelValue = Union[int, str]


class CompareRequestSchema(BaseModel):
    """Two labelings of the same objects, position i labels object i."""

    f: list[LabelValue] = Field(..., min_length=1, description="First labeling")
    g: list[LabelValue] = Field(..., min_length=1, description="Second labeling")
    measures: list[MeasureName] = Field(
        default_factory=lambda: [*EXPERIMENT_MEASURES, MeasureName.RI],
        min_length=1,
    )
    nmi_normalization: NmiNormalization = NmiNormalization.AVERAGE
    omega_mode: OmegaMode = OmegaMode.AUTO
    rmi_encoding: Optional[RmiEncoding] = None

    model_config = {
        "json_schema_extra": {
            "example": {
                "f": [0, 0, 1, 1],
                "g": [0, 1, 0, 1],
                "measures": ["ri", "ari", "resmi"],
            }
        }
    }


class CompareResponseSchema(BaseModel):
    n: int
    results: list[MeasureResult]


class ExperimentRequestSchema(BaseModel):
    n: Optional[int] = Field(None, ge=2, description="Number of objects; server default when omitted")
    runs: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = Field(None, ge=0)
    grid: Optional[list[float]] = None
    measures: Optional[list[MeasureName]] = None
    omega_mode: OmegaMode = OmegaMode.AUTO
    rmi_encoding: Optional[RmiEncoding] = None


class ExperimentJobSchema(BaseModel):
    """Handle for an enqueued experiment (one background task per grid point)."""

    group_id: str
    experiment: str
    grid_points: int


class ExperimentStatusSchema(BaseModel):
    group_id: str
    status: str = Field(..., description="pending, running, completed or failed")
    completed: int = 0
    total: int = 0
    records: Optional[list[ExperimentRecord]] = None
    error: Optional[str] = None
