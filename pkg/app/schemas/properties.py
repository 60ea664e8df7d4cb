from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.measures import MeasureName


class PropertyName(str, Enum):
    CONSTANT_BASELINE = "constant_baseline"
    MODEL_INDEPENDENCE = "model_independence"
    UNIT_INTERVAL = "constrained_to_unit_interval"
    CLUSTER_COUNT_BIAS_FREE = "free_of_cluster_count_bias"
    SYMMETRY_BIAS_FREE = "free_of_symmetry_bias"
    MERGE_SPLIT_ENDPOINTS = "merge_split_endpoints_vanish"


class PropertyCheck(BaseModel):
    """Verdict of one property for one measure; ``passed`` is None when the needed experiment is missing."""

    model_config = ConfigDict(frozen=True)

    property: PropertyName
    measure: MeasureName
    passed: Optional[bool] = None
    detail: str = Field("", description="Observed quantity behind the verdict")
