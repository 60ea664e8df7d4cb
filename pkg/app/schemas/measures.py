from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class NmiNormalization(str, Enum):
    AVERAGE = "average"
    MAX = "max"
    MIN = "min"


class OmegaMode(str, Enum):
    AUTO = "auto"
    EXACT = "exact"
    APPROX = "approx"


class OmegaMethod(str, Enum):
    EXACT = "exact"
    APPROX = "approx"


class RmiEncoding(str, Enum):
    DIRICHLET = "dirichlet"
    FLAT = "flat"


class MeasureName(str, Enum):
    MI = "mi"
    NMI = "nmi"
    AMI = "ami"
    RI = "ri"
    ARI = "ari"
    RMI = "rmi"
    RESMI = "resmi"


# The five measures compared by every experiment, in report order.
EXPERIMENT_MEASURES: tuple[MeasureName, ...] = (
    MeasureName.NMI,
    MeasureName.AMI,
    MeasureName.ARI,
    MeasureName.RMI,
    MeasureName.RESMI,
)

# Measures whose defined values are confined to the unit interval.
UNIT_INTERVAL_MEASURES: frozenset[MeasureName] = frozenset(
    {MeasureName.NMI, MeasureName.RI, MeasureName.RESMI}
)


class MeasureResult(BaseModel):
    """Value of one similarity measure between two labelings."""

    model_config = ConfigDict(frozen=True)

    measure_name: MeasureName
    value: float
    defined: bool = Field(True, description="False when the measure's denominator vanished")
    omega_method: Optional[OmegaMethod] = Field(None, description="How ln Omega was obtained (RMI only)")
    encoding: Optional[RmiEncoding] = Field(None, description="Code used for the RMI correction term (RMI only)")
    unit: Optional[str] = Field(None, description="'nats' for unnormalized quantities")
