from datetime import datetime
from enum import Enum

from pydantic import BaseModel, Field


class StatsReport(BaseModel):
    spaces: int
    classes: int
    tight_classes: int
    nontight_classes: int
    no_fixed_definite_classes: int
    order_induced_classes: int
    maxima_classes: int
    maxima_spaces: int = 0
    orbit_sizes: dict[int, int] = Field(default_factory=dict)


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    details: str = ""
    timestamp: str = Field(default_factory=lambda: datetime.now().strftime("%H:%M:%S"))
