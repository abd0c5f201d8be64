from .checkpoint import SearchCheckpoint
from .order import PreorderDocument
from .report import CheckResult, StatsReport
from .space import SpaceDocument

__all__ = ["CheckResult", "PreorderDocument", "SearchCheckpoint", "SpaceDocument", "StatsReport"]
