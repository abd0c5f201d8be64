from datetime import datetime

from pydantic import BaseModel, Field


class SearchCheckpoint(BaseModel):
    """Resume point of a DFS enumeration, written next to the code stream."""

    events: list[str]
    input_sizes: list[int]
    engine: str = "dfs"
    branch_index: int = 0                    # branches fully merged before this one
    branch_prefix: list[int] = Field(default_factory=list)
    leaf_path: list[int] | None = None       # last leaf walked inside branch_index
    emitted: int = 0                         # records in the stream covered by this checkpoint
    visited: int = 0
    finished: bool = False
    last_code: list[int] | None = None
    updated_at: str = Field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))

    def matches(self, events: list[str], input_sizes: list[int]) -> bool:
        return self.events == events and self.input_sizes == input_sizes
