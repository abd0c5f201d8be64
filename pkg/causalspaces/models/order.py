from pydantic import BaseModel, model_validator

from ..core.preorder import EventSet, Preorder


class PreorderDocument(BaseModel):
    labels: list[str]
    reach: list[list[bool]]

    @model_validator(mode="after")
    def check_square(self):
        n = len(self.labels)
        if len(self.reach) != n or any(len(row) != n for row in self.reach):
            raise ValueError(f"reach must be a {n}x{n} matrix")
        return self

    @classmethod
    def from_order(cls, order: Preorder) -> "PreorderDocument":
        return cls(labels=list(order.labels), reach=[list(row) for row in order.reach])

    def to_order(self) -> Preorder:
        rows = tuple(
            sum(1 << j for j, related in enumerate(row) if related) for row in self.reach
        )
        return Preorder(EventSet(tuple(self.labels)), rows)
