from pydantic import BaseModel, model_validator

from ..core.pfun import InputFamily
from ..core.preorder import EventSet
from ..core.space import HistorySpace


class SpaceDocument(BaseModel):
    events: list[str]
    inputs: dict[str, list[int]]
    histories: list[dict[str, int]]

    @model_validator(mode="after")
    def check_inputs(self):
        if set(self.inputs) != set(self.events):
            raise ValueError("inputs must list exactly the declared events")
        return self

    @classmethod
    def from_space(cls, space: HistorySpace) -> "SpaceDocument":
        universe = space.universe
        return cls(
            events=list(space.family.events.labels),
            inputs=space.family.as_mapping(),
            histories=[universe.as_dict(c) for c in space.codes],
        )

    def family(self) -> InputFamily:
        return InputFamily(
            EventSet(tuple(self.events)),
            tuple(tuple(self.inputs[label]) for label in self.events),
        )

    def to_space(self) -> HistorySpace:
        return HistorySpace.from_histories(self.family(), self.histories)
