from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class PredictOutput:
    n_test: int
    n_defaulters: int
    models: list[str]
