from dataclasses import dataclass

from fino_callnet.application.input.train import ModelSpec


@dataclass(frozen=True, slots=True)
class PredictInput:
    models: list[ModelSpec]
