from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class TrainedModel:
    name: str
    n_features: int
    n_train_rows: int


@dataclass(frozen=True, slots=True)
class TrainOutput:
    n_train: int
    n_test: int
    n_train_resampled: int
    models: list[TrainedModel]
