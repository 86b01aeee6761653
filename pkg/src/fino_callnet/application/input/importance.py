from dataclasses import dataclass

from fino_callnet.application.input.train import ModelSpec
from fino_callnet.interface.config.emp import EmpConfig


@dataclass(frozen=True, slots=True)
class ImportanceInput:
    model: ModelSpec
    config: EmpConfig
    seed: int = 0
    permutation_repeats: int = 5
    top_k: int = 20
    n_jobs: int | None = None
    kinds: tuple[str, ...] = ("profit", "accuracy")
