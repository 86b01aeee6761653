from dataclasses import dataclass

from fino_callnet.interface.config.emp import EmpConfig


@dataclass(frozen=True, slots=True)
class EvaluateInput:
    model_names: list[str]
    config: EmpConfig
