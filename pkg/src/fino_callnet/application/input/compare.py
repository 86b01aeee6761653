from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class CompareInput:
    model_names: list[str]
    levels: tuple[float, ...] = (0.95, 0.99)
    delong: bool = True
