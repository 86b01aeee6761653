from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class SweepOutput:
    model: str
    parameter: str
    values: list[float]
    emp: list[float]
    emp_fraction: list[float]
