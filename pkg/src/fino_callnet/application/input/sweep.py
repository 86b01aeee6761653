from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from fino_callnet.domain.value.emp import EmpParams

SweepParameter = Literal["roi", "lgd"]


@dataclass(frozen=True, slots=True)
class SweepInput:
    model_name: str
    parameter: SweepParameter
    grid: Sequence[float]
    params: EmpParams
