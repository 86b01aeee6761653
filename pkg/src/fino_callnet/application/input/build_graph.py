from dataclasses import dataclass

from fino_callnet.domain.service.graph_builder import EdgeWeight
from fino_callnet.domain.value.graph_mode import GraphMode
from fino_callnet.util.timeframe import Timeframe


@dataclass(frozen=True, slots=True)
class BuildGraphInput:
    timeframes: list[Timeframe]
    modes: list[GraphMode]
    weight: EdgeWeight = "count"
