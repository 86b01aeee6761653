from dataclasses import dataclass

from fino_callnet.domain.value.graph_mode import GraphMode
from fino_callnet.interface.config.propagation import PropagationConfig
from fino_callnet.util.timeframe import Timeframe


@dataclass(frozen=True, slots=True)
class PropagateInput:
    timeframes: list[Timeframe]
    modes: list[GraphMode]
    config: PropagationConfig
