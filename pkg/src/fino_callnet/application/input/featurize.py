from dataclasses import dataclass

from fino_callnet.domain.value.feature_group import FeatureGroupEnum
from fino_callnet.domain.value.graph_mode import GraphMode
from fino_callnet.interface.config.feature import FeatureConfig
from fino_callnet.util.timeframe import Timeframe


@dataclass(frozen=True, slots=True)
class FeaturizeInput:
    timeframes: list[Timeframe]
    modes: list[GraphMode]
    groups: tuple[FeatureGroupEnum, ...]
    config: FeatureConfig
