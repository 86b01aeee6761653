from collections.abc import Mapping
from dataclasses import dataclass

from fino_callnet.util.timeframe import Timeframe


@dataclass(frozen=True, slots=True)
class NetstatsInput:
    timeframes: list[Timeframe]
    permutations: int = 0
    seed: int = 0
    labels: Mapping[str, bool] | None = None
    """指定時は銀行データの代わりにこのラベルで検定する"""
