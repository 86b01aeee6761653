from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True, slots=True)
class NetstatsOutput:
    reports: dict[str, dict[str, Any]]
    """タイムフレーム → ホモフィリー検定の結果"""
