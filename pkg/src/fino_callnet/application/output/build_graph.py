from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class GraphSummary:
    timeframe_id: str
    mode: str
    n_nodes: int
    n_edges: int
    total_weight: float
    rows_outside_window: int


@dataclass(frozen=True, slots=True)
class BuildGraphOutput:
    graphs: list[GraphSummary]
    subjects: dict[str, int]
    """タイムフレーム → 対象者数"""
    bank_customers: dict[str, int]
    """タイムフレーム → ラベル付きの銀行顧客数"""
