from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class ImportanceOutput:
    model: str
    kinds: list[str]
    """計算した重要度（profit, accuracy, membership）"""
    top_profit: list[str]
    top_accuracy: list[str]
    undefined_profit: int
    """全ての木、またはどの木にも含まれず重要度が定義できない特徴量の数"""
    spearman_rho: float | None
    kendall_tau: float | None
    goodman_kruskal_gamma: float | None
