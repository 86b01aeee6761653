from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True, slots=True)
class EvaluateOutput:
    rows: list[dict[str, Any]]
    """モデルごとの AUC / EMP / η̄ / カットオフ / 利益"""
    p0: float
    p1: float
    auc_emp_spearman: float | None
    """モデルの AUC の順位と EMP の順位の相関（モデルが2つ未満なら None）"""
