import math
from dataclasses import dataclass
from typing import Any

from fino_callnet.domain.model import ValueObject


@dataclass(frozen=True, slots=True)
class HomophilyReport(ValueObject):
    """
    デフォルトラベルの関係依存性
    - m_dyadic: デフォルト同士のエッジ、m_cross: デフォルトと非デフォルトのエッジ
    - dyadicity はデフォルトが2人未満の場合 NaN
    """

    n_default: int
    n_nondefault: int
    m_total: int
    m_cross: int
    m_dyadic: int
    expected_cross_fraction: float
    observed_cross_fraction: float
    z_statistic: float
    p_value: float
    dyadicity: float
    heterophilicity: float

    def _validate(self) -> None:
        if self.m_cross + self.m_dyadic > self.m_total:
            raise ValueError("Edge counts do not partition m_total")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value out of range: {self.p_value}")
        if self.heterophilicity < 0 or (not math.isnan(self.dyadicity) and self.dyadicity < 0):
            raise ValueError("Dyadicity and heterophilicity cannot be negative")

    @property
    def m_nondefault(self) -> int:
        """非デフォルト同士のエッジ"""
        return self.m_total - self.m_cross - self.m_dyadic

    @property
    def classification(self) -> str:
        dyadic = "dyadic" if self.dyadicity > 1 else "not dyadic"
        heterophilic = "heterophilic" if self.heterophilicity < 1 else "not heterophilic"
        return f"{dyadic}, {heterophilic}"

    def to_dict(self) -> dict[str, Any]:
        data = ValueObject.to_dict(self)
        data["m_nondefault"] = self.m_nondefault
        data["classification"] = self.classification
        return data

    def to_text(self) -> str:
        rows = [
            ("defaulters", f"{self.n_default}"),
            ("non-defaulters", f"{self.n_nondefault}"),
            ("edges", f"{self.m_total}"),
            ("cross-label edges", f"{self.m_cross}"),
            ("defaulter-defaulter edges", f"{self.m_dyadic}"),
            ("expected cross fraction", f"{self.expected_cross_fraction:.6f}"),
            ("observed cross fraction", f"{self.observed_cross_fraction:.6f}"),
            ("z", f"{self.z_statistic:.4f}"),
            ("p (one-tailed)", f"{self.p_value:.4g}"),
            ("dyadicity", f"{self.dyadicity:.4f}"),
            ("heterophilicity", f"{self.heterophilicity:.4f}"),
            ("reading", self.classification),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)
