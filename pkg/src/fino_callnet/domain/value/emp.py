from dataclasses import dataclass
from decimal import Decimal

import numpy as np
import numpy.typing as npt

from fino_callnet.domain.model import ValueObject


@dataclass(frozen=True, slots=True)
class EmpParams(ValueObject):
    """
    期待最大利益（EMP）のパラメータ
    - π0: デフォルト（defaulter）の事前確率、π1 = 1 - π0
    - λ の分布 h: λ=0 に質量 p0、λ=LGD に質量 p1、残りは (0, LGD) 上の一様分布
    - 拒否のコスト c* は常に0
    """

    roi: float = 0.05
    lgd: float = 0.8
    p0: float = 0.0
    p1: float = 0.0
    pi0: float = 0.05

    def _validate(self) -> None:
        if self.roi <= 0:
            raise ValueError(f"ROI must be positive: {self.roi}")
        if not 0.0 < self.lgd <= 1.0:
            raise ValueError(f"LGD must be in (0, 1]: {self.lgd}")
        if self.p0 < 0 or self.p1 < 0 or self.p0 + self.p1 > 1.0 + 1e-12:
            raise ValueError(f"Invalid point masses p0={self.p0}, p1={self.p1}")
        if not 0.0 <= self.pi0 <= 1.0:
            raise ValueError(f"Prior out of range: {self.pi0}")

    @property
    def pi1(self) -> float:
        return 1.0 - self.pi0

    @property
    def uniform_mass(self) -> float:
        return max(0.0, 1.0 - self.p0 - self.p1)

    @property
    def mean_lambda(self) -> float:
        return self.p1 * self.lgd + self.uniform_mass * self.lgd / 2.0

    def with_priors(self, pi0: float) -> "EmpParams":
        return EmpParams(roi=self.roi, lgd=self.lgd, p0=self.p0, p1=self.p1, pi0=pi0)

    def with_overrides(self, **changes: float) -> "EmpParams":
        values = {"roi": self.roi, "lgd": self.lgd, "p0": self.p0, "p1": self.p1, "pi0": self.pi0}
        values.update(changes)
        return EmpParams(**values)


@dataclass(frozen=True, slots=True)
class LoanOutcome(ValueObject):
    """
    1件のローンの結果
    - principal: 与信額 A（クレジットカードの利用限度額）
    - ead: デフォルト時の利用残高
    """

    principal: Decimal
    ead: Decimal
    lgd: Decimal
    is_defaulter: bool

    def _validate(self) -> None:
        if self.principal <= 0:
            raise ValueError(f"Principal must be positive: {self.principal}")
        if not Decimal(0) <= self.ead <= self.principal:
            raise ValueError(f"EAD {self.ead} outside [0, {self.principal}]")
        if not Decimal(0) < self.lgd <= Decimal(1):
            raise ValueError(f"LGD must be in (0, 1]: {self.lgd}")

    @classmethod
    def of(cls, principal: float, ead: float, lgd: float, is_defaulter: bool) -> "LoanOutcome":
        return cls(
            principal=Decimal(str(principal)),
            ead=Decimal(str(ead)),
            lgd=Decimal(str(lgd)),
            is_defaulter=is_defaulter,
        )

    @property
    def lost_fraction(self) -> float:
        """λ = LGD·EAD/A"""
        return float(self.lgd * self.ead / self.principal)


@dataclass(frozen=True, slots=True, eq=False)
class LambdaDistribution(ValueObject):
    """デフォルト顧客の λ の経験分布（p0, p1 とヒストグラム）"""

    p0: float
    p1: float
    lgd: float
    bin_edges: npt.NDArray[np.float64]
    counts: npt.NDArray[np.int64]
    n_defaulters: int

    def _validate(self) -> None:
        if len(self.bin_edges) != len(self.counts) + 1:
            raise ValueError("Histogram edges must be one longer than counts")
        if self.p0 < 0 or self.p1 < 0 or self.p0 + self.p1 > 1.0 + 1e-12:
            raise ValueError(f"Invalid point masses p0={self.p0}, p1={self.p1}")


@dataclass(frozen=True, slots=True)
class EmpReport(ValueObject):
    """
    EMP による評価結果
    - emp: 総与信額に対する期待最大利益の割合
    - emp_fraction: 拒否すべき申込の割合 η̄
    """

    model_name: str
    auc: float
    emp: float
    emp_fraction: float
    implied_cutoff: float
    model_profit: Decimal
    no_model_profit: Decimal

    def _validate(self) -> None:
        if not 0.0 <= self.emp_fraction <= 1.0 + 1e-12:
            raise ValueError(f"EMP fraction out of range: {self.emp_fraction}")
