from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from fino_callnet.domain.model import ValueObject


class PropagationMethod(Enum):
    PR = "pr"
    """Personalized PageRank"""
    SPA = "spa"
    """Spreading Activation"""


class SeedCriterion(Enum):
    """延滞顧客（情報源）の定義"""

    GE1 = 1
    """1回以上の延滞"""
    GE2 = 2
    """2回以上の延滞"""
    GE3 = 3
    """3回以上の延滞"""

    @property
    def label(self) -> str:
        return f"ge{self.value}"

    @classmethod
    def from_label(cls, label: str) -> "SeedCriterion":
        for criterion in cls:
            if criterion.label == label:
                return criterion
        raise ValueError(f"Unknown seed criterion: {label}")


@dataclass(frozen=True, slots=True, eq=False)
class ExposureVector(ValueObject):
    """
    曝露スコア ξ
    - node_ids はスコアと同じ順序で、計算に使ったグラフのノード順
    """

    node_ids: tuple[str, ...]
    scores: npt.NDArray[np.float64]
    method: PropagationMethod
    seed_criterion: SeedCriterion
    iterations_run: int
    residual: float

    def _validate(self) -> None:
        if self.scores.shape != (len(self.node_ids),):
            raise ValueError("Exposure scores must align with node ids")
        if self.scores.size and float(self.scores.min()) < 0:
            raise ValueError("Exposure scores cannot be negative")

    @property
    def total(self) -> float:
        return float(self.scores.sum())

    def score_of(self, node_id: str) -> float:
        return float(self.scores[self.node_ids.index(node_id)])


@dataclass(frozen=True, slots=True, eq=False)
class RiskRelabeling(ValueObject):
    """カットオフ以上の曝露スコアを持つノードを高リスクとする再ラベル付け"""

    cutoff: float
    high_risk: npt.NDArray[np.bool_]

    def _validate(self) -> None:
        if not np.isfinite(self.cutoff):
            raise ValueError(f"Cutoff must be finite: {self.cutoff}")

    @property
    def n_high_risk(self) -> int:
        return int(self.high_risk.sum())
