from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from fino_callnet.domain.model import ValueObject

if TYPE_CHECKING:
    from fino_callnet.domain.entity.call_graph import CallGraph

# 銀行顧客でない（ラベル不明）ノードの延滞レベル
UNLABELED = -1
MAX_LEVEL = 3


@dataclass(frozen=True, slots=True)
class NodeLabelSet(ValueObject):
    """
    ノードのラベル
    - delinquency_level: 銀行顧客のみ定義（0/1/2/3、3は3ヶ月以上）。telcoのみのノードは欠落（0ではない）
    - subjects: ネットワーク期間の翌月にカードを受け取った顧客
    """

    delinquency_level: Mapping[str, int]
    subjects: frozenset[str] = field(default=frozenset())

    @property
    def bank_customers(self) -> frozenset[str]:
        return frozenset(self.delinquency_level)

    def _validate(self) -> None:
        for node_id, level in self.delinquency_level.items():
            if not 0 <= level <= MAX_LEVEL:
                raise ValueError(f"Delinquency level out of range for {node_id}: {level}")
        orphans = self.subjects - self.bank_customers
        if orphans:
            raise ValueError(f"Subjects must be bank customers: {sorted(orphans)[:5]}")

    def is_bank_customer(self, node_id: str) -> bool:
        return node_id in self.delinquency_level

    def is_subject(self, node_id: str) -> bool:
        return node_id in self.subjects

    def level_array(self, graph: "CallGraph") -> npt.NDArray[np.int64]:
        """グラフのノード順に並べた延滞レベル。ラベルなしは UNLABELED"""
        levels = np.full(graph.n_nodes, UNLABELED, dtype=np.int64)
        for node_id, level in self.delinquency_level.items():
            index = graph.index_of(node_id, missing_ok=True)
            if index is not None:
                levels[index] = level
        return levels

    def seed_mask(self, graph: "CallGraph", min_level: int) -> npt.NDArray[np.bool_]:
        """min_level 回以上延滞した顧客（伝播の情報源）"""
        return self.level_array(graph) >= min_level
