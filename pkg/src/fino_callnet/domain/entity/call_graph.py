from collections import Counter
from dataclasses import dataclass, field
from typing import overload, Literal

import numpy as np
import numpy.typing as npt
from scipy import sparse

from fino_callnet.domain.model import AggregateRoot
from fino_callnet.domain.value.graph_mode import GraphMode


@dataclass(eq=False, slots=True)
class CallGraph(AggregateRoot):
    """
    通話ネットワーク
    - weights: CSR形式の重み行列。行 i が N¹_i（近傍）とその重み w_ij
    - 無向モードでは1本のエッジを両端点から引けるよう対称に格納する
    - 構築後は不変
    """

    timeframe_id: str
    mode: GraphMode
    node_ids: tuple[str, ...]
    weights: sparse.csr_array
    rows_outside_window: int = 0
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.node_ids)
        if self.weights.shape != (n, n):
            raise ValueError(f"Weight matrix shape {self.weights.shape} != ({n}, {n})")
        if self.weights.nnz and float(self.weights.data.min()) < 0:
            raise ValueError("Edge weights cannot be negative")
        if self.weights.diagonal().any():
            raise ValueError("Self-loops are not allowed")
        self._index = {node_id: i for i, node_id in enumerate(self.node_ids)}
        if len(self._index) != n:
            raise ValueError("Node identities must be unique")

    @property
    def identity(self) -> tuple[str, ...]:
        return (self.timeframe_id, self.mode.value)

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        if self.mode.is_directed:
            return int(self.weights.nnz)
        return int(self.weights.nnz) // 2

    @property
    def total_weight(self) -> float:
        total = float(self.weights.sum())
        return total if self.mode.is_directed else total / 2

    @property
    def adjacency(self) -> sparse.csr_array:
        """二値の隣接行列 A"""
        adjacency = self.weights.copy()
        adjacency.data = np.ones_like(adjacency.data)
        return adjacency

    @property
    def degrees(self) -> npt.NDArray[np.int64]:
        return np.diff(self.weights.indptr).astype(np.int64)

    @overload
    def index_of(self, node_id: str, missing_ok: Literal[False] = False) -> int: ...
    @overload
    def index_of(self, node_id: str, missing_ok: bool) -> int | None: ...
    def index_of(self, node_id: str, missing_ok: bool = False) -> int | None:
        index = self._index.get(node_id)
        if index is None and not missing_ok:
            raise KeyError(f"Unknown node: {node_id}")
        return index

    def neighbor_indices(self, index: int) -> tuple[npt.NDArray[np.int32], npt.NDArray[np.float64]]:
        start, end = self.weights.indptr[index], self.weights.indptr[index + 1]
        return self.weights.indices[start:end], self.weights.data[start:end]

    def neighbors(self, node_id: str) -> list[tuple[str, float]]:
        """N¹_i を重み付きで返す（ノード番号の昇順）"""
        indices, data = self.neighbor_indices(self.index_of(node_id))
        order = np.argsort(indices, kind="stable")
        return [(self.node_ids[int(indices[k])], float(data[k])) for k in order]

    def degree_distribution(self) -> dict[int, int]:
        counts = Counter(int(d) for d in self.degrees)
        return dict(sorted(counts.items()))
