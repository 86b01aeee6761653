import math
from dataclasses import dataclass, field

from fino_callnet.domain.model import ValueObject

LEAF = -1


@dataclass(frozen=True, slots=True)
class TreeNode(ValueObject):
    """
    決定木のノード
    - 内部ノード: feature 番目の特徴量が threshold 以下なら left、それ以外は right
    - 葉: feature = LEAF、distribution に (非デフォルト, デフォルト) の確率
    """

    feature: int
    threshold: float
    left: int
    right: int
    distribution: tuple[float, float]

    @property
    def is_leaf(self) -> bool:
        return self.feature == LEAF

    def _validate(self) -> None:
        if self.is_leaf:
            total = sum(self.distribution)
            if any(p < 0 for p in self.distribution) or abs(total - 1.0) > 1e-9:
                raise ValueError(f"Leaf distribution must be a probability vector: {self.distribution}")
        elif not math.isfinite(self.threshold):
            raise ValueError(f"Split threshold must be finite: {self.threshold}")


@dataclass(frozen=True, slots=True)
class TreeModel(ValueObject):
    """学習済みの決定木の構造。features_used は内部ノードに現れる特徴量の集合"""

    nodes: tuple[TreeNode, ...]
    features_used: frozenset[int]
    depth: int

    def _validate(self) -> None:
        if not self.nodes:
            raise ValueError("A tree needs at least one node")
        internal = {node.feature for node in self.nodes if not node.is_leaf}
        if internal != set(self.features_used):
            raise ValueError("features_used must be exactly the features of internal nodes")

    @property
    def n_leaves(self) -> int:
        return sum(node.is_leaf for node in self.nodes)

    def uses(self, feature: int) -> bool:
        return feature in self.features_used


@dataclass(frozen=True, slots=True)
class ForestModel(ValueObject):
    """ランダムフォレストの構造。木ごとのブートストラップのシードを保持する"""

    trees: tuple[TreeModel, ...]
    seeds: tuple[int, ...] = field(default=())
    mtry: int = 1

    def _validate(self) -> None:
        if not self.trees:
            raise ValueError("A forest needs at least one tree")
        if self.seeds and len(self.seeds) != len(self.trees):
            raise ValueError("One bootstrap seed per tree is required")
        if self.mtry < 1:
            raise ValueError(f"mtry must be positive: {self.mtry}")

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    @property
    def features_used(self) -> tuple[frozenset[int], ...]:
        return tuple(tree.features_used for tree in self.trees)
