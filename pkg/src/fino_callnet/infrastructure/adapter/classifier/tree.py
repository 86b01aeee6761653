import logging
from dataclasses import asdict
from typing import Any

import numpy as np
import numpy.typing as npt
from sklearn.model_selection import GridSearchCV, StratifiedKFold
from sklearn.tree import DecisionTreeClassifier

from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.scored_dataset import ScoredDataset
from fino_callnet.domain.value.tree_model import LEAF, TreeModel, TreeNode
from fino_callnet.interface.config.model import ModelConfig

logger = logging.getLogger(__name__)


def positive_proba(estimator: Any, values: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """
    デフォルト（True）クラスの確率
    学習データが1クラスのみの場合、そのクラスが True なら 1、False なら 0
    """
    classes = list(estimator.classes_)
    proba = np.asarray(estimator.predict_proba(values), dtype=np.float64)
    if True in classes:
        return proba[:, classes.index(True)]
    return np.zeros(len(values), dtype=np.float64)


def export_tree(estimator: Any, classes: npt.ArrayLike) -> TreeModel:
    """scikit-learn の木（DecisionTreeClassifier）を TreeModel に変換する"""
    tree = estimator.tree_
    labels = list(np.asarray(classes).tolist())
    nodes: list[TreeNode] = []
    for i in range(tree.node_count):
        counts = np.asarray(tree.value[i][0], dtype=np.float64)
        total = float(counts.sum())
        probs = counts / total if total > 0 else np.full_like(counts, 1.0 / len(counts))
        by_class = dict(zip(labels, probs.tolist()))
        positive = float(by_class.get(True, 0.0))
        distribution = (1.0 - positive, positive)
        left, right = int(tree.children_left[i]), int(tree.children_right[i])
        if left == right:
            nodes.append(TreeNode(feature=LEAF, threshold=0.0, left=LEAF, right=LEAF, distribution=distribution))
        else:
            nodes.append(
                TreeNode(
                    feature=int(tree.feature[i]),
                    threshold=float(tree.threshold[i]),
                    left=left,
                    right=right,
                    distribution=distribution,
                )
            )
    used = frozenset(node.feature for node in nodes if not node.is_leaf)
    return TreeModel(nodes=tuple(nodes), features_used=used, depth=int(estimator.get_depth()))


def _ccp_grid(train: FeatureMatrix, config: ModelConfig, seed: int) -> list[float]:
    """最小コスト複雑度枝刈りの経路から最大 ccp_grid_size 個の α を等間隔に選ぶ"""
    if config.ccp_grid_size == 1:
        return [0.0]
    path = DecisionTreeClassifier(
        criterion="gini", min_samples_leaf=config.min_samples_leaf, random_state=seed
    ).cost_complexity_pruning_path(train.values, train.target)
    alphas = np.clip(np.asarray(path.ccp_alphas, dtype=np.float64), 0.0, None)
    picks = np.unique(np.linspace(0, len(alphas) - 1, config.ccp_grid_size).round().astype(np.int64))
    return sorted({float(a) for a in alphas[picks]})


class TreeClassifier:
    """
    ジニ不純度の決定木
    枝刈りの強さ（ccp_alpha）を学習セット上の層化 k-fold CV の AUC で選び、学習セット全体で再学習する
    """

    name = "tree"

    def __init__(self, config: ModelConfig, seed: int) -> None:
        self.config = config
        self.seed = seed
        self._tree: DecisionTreeClassifier | None = None
        self.ccp_alpha: float = 0.0

    @property
    def estimator(self) -> DecisionTreeClassifier:
        if self._tree is None:
            raise RuntimeError("TreeClassifier is not fitted")
        return self._tree

    def _base(self, ccp_alpha: float = 0.0) -> DecisionTreeClassifier:
        return DecisionTreeClassifier(
            criterion="gini",
            min_samples_leaf=self.config.min_samples_leaf,
            ccp_alpha=ccp_alpha,
            random_state=self.seed,
        )

    def fit(self, train: FeatureMatrix) -> None:
        n_positive = int(train.target.sum())
        minority = min(n_positive, train.n_rows - n_positive)
        grid = _ccp_grid(train, self.config, self.seed) if minority else [0.0]
        folds = min(self.config.cv_folds, minority)

        if len(grid) == 1 or folds < 2:
            if minority == 0:
                logger.warning("training set has a single class; fitting a single-leaf tree")
            elif folds < self.config.cv_folds:
                logger.warning("only %d minority instances; skipping cross-validated pruning", minority)
            tree = self._base(grid[0]).fit(train.values, train.target)
            self.ccp_alpha = grid[0]
        else:
            if folds < self.config.cv_folds:
                logger.warning("reducing cross-validation folds from %d to %d", self.config.cv_folds, folds)
            search = GridSearchCV(
                self._base(),
                param_grid={"ccp_alpha": grid},
                scoring="roc_auc",
                cv=StratifiedKFold(n_splits=folds, shuffle=True, random_state=self.seed),
                refit=True,
                n_jobs=self.config.n_jobs,
            )
            search.fit(train.values, train.target)
            tree = search.best_estimator_
            self.ccp_alpha = float(search.best_params_["ccp_alpha"])
            logger.debug("cross-validated AUC %.4f at ccp_alpha=%g", search.best_score_, self.ccp_alpha)

        self._tree = tree
        logger.info(
            "decision tree fitted: depth %d, %d leaves, ccp_alpha=%g",
            tree.get_depth(),
            tree.get_n_leaves(),
            self.ccp_alpha,
        )

    def predict(self, test: FeatureMatrix) -> ScoredDataset:
        return ScoredDataset(
            subject_ids=test.subject_ids,
            y=test.target,
            score=positive_proba(self.estimator, test.values),
            model_name=self.name,
        )

    def tree_model(self) -> TreeModel:
        return export_tree(self.estimator, self.estimator.classes_)

    def export(self) -> dict[str, Any]:
        model = self.tree_model()
        return {
            "kind": self.name,
            "ccp_alpha": self.ccp_alpha,
            "depth": model.depth,
            "features_used": sorted(model.features_used),
            "nodes": [asdict(node) for node in model.nodes],
        }


def train_tree(train: FeatureMatrix, config: ModelConfig, seed: int) -> TreeClassifier:
    classifier = TreeClassifier(config, seed)
    classifier.fit(train)
    return classifier
