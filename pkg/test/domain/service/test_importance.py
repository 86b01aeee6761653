import numpy as np
import pytest
from fino_callnet.domain.error import DataError
from fino_callnet.domain.service.dataset import split_rows, undersample
from fino_callnet.domain.service.importance import (
    accuracy_feature_importance,
    membership_accuracy_importance,
    membership_difference,
    per_tree_profit,
    profit_feature_importance,
)
from fino_callnet.domain.value.emp import EmpParams, LoanOutcome
from fino_callnet.domain.value.feature_group import FeatureGroupEnum
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.importance import FeatureImportance, rank_importances
from fino_callnet.domain.value.split_spec import SplitSpec
from fino_callnet.infrastructure.adapter.classifier.forest import ForestClassifier, predict_per_tree, train_forest
from fino_callnet.infrastructure.adapter.synth.planted import PLANTED_FEATURE, planted_feature_matrix
from fino_callnet.interface.config.model import ModelConfig

Fitted = tuple[ForestClassifier, FeatureMatrix, list[LoanOutcome]]


@pytest.mark.domain
class TestMembershipDifference:
    def test_difference(self) -> None:
        per_tree = np.array([1.0, 2.0, 3.0, 4.0])
        used = [frozenset({0}), frozenset({0, 1}), frozenset({1}), frozenset()]
        values = membership_difference(per_tree, used, 3)
        assert values[0] == pytest.approx(1.5 - 3.5)
        assert values[1] == pytest.approx(0.0)
        # どの木にも含まれない
        assert values[2] is None

    def test_feature_in_every_tree_is_undefined(self) -> None:
        values = membership_difference(np.array([1.0, 2.0]), [frozenset({0}), frozenset({0})], 1)
        assert values == [None]

    def test_length_mismatch(self) -> None:
        with pytest.raises(DataError, match="one value per tree"):
            membership_difference(np.array([1.0]), [frozenset(), frozenset()], 1)


@pytest.mark.domain
class TestPerTreeProfit:
    def test_votes_to_profit(self) -> None:
        loans = [LoanOutcome.of(1000, 0, 0.8, False), LoanOutcome.of(1000, 500, 0.8, True)]
        votes = np.array([[False, False], [False, True], [True, True]])
        profits = per_tree_profit(votes, loans, EmpParams(roi=0.1))
        assert profits.tolist() == [100.0 - 400.0, 100.0, -100.0]


@pytest.mark.domain
class TestRankImportances:
    def test_order(self) -> None:
        sd = FeatureGroupEnum.SD
        items = [
            FeatureImportance("b", sd, None),
            FeatureImportance("c", sd, 0.1),
            FeatureImportance("a", sd, None),
            FeatureImportance("d", sd, 0.5),
            FeatureImportance("e", sd, 0.1),
        ]
        assert [item.feature for item in rank_importances(items)] == ["d", "c", "e", "a", "b"]

    def test_nan_is_rejected(self) -> None:
        with pytest.raises(ValueError, match="None rather than NaN"):
            FeatureImportance("a", FeatureGroupEnum.SD, float("nan"))


@pytest.mark.domain
@pytest.mark.slow
class TestPlantedFeatureImportance:
    """情報を持つ特徴量が1つだけのデータで、その特徴量が最上位になる"""

    @pytest.fixture(scope="class")
    def fitted(self) -> Fitted:
        matrix, loans = planted_feature_matrix(n_rows=3000, n_noise=10, effect=3.0, seed=7)
        train_rows, test_rows = split_rows(matrix, SplitSpec(train_fraction=0.7, seed=1))
        train = undersample(matrix.take(train_rows), 1.0, seed=2)
        config = ModelConfig(n_trees=300, mtry=1, max_depth=2, min_samples_leaf=5)
        forest = train_forest(train, config, seed=3)
        test = matrix.take(test_rows)
        test_loans = [loans[i] for i in test_rows]
        return forest, test, test_loans

    def test_profit_importance(self, fitted: Fitted) -> None:
        forest, test, loans = fitted
        votes = predict_per_tree(forest, test).per_tree_votes
        assert votes is not None
        ranking = profit_feature_importance(forest.forest_model(), votes, loans, EmpParams(roi=0.05), test)
        assert ranking[0].feature == PLANTED_FEATURE
        assert ranking[0].importance is not None and ranking[0].importance > 0
        assert len(ranking) == test.n_features

    def test_accuracy_importance(self, fitted: Fitted) -> None:
        forest, test, _ = fitted
        ranking = accuracy_feature_importance(forest.estimator, test, seed=4, n_repeats=3)
        assert ranking[0].feature == PLANTED_FEATURE

    def test_membership_accuracy_importance(self, fitted: Fitted) -> None:
        forest, test, _ = fitted
        votes = predict_per_tree(forest, test).per_tree_votes
        assert votes is not None
        ranking = membership_accuracy_importance(forest.forest_model(), votes, test)
        planted = next(item for item in ranking if item.feature == PLANTED_FEATURE)
        assert planted.importance is not None and planted.importance > 0

    def test_planted_feature_ranks_first_across_seeds(self) -> None:
        config = ModelConfig(n_trees=150, mtry=1, max_depth=2, min_samples_leaf=5)
        profit_first = accuracy_first = 0
        for seed in range(20):
            matrix, loans = planted_feature_matrix(n_rows=2000, n_noise=10, effect=3.0, seed=100 + seed)
            train_rows, test_rows = split_rows(matrix, SplitSpec(train_fraction=0.7, seed=seed))
            forest = train_forest(undersample(matrix.take(train_rows), 1.0, seed=seed), config, seed=seed)
            test = matrix.take(test_rows)
            votes = predict_per_tree(forest, test).per_tree_votes
            assert votes is not None
            profit = profit_feature_importance(
                forest.forest_model(), votes, [loans[i] for i in test_rows], EmpParams(roi=0.05), test
            )
            accuracy = accuracy_feature_importance(forest.estimator, test, seed=seed, n_repeats=3)
            profit_first += profit[0].feature == PLANTED_FEATURE
            accuracy_first += accuracy[0].feature == PLANTED_FEATURE
        assert profit_first >= 18
        assert accuracy_first >= 18

    def test_votes_shape_mismatch(self, fitted: Fitted) -> None:
        forest, test, loans = fitted
        with pytest.raises(DataError, match="votes shape"):
            profit_feature_importance(
                forest.forest_model(), np.zeros((2, test.n_rows), dtype=np.bool_), loans, EmpParams(), test
            )
