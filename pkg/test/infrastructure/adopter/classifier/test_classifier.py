import io

import joblib
import numpy as np
import pytest
from fino_callnet.domain.error import ConvergenceError, DataError
from fino_callnet.domain.service.roc import roc_and_auc
from fino_callnet.domain.value.feature_group import FeatureGroupEnum
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.scored_dataset import ScoredDataset
from fino_callnet.infrastructure.adapter.classifier.forest import (
    ForestClassifier,
    default_mtry,
    predict_per_tree,
    train_forest,
)
from fino_callnet.infrastructure.adapter.classifier.logistic import LogisticClassifier, train_logistic
from fino_callnet.infrastructure.adapter.classifier.tree import TreeClassifier, train_tree
from fino_callnet.infrastructure.adapter.synth.planted import planted_feature_matrix
from fino_callnet.infrastructure.factory.classifier import create_classifier, dump_classifier, load_classifier
from fino_callnet.interface.config.model import ClassifierKind, ModelConfig
from fino_callnet.interface.port.classifier import ClassifierPort


def make_matrix(values: np.ndarray, target: np.ndarray) -> FeatureMatrix:
    n_rows, n_cols = values.shape
    return FeatureMatrix(
        subject_ids=tuple(f"s{i}" for i in range(n_rows)),
        timeframe_ids=("t1",) * n_rows,
        feature_names=tuple(f"x{j}" for j in range(n_cols)),
        group_tags=(FeatureGroupEnum.SD,) * n_cols,
        values=values.astype(np.float64),
        missing=np.zeros((n_rows, n_cols), dtype=np.bool_),
        target=target.astype(np.bool_),
    )


def xor_matrix(n_rows: int, seed: int) -> FeatureMatrix:
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.1, 1.0, size=(n_rows, 2)) * rng.choice([-1.0, 1.0], size=(n_rows, 2))
    return make_matrix(values, (values[:, 0] > 0) != (values[:, 1] > 0))


def accuracy(scored: ScoredDataset) -> float:
    return float(np.mean((scored.score >= 0.5) == scored.y))


@pytest.fixture(scope="module")
def data() -> tuple[FeatureMatrix, FeatureMatrix]:
    matrix, _ = planted_feature_matrix(n_rows=600, n_noise=3, effect=3.0, seed=11)
    return matrix.take(np.arange(400)), matrix.take(np.arange(400, 600))


@pytest.fixture
def config() -> ModelConfig:
    return ModelConfig(n_trees=25, cv_folds=3, ccp_grid_size=4, min_samples_leaf=5)


@pytest.mark.infrastructure
class TestLogisticClassifier:
    def test_fit_predict(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, test = data
        classifier = train_logistic(train, config)
        scored = classifier.predict(test)
        assert scored.subject_ids == test.subject_ids
        assert np.all((scored.score >= 0) & (scored.score <= 1))
        assert roc_and_auc(scored).auc > 0.8
        assert scored.model_name == "logit"

    def test_export(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, _ = data
        exported = train_logistic(train, config).export()
        assert exported["kind"] == "logit"
        assert exported["features"] == list(train.feature_names)
        coefficients = np.abs(exported["coefficients"])
        # 情報を持つのは planted（先頭の列）だけ
        assert int(np.argmax(coefficients)) == 0

    def test_separable_data(self) -> None:
        rng = np.random.default_rng(0)
        target = rng.random(200) < 0.3
        signal = np.where(target, 1.0, -1.0) * rng.uniform(1.0, 2.0, size=200)
        train = make_matrix(np.column_stack([signal, rng.standard_normal(200)]), target)
        classifier = train_logistic(train, ModelConfig(logit_c=1.0))
        assert accuracy(classifier.predict(train)) == 1.0

    def test_identical_features_give_base_rate(self) -> None:
        target = np.arange(100) < 20
        train = make_matrix(np.tile([3.0, -1.0], (100, 1)), target)
        classifier = train_logistic(train, ModelConfig())
        exported = classifier.export()
        np.testing.assert_allclose(exported["coefficients"], [0.0, 0.0], atol=1e-6)
        # log(0.2 / 0.8)
        assert exported["intercept"] == pytest.approx(-1.3863, abs=1e-4)
        np.testing.assert_allclose(classifier.predict(train).score, 0.2, atol=1e-4)

    def test_single_class(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, _ = data
        negatives = train.take(np.flatnonzero(~train.target))
        with pytest.raises(DataError, match="both classes"):
            LogisticClassifier(config).fit(negatives)

    def test_not_converged(self, data: tuple[FeatureMatrix, FeatureMatrix]) -> None:
        train, _ = data
        config = ModelConfig(logit_max_iter=1, logit_tol=1e-12)
        with pytest.raises(ConvergenceError, match="did not converge"):
            LogisticClassifier(config).fit(train)

    def test_not_fitted(self, config: ModelConfig) -> None:
        with pytest.raises(RuntimeError, match="not fitted"):
            LogisticClassifier(config).estimator


@pytest.mark.infrastructure
class TestTreeClassifier:
    def test_fit_predict(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, test = data
        classifier = train_tree(train, config, seed=1)
        scored = classifier.predict(test)
        assert roc_and_auc(scored).auc > 0.7
        assert classifier.ccp_alpha >= 0.0

    def test_export(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, _ = data
        classifier = train_tree(train, config, seed=1)
        model = classifier.tree_model()
        exported = classifier.export()
        assert exported["depth"] == model.depth
        assert set(exported["features_used"]) <= set(range(train.n_features))
        assert len(exported["nodes"]) == len(model.nodes)
        assert model.n_leaves >= 1

    def test_single_class_is_single_leaf(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, test = data
        negatives = train.take(np.flatnonzero(~train.target))
        classifier = train_tree(negatives, config, seed=1)
        assert classifier.tree_model().n_leaves == 1
        assert np.all(classifier.predict(test).score == 0.0)

    def test_learns_xor(self) -> None:
        config = ModelConfig(cv_folds=3, ccp_grid_size=5, min_samples_leaf=5)
        classifier = train_tree(xor_matrix(400, seed=1), config, seed=0)
        assert classifier.tree_model().depth >= 2
        assert accuracy(classifier.predict(xor_matrix(400, seed=2))) > 0.9


@pytest.mark.infrastructure
class TestForestClassifier:
    def test_score_is_mean_of_trees(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, test = data
        classifier = train_forest(train, config, seed=2)
        scored = predict_per_tree(classifier, test)
        per_tree = classifier.tree_probabilities(test.values)
        np.testing.assert_allclose(scored.score, per_tree.mean(axis=0))
        assert scored.per_tree_votes is not None
        assert scored.per_tree_votes.shape == (25, test.n_rows)
        np.testing.assert_array_equal(scored.per_tree_votes, per_tree >= 0.5)
        assert roc_and_auc(scored).auc > 0.8

    def test_single_tree_without_bootstrap_is_a_tree(self, data: tuple[FeatureMatrix, FeatureMatrix]) -> None:
        train, test = data
        forest = train_forest(
            train, ModelConfig(n_trees=1, mtry=train.n_features, bootstrap=False, min_samples_leaf=5), seed=3
        )
        tree = train_tree(train, ModelConfig(ccp_grid_size=1, min_samples_leaf=5), seed=3)
        np.testing.assert_allclose(forest.predict(test).score, tree.predict(test).score)
        [forest_tree] = forest.forest_model().trees
        assert forest_tree.depth == tree.tree_model().depth
        assert forest_tree.features_used == tree.tree_model().features_used

    def test_unused_features_do_not_change_predictions(self) -> None:
        matrix, _ = planted_feature_matrix(n_rows=500, n_noise=8, effect=3.0, seed=5)
        classifier = train_forest(matrix, ModelConfig(n_trees=10, mtry=1, max_depth=2), seed=6)
        rng = np.random.default_rng(0)
        for estimator, tree in zip(classifier.estimator.estimators_, classifier.forest_model().trees, strict=True):
            unused = sorted(set(range(matrix.n_features)) - tree.features_used)
            assert unused
            shuffled = matrix.values.copy()
            for column in unused:
                shuffled[:, column] = rng.permutation(shuffled[:, column])
            np.testing.assert_array_equal(estimator.predict_proba(shuffled), estimator.predict_proba(matrix.values))

    def test_default_mtry(self) -> None:
        assert default_mtry(1) == 1
        assert default_mtry(4) == 2
        assert default_mtry(10) == 4

    def test_mtry_too_large(self, data: tuple[FeatureMatrix, FeatureMatrix]) -> None:
        train, _ = data
        with pytest.raises(DataError, match="exceeds"):
            ForestClassifier(ModelConfig(n_trees=5, mtry=10), seed=0).fit(train)

    def test_export(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, _ = data
        classifier = train_forest(train, config, seed=2)
        exported = classifier.export()
        assert exported["mtry"] == default_mtry(train.n_features)
        assert len(exported["trees"]) == 25
        assert len({tree["seed"] for tree in exported["trees"]}) == 25
        model = classifier.forest_model()
        assert model.n_trees == 25
        assert all(tree.features_used <= set(range(train.n_features)) for tree in model.trees)

    def test_deterministic(self, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig) -> None:
        train, test = data
        first = train_forest(train, config, seed=5).predict(test)
        second = train_forest(train, config, seed=5).predict(test)
        np.testing.assert_array_equal(first.score, second.score)


@pytest.mark.infrastructure
class TestClassifierFactory:
    @pytest.mark.parametrize(
        ("kind", "expected"),
        [("logit", LogisticClassifier), ("tree", TreeClassifier), ("forest", ForestClassifier)],
    )
    def test_create(self, kind: ClassifierKind, expected: type, config: ModelConfig) -> None:
        classifier = create_classifier(config, seed=0, kind=kind)
        assert isinstance(classifier, expected)
        assert classifier.name == kind

    def test_default_kind_from_config(self) -> None:
        assert isinstance(create_classifier(ModelConfig(classifier="tree"), seed=0), TreeClassifier)

    @pytest.mark.parametrize("kind", ["logit", "tree", "forest"])
    def test_dump_and_load(
        self, kind: ClassifierKind, data: tuple[FeatureMatrix, FeatureMatrix], config: ModelConfig
    ) -> None:
        train, test = data
        classifier: ClassifierPort = create_classifier(config, seed=0, kind=kind)
        classifier.fit(train)
        restored = load_classifier(dump_classifier(classifier))
        np.testing.assert_array_equal(restored.predict(test).score, classifier.predict(test).score)

    def test_load_rejects_other_objects(self) -> None:
        buffer = io.BytesIO()
        joblib.dump({"kind": "forest"}, buffer)
        with pytest.raises(TypeError, match="not a fitted classifier"):
            load_classifier(buffer.getvalue())
