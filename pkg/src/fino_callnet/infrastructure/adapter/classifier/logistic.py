import logging
import warnings
from typing import Any

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import LogisticRegression
from sklearn.pipeline import Pipeline, make_pipeline
from sklearn.preprocessing import StandardScaler

from fino_callnet.domain.error import ConvergenceError, DataError
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.scored_dataset import ScoredDataset
from fino_callnet.interface.config.model import ModelConfig

logger = logging.getLogger(__name__)


class LogisticClassifier:
    """
    標準化した特徴量に対するロジスティック回帰（L2 正則化 1/C）
    tolerance までに収束しなければ ConvergenceError
    """

    name = "logit"

    def __init__(self, config: ModelConfig) -> None:
        self.config = config
        self._pipeline: Pipeline | None = None
        self._feature_names: tuple[str, ...] = ()

    @property
    def estimator(self) -> Pipeline:
        if self._pipeline is None:
            raise RuntimeError("LogisticClassifier is not fitted")
        return self._pipeline

    def fit(self, train: FeatureMatrix) -> None:
        if not 0 < int(train.target.sum()) < train.n_rows:
            raise DataError("logistic regression needs both classes in the training set")
        pipeline = make_pipeline(
            StandardScaler(),
            LogisticRegression(
                C=self.config.logit_c,
                tol=self.config.logit_tol,
                max_iter=self.config.logit_max_iter,
                solver="lbfgs",
            ),
        )
        with warnings.catch_warnings():
            warnings.simplefilter("error", ConvergenceWarning)
            try:
                pipeline.fit(train.values, train.target.astype(np.int64))
            except ConvergenceWarning as e:
                raise ConvergenceError(
                    "logistic regression did not converge",
                    iterations=self.config.logit_max_iter,
                    residual=float("nan"),
                ) from e
        model: LogisticRegression = pipeline[-1]
        logger.info(
            "logistic regression fitted on %d rows x %d features in %d iterations",
            train.n_rows,
            train.n_features,
            int(np.max(model.n_iter_)),
        )
        self._pipeline = pipeline
        self._feature_names = train.feature_names

    def predict(self, test: FeatureMatrix) -> ScoredDataset:
        score = self.estimator.predict_proba(test.values)[:, 1]
        return ScoredDataset(
            subject_ids=test.subject_ids,
            y=test.target,
            score=np.clip(score.astype(np.float64), 0.0, 1.0),
            model_name=self.name,
        )

    def export(self) -> dict[str, Any]:
        scaler: StandardScaler = self.estimator[0]
        model: LogisticRegression = self.estimator[-1]
        return {
            "kind": self.name,
            "features": list(self._feature_names),
            "scaler_mean": scaler.mean_.tolist(),
            "scaler_scale": scaler.scale_.tolist(),
            "coefficients": model.coef_[0].tolist(),
            "intercept": float(model.intercept_[0]),
            "iterations": int(np.max(model.n_iter_)),
        }


def train_logistic(train: FeatureMatrix, config: ModelConfig) -> LogisticClassifier:
    classifier = LogisticClassifier(config)
    classifier.fit(train)
    return classifier
