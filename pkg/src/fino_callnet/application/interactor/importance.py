import logging
import math

import pandas as pd

from fino_callnet.application.input.importance import ImportanceInput
from fino_callnet.application.output.importance import ImportanceOutput
from fino_callnet.domain.error import DataError
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.importance import (
    accuracy_feature_importance,
    membership_accuracy_importance,
    profit_feature_importance,
)
from fino_callnet.domain.service.labels import loan_outcomes
from fino_callnet.domain.service.rank import rank_correlations
from fino_callnet.domain.value.importance import FeatureImportance
from fino_callnet.infrastructure.adapter.classifier.forest import ForestClassifier, predict_per_tree
from fino_callnet.util.seed import stage_int

logger = logging.getLogger(__name__)


def importance_frame(items: list[FeatureImportance]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "rank": range(1, len(items) + 1),
            "feature": [item.feature for item in items],
            "group": [item.group.value for item in items],
            "importance": [item.importance for item in items],
        }
    )


def _optional(value: float) -> float | None:
    return None if math.isnan(value) else value


class ImportanceUseCase:
    """
    フォレストの特徴量重要度（利益ベース・並べ替えによる精度ベース・木の所属による精度ベース）
    """

    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: ImportanceInput) -> ImportanceOutput:
        name = input.model.name
        classifier = self.pipeline_repository.load_classifier(name)
        if not isinstance(classifier, ForestClassifier):
            raise DataError(f"feature importance needs a random forest, got {classifier.name} for {name}")
        matrix = self.pipeline_repository.load_features()
        _, test_rows = self.pipeline_repository.load_split()
        test = matrix.take(test_rows).select_groups(input.model.groups)

        scored = predict_per_tree(classifier, test)
        votes = scored.per_tree_votes
        if votes is None:
            raise DataError(f"{name} did not return per-tree votes")
        forest = classifier.forest_model()

        tables: dict[str, list[FeatureImportance]] = {}
        if "profit" in input.kinds:
            bank = self.pipeline_repository.load_bank()
            loans = loan_outcomes(bank, test.subject_ids, input.config.lgd)
            tables["profit"] = profit_feature_importance(forest, votes, loans, input.config.params(), test)
        if "accuracy" in input.kinds:
            tables["accuracy"] = accuracy_feature_importance(
                classifier.estimator,
                test,
                seed=stage_int(input.seed, "importance"),
                n_repeats=input.permutation_repeats,
                n_jobs=input.n_jobs,
            )
            tables["membership"] = membership_accuracy_importance(forest, votes, test)

        for kind, items in tables.items():
            frame = importance_frame(items)
            self.pipeline_repository.save_frame("importance", f"importance_{kind}", frame)
            self.pipeline_repository.save_text(
                "importance",
                f"importance_{kind}",
                frame.head(input.top_k).to_string(index=False, na_rep="undefined") + "\n",
            )

        profit = tables.get("profit", [])
        accuracy = tables.get("accuracy", [])
        defined = {item.feature: item.importance for item in profit if item.importance is not None}
        rho = tau = gamma = None
        if profit and accuracy and len(defined) >= 2:
            accuracy_scores = {item.feature: item.importance for item in accuracy if item.feature in defined}
            correlation = rank_correlations(
                {k: float(v) for k, v in defined.items()},
                {k: float(v or 0.0) for k, v in accuracy_scores.items()},
            )
            rho = _optional(correlation.spearman_rho)
            tau = _optional(correlation.kendall_tau)
            gamma = _optional(correlation.goodman_kruskal_gamma)
        self.pipeline_repository.save_json(
            "importance",
            "rank_correlation",
            {"model": name, "spearman_rho": rho, "kendall_tau": tau, "goodman_kruskal_gamma": gamma},
        )
        logger.info("importance for %s (%s): %d features", name, ", ".join(tables), test.n_features)
        return ImportanceOutput(
            model=name,
            kinds=list(tables),
            top_profit=[item.feature for item in profit[: input.top_k]],
            top_accuracy=[item.feature for item in accuracy[: input.top_k]],
            undefined_profit=len(profit) - len(defined),
            spearman_rho=rho,
            kendall_tau=tau,
            goodman_kruskal_gamma=gamma,
        )
