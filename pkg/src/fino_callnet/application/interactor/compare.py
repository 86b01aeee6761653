"""
全モデルのペアの AUC を DeLong 検定で比べ、信頼水準ごとの支配グラフ（辺のリスト）を作る
"""

import itertools
import logging

import numpy as np
import pandas as pd

from fino_callnet.application.input.compare import CompareInput
from fino_callnet.application.output.compare import CompareOutput
from fino_callnet.domain.error import DataError
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.roc import delong_test, domination_edges, roc_and_auc

logger = logging.getLogger(__name__)


class CompareUseCase:
    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: CompareInput) -> CompareOutput:
        if len(input.model_names) < 2:
            raise DataError("comparison needs at least two models")
        scored = {name: self.pipeline_repository.load_scores(name) for name in input.model_names}
        reference = scored[input.model_names[0]]
        for name, other in scored.items():
            if other.subject_ids != reference.subject_ids or not np.array_equal(other.y, reference.y):
                raise DataError(f"{name} was scored on a different test set")

        aucs = pd.DataFrame(
            {"model": sorted(scored), "auc": [roc_and_auc(scored[name]).auc for name in sorted(scored)]}
        )
        self.pipeline_repository.save_frame("compare", "auc", aucs)
        if not input.delong:
            logger.info("DeLong test disabled; wrote the AUC table for %d models", len(aucs))
            return CompareOutput(n_pairs=0, edges={})

        rows = []
        for name_a, name_b in itertools.combinations(sorted(scored), 2):
            result = delong_test(scored[name_a].score, scored[name_b].score, reference.y)
            rows.append(
                {
                    "model_a": name_a,
                    "model_b": name_b,
                    "auc_a": result.auc_a,
                    "auc_b": result.auc_b,
                    "auc_diff": result.auc_diff,
                    "variance": result.variance,
                    "z": result.z,
                    "p_value": result.p_value,
                }
            )
        self.pipeline_repository.save_frame("compare", "delong", pd.DataFrame(rows))

        edges = domination_edges({name: s.score for name, s in scored.items()}, reference.y, input.levels)
        by_level: dict[str, list[str]] = {}
        for level in input.levels:
            level_edges = [e for e in edges if e.level == level]
            label = f"{level:g}"
            self.pipeline_repository.save_frame(
                "compare",
                f"domination_{label}",
                pd.DataFrame(
                    {
                        "winner": [e.winner for e in level_edges],
                        "loser": [e.loser for e in level_edges],
                        "p_value": [e.p_value for e in level_edges],
                    }
                ),
            )
            by_level[label] = [f"{e.winner} > {e.loser}" for e in level_edges]
            logger.info("domination at %s: %d edges", label, len(level_edges))
        return CompareOutput(n_pairs=len(rows), edges=by_level)
