"""
無向の通話ネットワーク上で、デフォルトラベルのホモフィリーを検定する
ラベルはカード受取月までに銀行顧客だったノードの y_Default（telcoのみのノードは除く）
"""

import logging
import math
from typing import Any

import numpy as np

from fino_callnet.application.input.netstats import NetstatsInput
from fino_callnet.application.output.netstats import NetstatsOutput
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.labels import default_targets
from fino_callnet.domain.service.netstats import homophily_test, label_permutation_null
from fino_callnet.domain.value.graph_mode import GraphMode, GraphModeEnum
from fino_callnet.util.seed import stage_rng

logger = logging.getLogger(__name__)


def _nan_to_none(value: float) -> float | None:
    return None if math.isnan(value) else value


class NetstatsUseCase:
    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: NetstatsInput) -> NetstatsOutput:
        if input.labels is None:
            targets = default_targets(self.pipeline_repository.load_bank())
        else:
            targets = dict(input.labels)
            logger.info("homophily on %d externally supplied labels", len(targets))
        mode = GraphMode(enum=GraphModeEnum.UD)

        reports: dict[str, dict[str, Any]] = {}
        for timeframe in input.timeframes:
            tf = timeframe.timeframe_id
            graph = self.pipeline_repository.load_graph(tf, mode)
            if input.labels is None:
                labels = self.pipeline_repository.load_labels(tf)
                defaults = {node_id: targets[node_id] for node_id in labels.delinquency_level}
            else:
                defaults = {node_id: targets[node_id] for node_id in graph.node_ids if node_id in targets}
            report = homophily_test(graph, defaults)
            data = report.to_dict()
            data["dyadicity"] = _nan_to_none(report.dyadicity)
            text = report.to_text()

            if input.permutations:
                dyadic, hetero = label_permutation_null(
                    graph, defaults, input.permutations, stage_rng(input.seed, "permutation", tf)
                )
                null = {
                    "permutations": input.permutations,
                    "mean_dyadicity": _nan_to_none(float(np.nanmean(dyadic))) if not np.isnan(dyadic).all() else None,
                    "mean_heterophilicity": float(hetero.mean()),
                    # 観測値以下の H が出る割合（片側）
                    "p_heterophilicity": float((np.sum(hetero <= report.heterophilicity) + 1) / (input.permutations + 1)),
                }
                data["permutation_null"] = null
                text += (
                    f"\npermutation null ({input.permutations}): "
                    f"mean H {null['mean_heterophilicity']:.4f}, empirical p {null['p_heterophilicity']:.4g}"
                )
            self.pipeline_repository.save_json("netstats", "homophily", data, timeframe=tf)
            self.pipeline_repository.save_text("netstats", "homophily", text + "\n", timeframe=tf)
            reports[tf] = data
        return NetstatsOutput(reports=reports)
