"""
延滞顧客からの影響伝播（PR / SPA × 情報源の基準 × モード）
グラフごとに6つの伝播をスレッドで並列に計算する
"""

import logging

import numpy as np
from joblib import Parallel, delayed

from fino_callnet.application.input.propagate import PropagateInput
from fino_callnet.application.output.propagate import ExposureSummary, PropagateOutput
from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.error import MissingCutoffError
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.propagation import (
    exposure_cutoff,
    personalized_pagerank,
    relabel_high_risk,
    restart_vector,
    seed_energy,
    spreading_activation,
)
from fino_callnet.domain.value.exposure import ExposureVector, PropagationMethod, SeedCriterion
from fino_callnet.domain.value.node_labels import NodeLabelSet
from fino_callnet.interface.config.propagation import PropagationConfig

logger = logging.getLogger(__name__)


def propagate(
    graph: CallGraph,
    labels: NodeLabelSet,
    method: PropagationMethod,
    criterion: SeedCriterion,
    config: PropagationConfig,
) -> ExposureVector:
    """情報源がいない場合は全て0の曝露スコア"""
    if method is PropagationMethod.PR:
        seeds = restart_vector(labels, graph, criterion)
    else:
        seeds = seed_energy(labels, graph, criterion, config.severity_weighted_seeds)
    if not np.any(seeds > 0):
        logger.warning(
            "%s/%s: no seeds for %s %s; exposure is zero",
            graph.timeframe_id,
            graph.mode.value,
            method.value,
            criterion.label,
        )
        return ExposureVector(
            node_ids=graph.node_ids,
            scores=np.zeros(graph.n_nodes),
            method=method,
            seed_criterion=criterion,
            iterations_run=0,
            residual=0.0,
        )
    if method is PropagationMethod.PR:
        return personalized_pagerank(graph, seeds, config, criterion)
    return spreading_activation(graph, seeds, config, criterion)


def cutoff_for(exposure: ExposureVector, labels: NodeLabelSet, config: PropagationConfig) -> float:
    try:
        return exposure_cutoff(exposure, labels)
    except MissingCutoffError:
        if config.explicit_cutoff is None:
            raise
        logger.warning("using the explicit exposure cutoff %.6g", config.explicit_cutoff)
        return config.explicit_cutoff


class PropagateUseCase:
    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: PropagateInput) -> PropagateOutput:
        config = input.config
        jobs = [(method, criterion) for method in config.methods for criterion in config.seed_criteria]
        summaries: list[ExposureSummary] = []
        for timeframe in input.timeframes:
            tf = timeframe.timeframe_id
            labels = self.pipeline_repository.load_labels(tf)
            cutoffs: dict[str, float] = {}
            for mode in input.modes:
                graph = self.pipeline_repository.load_graph(tf, mode)
                exposures = Parallel(n_jobs=config.n_jobs, prefer="threads")(
                    delayed(propagate)(graph, labels, method, criterion, config) for method, criterion in jobs
                )
                for exposure in exposures:
                    cutoff = cutoff_for(exposure, labels, config)
                    relabeling = relabel_high_risk(exposure, cutoff)
                    self.pipeline_repository.save_exposure(tf, mode, exposure)
                    key = f"{exposure.method.value}_{exposure.seed_criterion.label}_{mode.value}"
                    cutoffs[key] = cutoff
                    summaries.append(
                        ExposureSummary(
                            timeframe_id=tf,
                            mode=mode.value,
                            method=exposure.method.value,
                            seed_criterion=exposure.seed_criterion.label,
                            n_seeds=int(labels.seed_mask(graph, exposure.seed_criterion.value).sum()),
                            iterations_run=exposure.iterations_run,
                            residual=exposure.residual,
                            total=exposure.total,
                            cutoff=cutoff,
                            n_high_risk=relabeling.n_high_risk,
                        )
                    )
                logger.info("propagation %s/%s: %d exposure vectors", tf, mode.value, len(exposures))
            self.pipeline_repository.save_json("propagate", "cutoffs", cutoffs, timeframe=tf)
        return PropagateOutput(exposures=summaries)
