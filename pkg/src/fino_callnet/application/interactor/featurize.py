import logging

import pandas as pd

from fino_callnet.application.input.featurize import FeaturizeInput
from fino_callnet.application.output.featurize import FeaturizeOutput
from fino_callnet.domain.error import DataError
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.behavior_features import calling_behavior_features, sociodemographic_features
from fino_callnet.domain.service.dataset import TimeframeFeatures, assemble, drop_correlated
from fino_callnet.domain.service.labels import default_targets
from fino_callnet.domain.service.link_features import exposure_link_features, link_based_features
from fino_callnet.domain.service.propagation import relabel_high_risk
from fino_callnet.domain.value.bank_record import BankRecord
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.exposure import PropagationMethod, SeedCriterion
from fino_callnet.domain.value.feature_group import FeatureGroupEnum
from fino_callnet.util.timeframe import Timeframe

logger = logging.getLogger(__name__)

METHOD_GROUPS = {
    FeatureGroupEnum.PR: PropagationMethod.PR,
    FeatureGroupEnum.SPA: PropagationMethod.SPA,
}


class FeaturizeUseCase:
    """
    タイムフレームごとに要求されたグループの特徴量を作り、全タイムフレームを1つのデータセットに結合する
    結合後に相関の強い特徴量を削除して保存する
    """

    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def _timeframe_features(
        self,
        timeframe: Timeframe,
        input: FeaturizeInput,
        records: list[CdrRecord],
        bank: list[BankRecord],
    ) -> TimeframeFeatures:
        tf = timeframe.timeframe_id
        labels = self.pipeline_repository.load_labels(tf)
        subjects = sorted(labels.subjects)
        targets = default_targets(r for r in bank if r.customer_id in labels.subjects)
        config = input.config

        blocks: dict[FeatureGroupEnum, list[pd.DataFrame]] = {}
        if FeatureGroupEnum.SD in input.groups:
            subject_records = [r for r in bank if r.customer_id in labels.subjects]
            blocks[FeatureGroupEnum.SD] = [
                sociodemographic_features(subject_records, timeframe.debit_range(), config.loyalty_k)
            ]
        if FeatureGroupEnum.CB in input.groups:
            blocks[FeatureGroupEnum.CB] = [
                calling_behavior_features(
                    records,
                    timeframe.to_range(),
                    subjects,
                    (config.day_start_hour, config.day_end_hour),
                )
            ]

        needs_graph = {FeatureGroupEnum.LB, *METHOD_GROUPS} & set(input.groups)
        if needs_graph:
            cutoffs = (
                self.pipeline_repository.load_json("propagate", "cutoffs", timeframe=tf)
                if set(METHOD_GROUPS) & needs_graph
                else {}
            )
            for mode in input.modes:
                graph = self.pipeline_repository.load_graph(tf, mode)
                if FeatureGroupEnum.LB in needs_graph:
                    blocks.setdefault(FeatureGroupEnum.LB, []).append(link_based_features(graph, labels, subjects))
                for group, method in METHOD_GROUPS.items():
                    if group not in needs_graph:
                        continue
                    for criterion in SeedCriterion:
                        key = f"{method.value}_{criterion.label}_{mode.value}"
                        if key not in cutoffs:
                            raise DataError(f"{group.value} features need the {key} propagation for {tf}")
                        exposure = self.pipeline_repository.load_exposure(tf, mode, method, criterion)
                        cutoff = float(cutoffs[key])
                        blocks.setdefault(group, []).append(
                            exposure_link_features(graph, exposure, relabel_high_risk(exposure, cutoff), subjects)
                        )
        logger.info("features for %s: %d subjects, groups %s", tf, len(subjects), [g.value for g in blocks])
        return TimeframeFeatures(timeframe_id=tf, subjects=subjects, targets=targets, blocks=blocks)

    def execute(self, input: FeaturizeInput) -> FeaturizeOutput:
        records = self.pipeline_repository.load_cdr()
        bank = self.pipeline_repository.load_bank()
        per_timeframe = [self._timeframe_features(tf, input, records, bank) for tf in input.timeframes]

        matrix, dropped = assemble(per_timeframe)
        assembled = matrix.group_sizes()
        pruned = drop_correlated(matrix, input.config.corr_threshold)
        kept = pruned.group_sizes()
        self.pipeline_repository.save_features(pruned)
        self.pipeline_repository.save_frame(
            "featurize",
            "feature_groups",
            pd.DataFrame(
                {
                    "group": [g.value for g in FeatureGroupEnum],
                    "assembled": [assembled[g] for g in FeatureGroupEnum],
                    "kept": [kept[g] for g in FeatureGroupEnum],
                }
            ),
        )
        logger.info(
            "dataset: %d rows, %d features (%d before correlation pruning), default rate %.4f",
            pruned.n_rows,
            pruned.n_features,
            matrix.n_features,
            pruned.default_rate,
        )
        return FeaturizeOutput(
            n_rows=pruned.n_rows,
            n_defaulters=int(pruned.target.sum()),
            subjects_dropped=dropped,
            features_assembled={g.value: n for g, n in assembled.items()},
            features_kept={g.value: n for g, n in kept.items()},
        )
