"""
テストセットのスコアを AUC と利益（EMP、η̄ から決めたカットオフでの利益）で評価する
λ の分布（p0, p1）は学習セットのデフォルト顧客から推定する
"""

import logging
import math
from typing import Any

import pandas as pd

from fino_callnet.application.input.evaluate import EvaluateInput
from fino_callnet.application.output.evaluate import EvaluateOutput
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.emp import (
    emp,
    estimate_lambda_distribution,
    fraction_to_cutoff,
    model_profit,
    no_model_profit,
)
from fino_callnet.domain.service.labels import loan_outcomes
from fino_callnet.domain.service.rank import rank_correlations
from fino_callnet.domain.service.roc import roc_and_auc
from fino_callnet.domain.value.emp import EmpReport

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["model", "auc", "emp", "emp_fraction", "implied_cutoff", "model_profit", "no_model_profit"]


class EvaluateUseCase:
    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: EvaluateInput) -> EvaluateOutput:
        config = input.config
        bank = self.pipeline_repository.load_bank()
        matrix = self.pipeline_repository.load_features()
        train_rows, _ = self.pipeline_repository.load_split()
        train_subjects = [matrix.subject_ids[i] for i in train_rows]
        distribution = estimate_lambda_distribution(
            loan_outcomes(bank, train_subjects, config.lgd), config.lgd, config.lambda_bins
        )
        params = config.params(distribution.p0, distribution.p1)
        self.pipeline_repository.save_json(
            "evaluate",
            "lambda",
            {
                "p0_estimated": distribution.p0,
                "p1_estimated": distribution.p1,
                "p0": params.p0,
                "p1": params.p1,
                "lgd": distribution.lgd,
                "n_defaulters": distribution.n_defaulters,
            },
        )
        self.pipeline_repository.save_frame(
            "evaluate",
            "lambda_distribution",
            pd.DataFrame(
                {
                    "lambda_from": distribution.bin_edges[:-1],
                    "lambda_to": distribution.bin_edges[1:],
                    "count": distribution.counts,
                }
            ),
        )

        reports: list[EmpReport] = []
        for name in input.model_names:
            scored = self.pipeline_repository.load_scores(name)
            loans = loan_outcomes(bank, scored.subject_ids, config.lgd)
            curve = roc_and_auc(scored)
            result = emp(scored, params)
            cutoff = fraction_to_cutoff(scored.score, result.emp_fraction)
            reports.append(
                EmpReport(
                    model_name=name,
                    auc=curve.auc,
                    emp=result.emp,
                    emp_fraction=result.emp_fraction,
                    implied_cutoff=cutoff,
                    model_profit=model_profit(scored, loans, result.params, cutoff),
                    no_model_profit=no_model_profit(scored, loans, result.params),
                )
            )
            self.pipeline_repository.save_frame(
                "evaluate",
                f"roc_{name}",
                pd.DataFrame({"f1": curve.f1, "f0": curve.f0, "threshold": curve.thresholds}),
            )
            logger.info(
                "%s: AUC %.4f, EMP %.6f, fraction %.4f, profit %s (no model %s)",
                name,
                curve.auc,
                result.emp,
                result.emp_fraction,
                reports[-1].model_profit,
                reports[-1].no_model_profit,
            )

        rows: list[dict[str, Any]] = []
        for report in reports:
            data = report.to_dict()
            data["model"] = data.pop("model_name")
            rows.append({column: data[column] for column in REPORT_COLUMNS})
        table = pd.DataFrame(rows, columns=REPORT_COLUMNS)
        self.pipeline_repository.save_frame("evaluate", "evaluation", table)
        self.pipeline_repository.save_text("evaluate", "evaluation", table.to_string(index=False) + "\n")

        spearman: float | None = None
        if len(reports) >= 2:
            correlation = rank_correlations(
                {r.model_name: r.auc for r in reports}, {r.model_name: r.emp for r in reports}
            )
            spearman = None if math.isnan(correlation.spearman_rho) else correlation.spearman_rho
        self.pipeline_repository.save_json(
            "evaluate", "evaluation", {"models": rows, "auc_emp_spearman": spearman}
        )
        return EvaluateOutput(rows=rows, p0=params.p0, p1=params.p1, auc_emp_spearman=spearman)
