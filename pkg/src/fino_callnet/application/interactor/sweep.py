import logging

import pandas as pd

from fino_callnet.application.input.sweep import SweepInput
from fino_callnet.application.output.sweep import SweepOutput
from fino_callnet.domain.error import DataError
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.emp import emp

logger = logging.getLogger(__name__)


class SweepUseCase:
    """固定したスコアで ROI または LGD だけを変えて EMP と η̄ を計算する"""

    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: SweepInput) -> SweepOutput:
        if not input.grid:
            raise DataError(f"empty {input.parameter} grid")
        scored = self.pipeline_repository.load_scores(input.model_name)
        values = [float(v) for v in input.grid]
        emps: list[float] = []
        fractions: list[float] = []
        for value in values:
            result = emp(scored, input.params.with_overrides(**{input.parameter: value}))
            emps.append(result.emp)
            fractions.append(result.emp_fraction)
        frame = pd.DataFrame({input.parameter: values, "emp": emps, "emp_fraction": fractions})
        name = f"sweep_{input.parameter}_{input.model_name}"
        self.pipeline_repository.save_frame("sweep", name, frame)
        self.pipeline_repository.save_text("sweep", name, frame.to_string(index=False) + "\n")
        logger.info("%s sweep on %s: %d points", input.parameter, input.model_name, len(values))
        return SweepOutput(
            model=input.model_name,
            parameter=input.parameter,
            values=values,
            emp=emps,
            emp_fraction=fractions,
        )
