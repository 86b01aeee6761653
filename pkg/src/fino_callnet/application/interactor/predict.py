import logging

from fino_callnet.application.input.predict import PredictInput
from fino_callnet.application.output.predict import PredictOutput
from fino_callnet.domain.repository.pipeline import PipelineRepository

logger = logging.getLogger(__name__)


class PredictUseCase:
    """学習済みの分類器でテストセットのデフォルト確率を予測する"""

    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: PredictInput) -> PredictOutput:
        matrix = self.pipeline_repository.load_features()
        _, test_rows = self.pipeline_repository.load_split()
        test = matrix.take(test_rows)
        for model in input.models:
            classifier = self.pipeline_repository.load_classifier(model.name)
            scored = classifier.predict(test.select_groups(model.groups))
            self.pipeline_repository.save_scores(model.name, scored, test.timeframe_ids)
            logger.info("scored %d test instances with %s", scored.n_instances, model.name)
        return PredictOutput(
            n_test=test.n_rows,
            n_defaulters=int(test.target.sum()),
            models=[model.name for model in input.models],
        )
