import logging

from fino_callnet.application.input.train import TrainInput
from fino_callnet.application.output.train import TrainedModel, TrainOutput
from fino_callnet.domain.error import DataError
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.dataset import split_rows, undersample
from fino_callnet.domain.value.split_spec import SplitSpec
from fino_callnet.infrastructure.factory.classifier import create_classifier
from fino_callnet.util.seed import stage_int

logger = logging.getLogger(__name__)


class TrainUseCase:
    """
    データセットを学習/テストに分け、学習セットを間引いてからモデルごとに分類器を学習する
    分割と間引きは全モデルで共通（テストセットが同じなので AUC を対応のある検定で比べられる）
    """

    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: TrainInput) -> TrainOutput:
        config = input.config
        matrix = self.pipeline_repository.load_features()
        spec = SplitSpec(
            train_fraction=config.train_fraction,
            seed=stage_int(input.seed, "split"),
            stratified=config.stratified,
        )
        train_rows, test_rows = split_rows(matrix, spec)
        self.pipeline_repository.save_split(matrix, train_rows, test_rows)
        train = matrix.take(train_rows)
        if config.undersample_ratio is not None:
            train = undersample(train, config.undersample_ratio, stage_int(input.seed, "undersample"))

        trained: list[TrainedModel] = []
        for model in input.models:
            subset = train.select_groups(model.groups)
            if subset.n_features == 0:
                raise DataError(f"model {model.name}: no features left in groups {[g.value for g in model.groups]}")
            classifier = create_classifier(config, stage_int(input.seed, model.classifier, model.model_id), model.classifier)
            classifier.fit(subset)
            self.pipeline_repository.save_classifier(model.name, classifier)
            trained.append(TrainedModel(name=model.name, n_features=subset.n_features, n_train_rows=subset.n_rows))
            logger.info("trained %s on %d rows x %d features", model.name, subset.n_rows, subset.n_features)

        return TrainOutput(
            n_train=len(train_rows),
            n_test=len(test_rows),
            n_train_resampled=train.n_rows,
            models=trained,
        )
