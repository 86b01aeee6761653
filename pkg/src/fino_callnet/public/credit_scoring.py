"""
通話ネットワークによる与信スコアリングのパイプライン

ステージ:
synth → ingest → graph → propagate → featurize → netstats → train → predict
→ evaluate → importance → compare → sweep → report

各ステージは成果物をストレージに書き、完了時にマニフェストを残す
run() は完了済みのステージを飛ばすので、途中で失敗しても同じ設定で再実行すれば続きから進む
"""

import logging
from collections.abc import Callable, Iterator
from contextlib import ExitStack, contextmanager
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, TypeVar

from fino_callnet.application.input.build_graph import BuildGraphInput
from fino_callnet.application.input.compare import CompareInput
from fino_callnet.application.input.evaluate import EvaluateInput
from fino_callnet.application.input.featurize import FeaturizeInput
from fino_callnet.application.input.importance import ImportanceInput
from fino_callnet.application.input.ingest import IngestInput
from fino_callnet.application.input.netstats import NetstatsInput
from fino_callnet.application.input.predict import PredictInput
from fino_callnet.application.input.propagate import PropagateInput
from fino_callnet.application.input.sweep import SweepInput, SweepParameter
from fino_callnet.application.input.synthesize import SynthesizeInput
from fino_callnet.application.input.train import ModelSpec, TrainInput
from fino_callnet.application.interactor.build_graph import BuildGraphUseCase
from fino_callnet.application.interactor.compare import CompareUseCase
from fino_callnet.application.interactor.evaluate import EvaluateUseCase
from fino_callnet.application.interactor.featurize import FeaturizeUseCase
from fino_callnet.application.interactor.importance import ImportanceUseCase
from fino_callnet.application.interactor.ingest import IngestUseCase
from fino_callnet.application.interactor.netstats import NetstatsUseCase
from fino_callnet.application.interactor.predict import PredictUseCase
from fino_callnet.application.interactor.propagate import PropagateUseCase
from fino_callnet.application.interactor.sweep import SweepUseCase
from fino_callnet.application.interactor.synthesize import SynthesizeUseCase
from fino_callnet.application.interactor.train import TrainUseCase
from fino_callnet.application.output.build_graph import BuildGraphOutput
from fino_callnet.application.output.compare import CompareOutput
from fino_callnet.application.output.evaluate import EvaluateOutput
from fino_callnet.application.output.featurize import FeaturizeOutput
from fino_callnet.application.output.importance import ImportanceOutput
from fino_callnet.application.output.ingest import IngestOutput
from fino_callnet.application.output.netstats import NetstatsOutput
from fino_callnet.application.output.predict import PredictOutput
from fino_callnet.application.output.propagate import PropagateOutput
from fino_callnet.application.output.sweep import SweepOutput
from fino_callnet.application.output.synthesize import SynthesizeOutput
from fino_callnet.application.output.train import TrainOutput
from fino_callnet.domain.error import DataError, StageError
from fino_callnet.domain.value.feature_group import MODEL_FEATURE_GROUPS
from fino_callnet.domain.value.graph_mode import GraphMode
from fino_callnet.infrastructure.adapter.record_source.csv_labels import read_default_labels
from fino_callnet.infrastructure.adapter.synth.generator import SYNTH_FILES
from fino_callnet.infrastructure.factory.record_source import create_bank_source, create_cdr_source
from fino_callnet.infrastructure.factory.storage import create_storage
from fino_callnet.infrastructure.repository.artifact import ArtifactRepositoryImpl
from fino_callnet.infrastructure.repository.pipeline import PipelineRepositoryImpl
from fino_callnet.interface.config.experiment import ExperimentConfig
from fino_callnet.util.timeframe import Timeframe

logger = logging.getLogger(__name__)

T = TypeVar("T")

INPUT_KINDS = ("calls", "accounts", "transactions", "card_activity")


def _summary_of(output: object) -> dict[str, Any]:
    if is_dataclass(output) and not isinstance(output, type):
        return asdict(output)
    if isinstance(output, dict):
        return {str(k): _summary_of(v) if is_dataclass(v) else v for k, v in output.items()}
    raise TypeError(f"Unsupported stage output: {type(output).__name__}")


class CreditScoringPipeline:
    def __init__(self, config: ExperimentConfig) -> None:
        self._config = config
        self._storage = create_storage(config.storage)
        self._repository = PipelineRepositoryImpl(ArtifactRepositoryImpl(self._storage), run_id=config.run_id)

    ########## 設定から導くもの ##########

    @property
    def config(self) -> ExperimentConfig:
        return self._config

    @property
    def timeframes(self) -> list[Timeframe]:
        return self._config.timeframe.timeframes()

    @property
    def modes(self) -> list[GraphMode]:
        return [GraphMode(enum=e) for e in self._config.graph.modes]

    @property
    def models(self) -> list[ModelSpec]:
        """モデル ID × 分類器。重要度を計算するモデルのフォレストは常に含める"""
        specs = [
            ModelSpec(model_id=model_id, classifier=classifier, groups=groups)
            for model_id, groups in self._config.model_feature_groups.items()
            for classifier in self._config.classifiers
        ]
        importance = self.importance_model
        if importance.name not in {s.name for s in specs}:
            specs.append(importance)
        return specs

    @property
    def importance_model(self) -> ModelSpec:
        model_id = self._config.importance.model_id.upper()
        return ModelSpec(model_id=model_id, classifier="forest", groups=MODEL_FEATURE_GROUPS[model_id])

    @property
    def synth_prefix(self) -> str:
        return f"{self._config.run_id}/synth/all"

    ########## ステージ ##########

    def _run_stage(self, stage: str, action: Callable[[], T]) -> T:
        """失敗はステージ名と原因を持つ StageError にする"""
        logger.info("stage %s: start (run=%s)", stage, self._config.run_id)
        self._repository.begin_stage(stage)
        try:
            output = action()
        except StageError:
            raise
        except Exception as e:
            logger.error("stage %s failed: %s", stage, e)
            raise StageError(stage, e) from e
        self._repository.complete_stage(stage, _summary_of(output))
        logger.info("stage %s: done", stage)
        return output

    def synthesize(self) -> SynthesizeOutput:
        synth = self._config.synth
        if synth is None:
            raise DataError("no [synth] section in the experiment config")
        input = SynthesizeInput(config=synth, storage=self._storage, prefix=self.synth_prefix)
        return self._run_stage("synth", lambda: SynthesizeUseCase().execute(input))

    @contextmanager
    def _input_lines(self) -> Iterator[dict[str, Any]]:
        """入力ファイル（合成データの設定ならストレージ上の合成データ）を行のイテラブルとして開く"""
        encoding = self._config.ingest.encoding
        if self._config.synth is not None:
            lines: dict[str, Any] = {}
            for kind in INPUT_KINDS:
                path = f"{self.synth_prefix}/{SYNTH_FILES[kind]}"
                if not self._storage.exists(path):
                    raise DataError(f"synthetic input not found: {self._storage.describe(path)}")
                lines[kind] = self._storage.load(path).decode(encoding).splitlines()
            yield lines
            return
        self._config.check_inputs()
        paths = self._config.inputs.as_dict()
        with ExitStack() as stack:
            yield {
                kind: stack.enter_context(Path(paths[kind]).open(encoding=encoding, newline=""))
                for kind in INPUT_KINDS
            }

    def ingest(self) -> IngestOutput:
        def action() -> IngestOutput:
            with self._input_lines() as lines:
                input = IngestInput(
                    cdr_source=create_cdr_source(self._config.ingest),
                    bank_source=create_bank_source(self._config.ingest),
                    **lines,
                )
                return IngestUseCase(self._repository).execute(input)

        return self._run_stage("ingest", action)

    def build_graph(self) -> BuildGraphOutput:
        input = BuildGraphInput(timeframes=self.timeframes, modes=self.modes, weight=self._config.graph.weight)
        return self._run_stage("graph", lambda: BuildGraphUseCase(self._repository).execute(input))

    def propagate(self) -> PropagateOutput:
        input = PropagateInput(timeframes=self.timeframes, modes=self.modes, config=self._config.propagation)
        return self._run_stage("propagate", lambda: PropagateUseCase(self._repository).execute(input))

    def featurize(self) -> FeaturizeOutput:
        input = FeaturizeInput(
            timeframes=self.timeframes,
            modes=self.modes,
            groups=self._config.feature_groups,
            config=self._config.feature,
        )
        return self._run_stage("featurize", lambda: FeaturizeUseCase(self._repository).execute(input))

    def netstats(self) -> NetstatsOutput:
        settings = self._config.netstats

        def action() -> NetstatsOutput:
            labels = None
            if settings.labels is not None:
                path = Path(settings.labels)
                if not path.is_file():
                    raise FileNotFoundError(f"label file not found: {path}")
                with path.open(encoding=self._config.ingest.encoding, newline="") as lines:
                    labels = read_default_labels(lines, self._config.ingest.delimiter)
            input = NetstatsInput(
                timeframes=self.timeframes,
                permutations=settings.permutations,
                seed=self._config.seed,
                labels=labels,
            )
            return NetstatsUseCase(self._repository).execute(input)

        return self._run_stage("netstats", action)

    def train(self) -> TrainOutput:
        input = TrainInput(models=self.models, config=self._config.model, seed=self._config.seed)
        return self._run_stage("train", lambda: TrainUseCase(self._repository).execute(input))

    def predict(self) -> PredictOutput:
        input = PredictInput(models=self.models)
        return self._run_stage("predict", lambda: PredictUseCase(self._repository).execute(input))

    def evaluate(self) -> EvaluateOutput:
        input = EvaluateInput(model_names=[m.name for m in self.models], config=self._config.emp)
        return self._run_stage("evaluate", lambda: EvaluateUseCase(self._repository).execute(input))

    def importance(self) -> ImportanceOutput:
        settings = self._config.importance
        input = ImportanceInput(
            model=self.importance_model,
            config=self._config.emp,
            seed=self._config.seed,
            permutation_repeats=settings.permutation_repeats,
            top_k=settings.top_k,
            n_jobs=self._config.model.n_jobs,
            kinds=settings.kinds,
        )
        return self._run_stage("importance", lambda: ImportanceUseCase(self._repository).execute(input))

    def compare(self) -> CompareOutput:
        input = CompareInput(
            model_names=[m.name for m in self.models],
            levels=self._config.domination_levels,
            delong=self._config.compare.delong,
        )
        return self._run_stage("compare", lambda: CompareUseCase(self._repository).execute(input))

    def sweep_one(self, parameter: SweepParameter, model_name: str | None = None) -> SweepOutput:
        """evaluate で決めた λ の分布のまま、ROI または LGD だけを変える"""
        if not self._repository.exists("evaluate", "lambda", "json"):
            raise DataError("sensitivity sweep needs the evaluate stage to have run")
        data = self._repository.load_json("evaluate", "lambda")
        emp_config = self._config.emp
        grid = emp_config.roi_grid if parameter == "roi" else emp_config.lgd_grid
        input = SweepInput(
            model_name=model_name or self.importance_model.name,
            parameter=parameter,
            grid=grid,
            params=emp_config.params(float(data["p0"]), float(data["p1"])),
        )
        return SweepUseCase(self._repository).execute(input)

    def sweep(
        self, model_name: str | None = None, parameters: tuple[SweepParameter, ...] = ("roi", "lgd")
    ) -> dict[str, SweepOutput]:
        return self._run_stage(
            "sweep",
            lambda: {parameter: self.sweep_one(parameter, model_name) for parameter in parameters},
        )

    def report(self) -> dict[str, Any]:
        """各ステージの要約から実験レポート（JSON とテキスト）を作る"""

        def action() -> dict[str, Any]:
            summaries = {
                stage: self._repository.load_summary(stage)
                for stage in ("featurize", "netstats", "train", "evaluate", "importance", "compare", "sweep")
            }
            report = {"run_id": self._config.run_id, "seed": self._config.seed, **summaries}
            self._repository.save_json("report", "report", report)
            sections = [
                f"run {self._config.run_id} (seed {self._config.seed})",
                "== evaluation ==\n" + self._repository.load_text("evaluate", "evaluation"),
            ]
            for kind in self._config.importance.kinds:
                sections.append(
                    f"== feature importance ({kind}) ==\n"
                    + self._repository.load_text("importance", f"importance_{kind}")
                )
            for timeframe in self.timeframes:
                sections.append(
                    f"== homophily {timeframe.timeframe_id} ==\n"
                    + self._repository.load_text("netstats", "homophily", timeframe.timeframe_id)
                )
            for level, edges in summaries["compare"]["edges"].items():
                sections.append(f"== domination at {level} ==\n" + "".join(f"{edge}\n" for edge in edges))
            for parameter in ("roi", "lgd"):
                sections.append(
                    f"== {parameter} sensitivity ==\n"
                    + self._repository.load_text("sweep", f"sweep_{parameter}_{self.importance_model.name}")
                )
            self._repository.save_text("report", "report", "\n".join(sections))
            return report

        return self._run_stage("report", action)

    ########## 全体の実行 ##########

    def _stage_actions(self) -> dict[str, Callable[[], object]]:
        actions: dict[str, Callable[[], object]] = {
            "synth": self.synthesize,
            "ingest": self.ingest,
            "graph": self.build_graph,
            "propagate": self.propagate,
            "featurize": self.featurize,
            "netstats": self.netstats,
            "train": self.train,
            "predict": self.predict,
            "evaluate": self.evaluate,
            "importance": self.importance,
            "compare": self.compare,
            "sweep": self.sweep,
            "report": self.report,
        }
        if self._config.synth is None:
            del actions["synth"]
        return actions

    def _is_complete(self, stage: str) -> bool:
        if not self._repository.is_complete(stage):
            return False
        if stage == "synth":
            return all(
                self._storage.exists(f"{self.synth_prefix}/{SYNTH_FILES[kind]}") for kind in INPUT_KINDS
            )
        return True

    def run(self, force: bool = False) -> dict[str, Any]:
        """
        全ステージを順に実行し、レポートを返す
        - 完了済みのステージは飛ばす（force=True で全て再実行）
        - あるステージを実行したら、それ以降のステージは全て実行し直す
        - 失敗したステージは StageError（ステージ名と原因）で止まり、それまでの成果物は残る
        """
        self._config.check_inputs()
        executed: list[str] = []
        for stage, action in self._stage_actions().items():
            if not force and not executed and self._is_complete(stage):
                logger.info("stage %s: already complete, skipped", stage)
                continue
            try:
                action()
            except StageError:
                raise
            except Exception as e:
                logger.error("stage %s failed: %s", stage, e)
                raise StageError(stage, e) from e
            executed.append(stage)
        logger.info("run %s finished; stages executed: %s", self._config.run_id, ", ".join(executed) or "none")
        return self._repository.load_summary("report")
