from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any

import numpy as np
import numpy.typing as npt
import pandas as pd

from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.value.bank_record import BankRecord
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.exposure import ExposureVector, PropagationMethod, SeedCriterion
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.graph_mode import GraphMode
from fino_callnet.domain.value.ingest_stats import IngestStats
from fino_callnet.domain.value.node_labels import NodeLabelSet
from fino_callnet.domain.value.scored_dataset import ScoredDataset
from fino_callnet.interface.port.classifier import ClassifierPort


class PipelineRepository(ABC):
    """1回のパイプライン実行（run）の成果物をステージごとに保存・読み込みする"""

    @property
    @abstractmethod
    def run_id(self) -> str: ...

    @abstractmethod
    def exists(self, stage: str, name: str, ext: str, timeframe: str = "all") -> bool: ...

    @abstractmethod
    def describe(self, stage: str, name: str, ext: str, timeframe: str = "all") -> str: ...

    # ステージの完了記録
    @abstractmethod
    def begin_stage(self, stage: str) -> None: ...
    @abstractmethod
    def complete_stage(self, stage: str, summary: dict[str, Any]) -> None: ...
    @abstractmethod
    def is_complete(self, stage: str) -> bool: ...
    @abstractmethod
    def load_summary(self, stage: str) -> dict[str, Any]: ...

    # ingest
    @abstractmethod
    def save_cdr(self, records: Sequence[CdrRecord], stats: IngestStats, rejections: Sequence[str]) -> None: ...
    @abstractmethod
    def load_cdr(self) -> list[CdrRecord]: ...
    @abstractmethod
    def save_bank(self, records: Sequence[BankRecord], rejections: Sequence[str], summary: dict[str, Any]) -> None: ...
    @abstractmethod
    def load_bank(self) -> list[BankRecord]: ...

    # graph
    @abstractmethod
    def save_graph(self, graph: CallGraph) -> None: ...
    @abstractmethod
    def load_graph(self, timeframe_id: str, mode: GraphMode) -> CallGraph: ...
    @abstractmethod
    def save_labels(self, timeframe_id: str, labels: NodeLabelSet) -> None: ...
    @abstractmethod
    def load_labels(self, timeframe_id: str) -> NodeLabelSet: ...

    # propagate
    @abstractmethod
    def save_exposure(self, timeframe_id: str, mode: GraphMode, exposure: ExposureVector) -> None: ...
    @abstractmethod
    def load_exposure(
        self, timeframe_id: str, mode: GraphMode, method: PropagationMethod, criterion: SeedCriterion
    ) -> ExposureVector: ...

    # featurize
    @abstractmethod
    def save_features(self, matrix: FeatureMatrix) -> None: ...
    @abstractmethod
    def load_features(self) -> FeatureMatrix: ...

    # train / predict
    @abstractmethod
    def save_split(self, matrix: FeatureMatrix, train_rows: npt.NDArray[np.int64], test_rows: npt.NDArray[np.int64]) -> None: ...
    @abstractmethod
    def load_split(self) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]: ...
    @abstractmethod
    def save_classifier(self, name: str, classifier: ClassifierPort) -> None: ...
    @abstractmethod
    def load_classifier(self, name: str) -> ClassifierPort: ...
    @abstractmethod
    def save_scores(self, name: str, scored: ScoredDataset, timeframe_ids: Sequence[str]) -> None: ...
    @abstractmethod
    def load_scores(self, name: str) -> ScoredDataset: ...

    # reports
    @abstractmethod
    def save_json(self, stage: str, name: str, data: Any, timeframe: str = "all") -> None: ...
    @abstractmethod
    def load_json(self, stage: str, name: str, timeframe: str = "all") -> Any: ...
    @abstractmethod
    def save_frame(self, stage: str, name: str, frame: pd.DataFrame, timeframe: str = "all") -> None: ...
    @abstractmethod
    def load_frame(self, stage: str, name: str, timeframe: str = "all") -> pd.DataFrame: ...
    @abstractmethod
    def save_text(self, stage: str, name: str, text: str, timeframe: str = "all") -> None: ...
    @abstractmethod
    def load_text(self, stage: str, name: str, timeframe: str = "all") -> str: ...
