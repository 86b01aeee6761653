import logging
from collections.abc import Sequence
from typing import Any

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy import sparse

from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.repository.artifact import ArtifactRepository
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.value.artifact_key import ArtifactKey
from fino_callnet.domain.value.bank_record import BankRecord
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.exposure import ExposureVector, PropagationMethod, SeedCriterion
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.graph_mode import GraphMode
from fino_callnet.domain.value.ingest_stats import IngestStats
from fino_callnet.domain.value.node_labels import NodeLabelSet
from fino_callnet.domain.value.scored_dataset import ScoredDataset
from fino_callnet.infrastructure.adapter.record_source.csv_bank import bank_frames, ingest_bank
from fino_callnet.infrastructure.adapter.record_source.csv_cdr import format_cdr_lines, ingest_cdr
from fino_callnet.infrastructure.factory.classifier import dump_classifier, load_classifier
from fino_callnet.interface.config.ingest import IngestConfig
from fino_callnet.interface.port.classifier import ClassifierPort

logger = logging.getLogger(__name__)

BANK_TABLES = ("bank_accounts", "bank_transactions", "bank_card_activity")


def exposure_name(method: PropagationMethod, criterion: SeedCriterion, mode: GraphMode) -> str:
    return f"exposure_{method.value}_{criterion.label}_{mode.value}"


class PipelineRepositoryImpl(PipelineRepository):
    """
    ArtifactRepository の上に、ステージの成果物を型付きで読み書きする層
    - 取り込み済みデータは取り込み処理がそのまま読める CSV で保存する
    - グラフはエッジリスト（無向は i < j の片側のみ）とノード表で保存する
    """

    def __init__(self, artifacts: ArtifactRepository, run_id: str) -> None:
        self._artifacts = artifacts
        self._run_id = run_id
        self._written: list[ArtifactKey] = []

    @property
    def run_id(self) -> str:
        return self._run_id

    def _key(self, stage: str, name: str, ext: str, timeframe: str = "all") -> ArtifactKey:
        return ArtifactKey(run=self._run_id, stage=stage, name=name, ext=ext, timeframe=timeframe)

    def _write_frame(self, key: ArtifactKey, frame: pd.DataFrame) -> None:
        self._artifacts.save_frame(key, frame)
        self._written.append(key)

    def _write_json(self, key: ArtifactKey, data: Any) -> None:
        self._artifacts.save_json(key, data)
        self._written.append(key)

    def _write_text(self, key: ArtifactKey, text: str) -> None:
        self._artifacts.save_text(key, text)
        self._written.append(key)

    def _write_bytes(self, key: ArtifactKey, data: bytes) -> None:
        self._artifacts.save_bytes(key, data)
        self._written.append(key)

    def exists(self, stage: str, name: str, ext: str, timeframe: str = "all") -> bool:
        return self._artifacts.exists(self._key(stage, name, ext, timeframe))

    def describe(self, stage: str, name: str, ext: str, timeframe: str = "all") -> str:
        return self._artifacts.describe(self._key(stage, name, ext, timeframe))

    ########## stage manifest ##########

    def begin_stage(self, stage: str) -> None:
        self._written = []
        logger.debug("recording artifacts of stage %s", stage)

    def complete_stage(self, stage: str, summary: dict[str, Any]) -> None:
        """ステージが書いた成果物の一覧と要約を最後に書く（途中で失敗したステージには残らない）"""
        artifacts = sorted(
            {f"{key.stage}/{key.timeframe}/{key.name}.{key.ext}" for key in self._written}
        )
        self._artifacts.save_json(
            self._key(stage, "manifest", "json"), {"stage": stage, "artifacts": artifacts, "summary": summary}
        )
        self._written = []

    def is_complete(self, stage: str) -> bool:
        """マニフェストがあり、そこに載った成果物が全て残っていれば完了"""
        manifest_key = self._key(stage, "manifest", "json")
        if not self._artifacts.exists(manifest_key):
            return False
        for entry in self._artifacts.load_json(manifest_key)["artifacts"]:
            artifact_stage, timeframe, filename = entry.split("/")
            name, _, ext = filename.rpartition(".")
            if not self.exists(artifact_stage, name, ext, timeframe):
                logger.info("stage %s is incomplete: %s is missing", stage, entry)
                return False
        return True

    def load_summary(self, stage: str) -> dict[str, Any]:
        return self._artifacts.load_json(self._key(stage, "manifest", "json"))["summary"]

    ########## ingest ##########

    def save_cdr(self, records: Sequence[CdrRecord], stats: IngestStats, rejections: Sequence[str]) -> None:
        text = "\n".join(format_cdr_lines(records)) + "\n"
        self._write_text(self._key("ingest", "cdr", "csv"), text)
        self._write_json(
            self._key("ingest", "cdr_stats", "json"),
            {
                "rows_read": stats.rows_read,
                "rows_rejected": stats.rows_rejected,
                "rows_filtered_short": stats.rows_filtered_short,
                "accepted": stats.accepted,
                "distinct_ids": stats.distinct_ids,
            },
        )
        self._write_text(
            self._key("ingest", "cdr_rejections", "txt"), "".join(f"{line}\n" for line in rejections)
        )

    def load_cdr(self) -> list[CdrRecord]:
        text = self._artifacts.load_text(self._key("ingest", "cdr", "csv"))
        # 保存済みのデータは既にフィルタ済み
        batch = ingest_cdr(text.splitlines(), IngestConfig(min_duration=0, has_header=True))
        return batch.records

    def save_bank(self, records: Sequence[BankRecord], rejections: Sequence[str], summary: dict[str, Any]) -> None:
        for name, frame in zip(BANK_TABLES, bank_frames(records)):
            self._write_frame(self._key("ingest", name, "csv"), frame)
        self._write_json(self._key("ingest", "bank_summary", "json"), summary)
        self._write_text(
            self._key("ingest", "bank_rejections", "txt"), "".join(f"{line}\n" for line in rejections)
        )

    def load_bank(self) -> list[BankRecord]:
        accounts, transactions, cards = (
            self._artifacts.load_text(self._key("ingest", name, "csv")).splitlines() for name in BANK_TABLES
        )
        return ingest_bank(accounts, transactions, cards).records

    ########## graph ##########

    def save_graph(self, graph: CallGraph) -> None:
        weights = graph.weights if graph.mode.is_directed else sparse.triu(graph.weights, k=1, format="csr")
        coo = sparse.coo_array(weights)
        order = np.lexsort((coo.col, coo.row))
        node_ids = np.asarray(graph.node_ids, dtype=object)
        edges = pd.DataFrame(
            {
                "src_id": node_ids[coo.row[order]],
                "dst_id": node_ids[coo.col[order]],
                "weight": coo.data[order],
            }
        )
        mode, tf = graph.mode.value, graph.timeframe_id
        self._write_frame(self._key("graph", f"nodes_{mode}", "csv", tf), pd.DataFrame({"node_id": graph.node_ids}))
        self._write_frame(self._key("graph", f"edges_{mode}", "csv", tf), edges)
        self._write_json(
            self._key("graph", f"summary_{mode}", "json", tf),
            {
                "timeframe_id": tf,
                "mode": mode,
                "n_nodes": graph.n_nodes,
                "n_edges": graph.n_edges,
                "total_weight": graph.total_weight,
                "rows_outside_window": graph.rows_outside_window,
                "degree_distribution": {str(k): v for k, v in graph.degree_distribution().items()},
            },
        )

    def load_graph(self, timeframe_id: str, mode: GraphMode) -> CallGraph:
        tf = timeframe_id
        nodes = self._artifacts.load_frame(self._key("graph", f"nodes_{mode.value}", "csv", tf), dtype={"node_id": str})
        edges = self._artifacts.load_frame(
            self._key("graph", f"edges_{mode.value}", "csv", tf), dtype={"src_id": str, "dst_id": str}
        )
        summary = self._artifacts.load_json(self._key("graph", f"summary_{mode.value}", "json", tf))
        node_ids = tuple(nodes["node_id"].tolist())
        index = pd.Index(node_ids)
        n = len(node_ids)
        rows = index.get_indexer(edges["src_id"])
        cols = index.get_indexer(edges["dst_id"])
        data = edges["weight"].to_numpy(dtype=np.float64)
        if not mode.is_directed:
            rows, cols, data = np.concatenate([rows, cols]), np.concatenate([cols, rows]), np.concatenate([data, data])
        # 重み0のエッジも明示的な0として残す
        weights = sparse.coo_array((data, (rows, cols)), shape=(n, n)).tocsr()
        weights.sum_duplicates()
        weights.sort_indices()
        return CallGraph(
            timeframe_id=timeframe_id,
            mode=mode,
            node_ids=node_ids,
            weights=weights,
            rows_outside_window=int(summary["rows_outside_window"]),
        )

    def save_labels(self, timeframe_id: str, labels: NodeLabelSet) -> None:
        ids = sorted(labels.delinquency_level)
        frame = pd.DataFrame(
            {
                "node_id": ids,
                "delinquency_level": [labels.delinquency_level[i] for i in ids],
                "is_subject": [int(i in labels.subjects) for i in ids],
            }
        )
        self._write_frame(self._key("graph", "labels", "csv", timeframe_id), frame)

    def load_labels(self, timeframe_id: str) -> NodeLabelSet:
        frame = self._artifacts.load_frame(self._key("graph", "labels", "csv", timeframe_id), dtype={"node_id": str})
        return NodeLabelSet(
            delinquency_level=dict(zip(frame["node_id"], frame["delinquency_level"].astype(int).tolist())),
            subjects=frozenset(frame.loc[frame["is_subject"] == 1, "node_id"]),
        )

    ########## propagate ##########

    def save_exposure(self, timeframe_id: str, mode: GraphMode, exposure: ExposureVector) -> None:
        name = exposure_name(exposure.method, exposure.seed_criterion, mode)
        frame = pd.DataFrame({"node_id": exposure.node_ids, "exposure": exposure.scores})
        self._write_frame(self._key("propagate", name, "csv", timeframe_id), frame)
        self._write_json(
            self._key("propagate", f"{name}_run", "json", timeframe_id),
            {
                "method": exposure.method.value,
                "seed_criterion": exposure.seed_criterion.label,
                "mode": mode.value,
                "iterations_run": exposure.iterations_run,
                "residual": exposure.residual,
                "total": exposure.total,
            },
        )

    def load_exposure(
        self, timeframe_id: str, mode: GraphMode, method: PropagationMethod, criterion: SeedCriterion
    ) -> ExposureVector:
        name = exposure_name(method, criterion, mode)
        frame = self._artifacts.load_frame(self._key("propagate", name, "csv", timeframe_id), dtype={"node_id": str})
        meta = self._artifacts.load_json(self._key("propagate", f"{name}_run", "json", timeframe_id))
        return ExposureVector(
            node_ids=tuple(frame["node_id"].tolist()),
            scores=frame["exposure"].to_numpy(dtype=np.float64),
            method=method,
            seed_criterion=criterion,
            iterations_run=int(meta["iterations_run"]),
            residual=float(meta["residual"]),
        )

    ########## featurize ##########

    def save_features(self, matrix: FeatureMatrix) -> None:
        self._write_frame(self._key("featurize", "features", "csv"), matrix.to_frame())

    def load_features(self) -> FeatureMatrix:
        frame = self._artifacts.load_frame(
            self._key("featurize", "features", "csv"), dtype={"subject_id": str, "timeframe_id": str}
        )
        return FeatureMatrix.from_table(frame)

    ########## train / predict ##########

    def save_split(self, matrix: FeatureMatrix, train_rows: npt.NDArray[np.int64], test_rows: npt.NDArray[np.int64]) -> None:
        assignment = np.full(matrix.n_rows, "", dtype=object)
        assignment[np.asarray(train_rows, dtype=np.int64)] = "train"
        assignment[np.asarray(test_rows, dtype=np.int64)] = "test"
        frame = pd.DataFrame(
            {
                "row": np.arange(matrix.n_rows),
                "subject_id": matrix.subject_ids,
                "timeframe_id": matrix.timeframe_ids,
                "set": assignment,
            }
        )
        self._write_frame(self._key("train", "split", "csv"), frame)

    def load_split(self) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
        frame = self._artifacts.load_frame(
            self._key("train", "split", "csv"), dtype={"subject_id": str, "timeframe_id": str, "set": str}
        )
        rows = frame["row"].to_numpy(dtype=np.int64)
        return rows[(frame["set"] == "train").to_numpy()], rows[(frame["set"] == "test").to_numpy()]

    def save_classifier(self, name: str, classifier: ClassifierPort) -> None:
        self._write_bytes(self._key("train", f"model_{name}", "joblib"), dump_classifier(classifier))
        self._write_json(self._key("train", f"model_{name}", "json"), classifier.export())

    def load_classifier(self, name: str) -> ClassifierPort:
        return load_classifier(self._artifacts.load_bytes(self._key("train", f"model_{name}", "joblib")))

    def save_scores(self, name: str, scored: ScoredDataset, timeframe_ids: Sequence[str]) -> None:
        if len(timeframe_ids) != scored.n_instances:
            raise ValueError("timeframe_ids must align with the scored instances")
        frame = pd.DataFrame(
            {
                "subject_id": scored.subject_ids,
                "timeframe_id": list(timeframe_ids),
                "y": scored.y.astype(np.int64),
                "score": scored.score,
            }
        )
        self._write_frame(self._key("predict", f"scores_{name}", "csv"), frame)

    def load_scores(self, name: str) -> ScoredDataset:
        frame = self._artifacts.load_frame(
            self._key("predict", f"scores_{name}", "csv"), dtype={"subject_id": str, "timeframe_id": str}
        )
        return ScoredDataset(
            subject_ids=tuple(frame["subject_id"].tolist()),
            y=frame["y"].to_numpy(dtype=np.int64) == 1,
            score=frame["score"].to_numpy(dtype=np.float64),
            model_name=name,
        )

    ########## reports ##########

    def save_json(self, stage: str, name: str, data: Any, timeframe: str = "all") -> None:
        self._write_json(self._key(stage, name, "json", timeframe), data)

    def load_json(self, stage: str, name: str, timeframe: str = "all") -> Any:
        return self._artifacts.load_json(self._key(stage, name, "json", timeframe))

    def save_frame(self, stage: str, name: str, frame: pd.DataFrame, timeframe: str = "all") -> None:
        self._write_frame(self._key(stage, name, "csv", timeframe), frame)

    def load_frame(self, stage: str, name: str, timeframe: str = "all") -> pd.DataFrame:
        return self._artifacts.load_frame(self._key(stage, name, "csv", timeframe))

    def save_text(self, stage: str, name: str, text: str, timeframe: str = "all") -> None:
        self._write_text(self._key(stage, name, "txt", timeframe), text)

    def load_text(self, stage: str, name: str, timeframe: str = "all") -> str:
        return self._artifacts.load_text(self._key(stage, name, "txt", timeframe))
