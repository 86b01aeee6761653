import tempfile
from collections.abc import Generator
from datetime import date, time

import numpy as np
import pytest
from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.service.graph_builder import build_graph
from fino_callnet.domain.value.artifact_key import ArtifactKey
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.graph_mode import GraphMode, GraphModeEnum
from fino_callnet.domain.value.ingest_stats import IngestStats
from fino_callnet.domain.value.node_labels import NodeLabelSet
from fino_callnet.domain.value.scored_dataset import ScoredDataset
from fino_callnet.infrastructure.adapter.storage.local import LocalStorage
from fino_callnet.infrastructure.adapter.synth.planted import planted_feature_matrix
from fino_callnet.infrastructure.policy.artifact_path import ArtifactPathPolicy
from fino_callnet.infrastructure.repository.artifact import ArtifactRepositoryImpl
from fino_callnet.infrastructure.repository.pipeline import PipelineRepositoryImpl
from fino_callnet.interface.config.storage import LocalStorageConfig

WINDOW = (date(2017, 1, 1), date(2017, 3, 31))


def _record(from_id: str, to_id: str, day: date = date(2017, 2, 1), duration: int = 60) -> CdrRecord:
    return CdrRecord(start_date=day, start_time=time(10, 0), duration=duration, from_id=from_id, to_id=to_id)


RECORDS = [
    _record("+32 401", "+32 402"),
    _record("+32 401", "+32 402", day=date(2017, 2, 2)),
    _record("+32 402", "+32 403"),
    _record("+32 403", "+32 401", duration=7),
    _record("+32 404", "+32 401", day=date(2017, 5, 1)),
]


@pytest.mark.infrastructure
class TestArtifactPathPolicy:
    def test_generate_path(self) -> None:
        key = ArtifactKey(run="r1", stage="graph", name="edges_UD", ext="csv", timeframe="t2")
        assert ArtifactPathPolicy.generate_path(key) == "r1/graph/t2/edges_UD.csv"

    def test_default_timeframe(self) -> None:
        key = ArtifactKey(run="r1", stage="evaluate", name="summary", ext="json")
        assert ArtifactPathPolicy.generate_path(key) == "r1/evaluate/all/summary.json"

    @pytest.mark.parametrize("segment", ["", "../up", "a/b", " space"])
    def test_invalid_segment(self, segment: str) -> None:
        with pytest.raises(ValueError, match="Invalid artifact name"):
            ArtifactKey(run="r1", stage="graph", name=segment, ext="csv")


@pytest.mark.infrastructure
class TestPipelineRepository:
    @pytest.fixture
    def storage(self) -> Generator[LocalStorage, None, None]:
        with tempfile.TemporaryDirectory() as tmpdir:
            yield LocalStorage(config=LocalStorageConfig(base_dir=tmpdir))

    @pytest.fixture
    def repository(self, storage: LocalStorage) -> PipelineRepositoryImpl:
        return PipelineRepositoryImpl(ArtifactRepositoryImpl(storage), run_id="r1")

    ########## stage manifest ##########
    def test_stage_not_started(self, repository: PipelineRepositoryImpl) -> None:
        assert not repository.is_complete("netstats")

    def test_complete_stage(self, repository: PipelineRepositoryImpl) -> None:
        repository.begin_stage("netstats")
        repository.save_json("netstats", "homophily", {"m_total": 5}, timeframe="t1")
        repository.save_text("netstats", "report", "ok\n")
        assert not repository.is_complete("netstats")

        repository.complete_stage("netstats", {"timeframes": 1})
        assert repository.is_complete("netstats")
        assert repository.load_summary("netstats") == {"timeframes": 1}
        manifest = repository.load_json("netstats", "manifest")
        assert manifest["artifacts"] == ["netstats/all/report.txt", "netstats/t1/homophily.json"]

    def test_missing_artifact_makes_stage_incomplete(
        self, repository: PipelineRepositoryImpl, storage: LocalStorage
    ) -> None:
        repository.begin_stage("netstats")
        repository.save_text("netstats", "report", "ok\n")
        repository.complete_stage("netstats", {})
        storage.delete("r1/netstats/all/report.txt")
        assert not repository.is_complete("netstats")

    def test_artifacts_of_previous_stage_not_listed(self, repository: PipelineRepositoryImpl) -> None:
        repository.begin_stage("a")
        repository.save_text("a", "x", "1")
        repository.begin_stage("b")
        repository.save_text("b", "y", "2")
        repository.complete_stage("b", {})
        assert repository.load_json("b", "manifest")["artifacts"] == ["b/all/y.txt"]

    ########## ingest ##########
    def test_cdr_round_trip(self, repository: PipelineRepositoryImpl) -> None:
        stats = IngestStats(rows_read=6, rows_rejected=1, rows_filtered_short=0, distinct_ids=4)
        repository.save_cdr(RECORDS, stats, ["row 3: invalid date '32JAN2017'"])
        assert repository.load_cdr() == RECORDS
        assert repository.load_text("ingest", "cdr_rejections") == "row 3: invalid date '32JAN2017'\n"
        assert repository.load_json("ingest", "cdr_stats")["accepted"] == 5

    ########## graph ##########
    @pytest.mark.parametrize("mode", list(GraphModeEnum))
    def test_graph_round_trip(self, repository: PipelineRepositoryImpl, mode: GraphModeEnum) -> None:
        graph = build_graph(RECORDS, WINDOW, GraphMode(enum=mode), timeframe_id="t2")
        repository.save_graph(graph)
        loaded = repository.load_graph("t2", GraphMode(enum=mode))
        assert isinstance(loaded, CallGraph)
        assert loaded.node_ids == graph.node_ids
        assert loaded.n_edges == graph.n_edges
        assert loaded.rows_outside_window == 1
        np.testing.assert_array_equal(loaded.weights.toarray(), graph.weights.toarray())

    @pytest.mark.parametrize("mode", list(GraphModeEnum))
    def test_zero_weight_edge_round_trip(self, repository: PipelineRepositoryImpl, mode: GraphModeEnum) -> None:
        records = [_record("+32 401", "+32 402", duration=0), _record("+32 402", "+32 403", duration=30)]
        graph = build_graph(records, WINDOW, GraphMode(enum=mode), timeframe_id="t1", weight="duration")
        repository.save_graph(graph)
        loaded = repository.load_graph("t1", GraphMode(enum=mode))
        assert loaded.n_edges == graph.n_edges == 2
        assert loaded.degrees.tolist() == graph.degrees.tolist()

    def test_graph_summary(self, repository: PipelineRepositoryImpl) -> None:
        graph = build_graph(RECORDS, WINDOW, GraphMode(enum=GraphModeEnum.UD), timeframe_id="t1")
        repository.save_graph(graph)
        summary = repository.load_json("graph", "summary_ud", timeframe="t1")
        assert summary["n_nodes"] == 3
        assert summary["n_edges"] == 3
        assert summary["total_weight"] == 4.0

    def test_labels_round_trip(self, repository: PipelineRepositoryImpl) -> None:
        labels = NodeLabelSet(delinquency_level={"+32 401": 3, "+32 402": 0}, subjects=frozenset({"+32 402"}))
        repository.save_labels("t1", labels)
        loaded = repository.load_labels("t1")
        assert dict(loaded.delinquency_level) == {"+32 401": 3, "+32 402": 0}
        assert loaded.subjects == frozenset({"+32 402"})

    ########## featurize / train / predict ##########
    def test_features_round_trip(self, repository: PipelineRepositoryImpl) -> None:
        matrix, _ = planted_feature_matrix(n_rows=20, n_noise=2, seed=5)
        repository.save_features(matrix)
        loaded = repository.load_features()
        assert loaded.subject_ids == matrix.subject_ids
        assert loaded.feature_names == matrix.feature_names
        assert loaded.group_tags == matrix.group_tags
        np.testing.assert_allclose(loaded.values, matrix.values, rtol=1e-12)
        np.testing.assert_array_equal(loaded.target, matrix.target)

    def test_split_round_trip(self, repository: PipelineRepositoryImpl) -> None:
        matrix, _ = planted_feature_matrix(n_rows=10, n_noise=1, seed=5)
        repository.save_split(matrix, np.array([0, 2, 4, 6, 8, 9]), np.array([1, 3, 5, 7]))
        train, test = repository.load_split()
        assert train.tolist() == [0, 2, 4, 6, 8, 9]
        assert test.tolist() == [1, 3, 5, 7]

    def test_scores_round_trip(self, repository: PipelineRepositoryImpl) -> None:
        scored = ScoredDataset(
            subject_ids=("a", "b", "c"),
            y=np.array([True, False, False]),
            score=np.array([0.9, 0.25, 0.5]),
        )
        repository.save_scores("H_forest", scored, ["t1", "t1", "t2"])
        loaded = repository.load_scores("H_forest")
        assert loaded.subject_ids == ("a", "b", "c")
        assert loaded.y.tolist() == [True, False, False]
        assert loaded.score.tolist() == [0.9, 0.25, 0.5]
        assert loaded.model_name == "H_forest"

    def test_scores_misaligned_timeframes(self, repository: PipelineRepositoryImpl) -> None:
        scored = ScoredDataset(subject_ids=("a", "b"), y=np.array([True, False]), score=np.array([0.9, 0.1]))
        with pytest.raises(ValueError, match="timeframe_ids must align"):
            repository.save_scores("H_forest", scored, ["t1"])
