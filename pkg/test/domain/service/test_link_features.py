from datetime import date, time

import numpy as np
import pytest
from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.service.graph_builder import build_graph
from fino_callnet.domain.service.link_features import (
    NO_INFORMATION,
    exposure_feature_names,
    exposure_link_features,
    link_based_features,
    link_feature_names,
)
from fino_callnet.domain.service.propagation import relabel_high_risk
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.exposure import ExposureVector, PropagationMethod, SeedCriterion
from fino_callnet.domain.value.graph_mode import GraphMode, GraphModeEnum
from fino_callnet.domain.value.node_labels import NodeLabelSet

WINDOW = (date(2017, 1, 1), date(2017, 3, 31))


def make_graph(pairs: list[tuple[str, str]], mode: GraphModeEnum = GraphModeEnum.UD) -> CallGraph:
    records = [CdrRecord(date(2017, 2, 1), time(9, 0), 60, src, dst) for src, dst in pairs]
    return build_graph(records, WINDOW, GraphMode(enum=mode))


@pytest.fixture
def graph() -> CallGraph:
    # s: 対象者。a(0), b(1) に2回, c(1), telco のみの t と通話
    # u: telco のみの相手だけ、v: レベル0と2が同数
    return make_graph(
        [
            ("s", "a"),
            ("s", "b"),
            ("b", "s"),
            ("s", "c"),
            ("s", "t"),
            ("u", "t"),
            ("v", "a"),
            ("d", "v"),
        ]
    )


@pytest.fixture
def labels() -> NodeLabelSet:
    return NodeLabelSet(
        delinquency_level={"s": 0, "u": 0, "v": 0, "m": 0, "a": 0, "b": 1, "c": 1, "d": 2},
        subjects=frozenset({"s", "u", "v", "m"}),
    )


@pytest.mark.domain
class TestLinkBasedFeatures:
    def test_names(self) -> None:
        names = link_feature_names("ud")
        assert len(names) == 12
        assert names[0] == "Binary (0) UD"
        assert "Weighted Count (0) UD" not in names
        assert names[-1] == "Mode UD"

    def test_counts_and_weights(self, graph: CallGraph, labels: NodeLabelSet) -> None:
        frame = link_based_features(graph, labels, ["s", "u", "v", "m"])
        row = frame.loc["s"]
        assert row["Binary (0) UD"] == 1.0
        assert row["Count (0) UD"] == 1.0
        assert row["Count (1) UD"] == 2.0
        assert row["Weighted Count (1) UD"] == 3.0
        assert row["Binary (2) UD"] == 0.0
        assert row["Binary (3) UD"] == 0.0
        assert row["Mode UD"] == 1.0

    def test_unlabeled_neighbors_only(self, graph: CallGraph, labels: NodeLabelSet) -> None:
        frame = link_based_features(graph, labels, ["u"])
        row = frame.loc["u"]
        assert row["Mode UD"] == NO_INFORMATION
        assert sum(row[f"Count ({c}) UD"] for c in range(4)) == 0.0

    def test_mode_tie_goes_to_lower_level(self, graph: CallGraph, labels: NodeLabelSet) -> None:
        frame = link_based_features(graph, labels, ["v"])
        assert frame.loc["v", "Count (0) UD"] == 1.0
        assert frame.loc["v", "Count (2) UD"] == 1.0
        assert frame.loc["v", "Mode UD"] == 0.0

    def test_subject_outside_graph_has_no_row(self, graph: CallGraph, labels: NodeLabelSet) -> None:
        frame = link_based_features(graph, labels, ["s", "m"])
        assert list(frame.index) == ["s"]
        assert frame.index.name == "subject_id"

    def test_directed_modes(self, labels: NodeLabelSet) -> None:
        pairs = [("s", "b"), ("d", "s")]
        out_frame = link_based_features(make_graph(pairs, GraphModeEnum.OUT), labels, ["s"])
        in_frame = link_based_features(make_graph(pairs, GraphModeEnum.IN), labels, ["s"])
        assert out_frame.loc["s", "Mode OUT"] == 1.0
        assert in_frame.loc["s", "Mode IN"] == 2.0


@pytest.mark.domain
class TestExposureLinkFeatures:
    @pytest.fixture
    def exposure(self, graph: CallGraph) -> ExposureVector:
        scores = {"a": 0.1, "b": 0.5, "c": 0.3, "d": 0.6, "s": 0.05, "t": 0.0, "u": 0.0, "v": 0.2}
        return ExposureVector(
            node_ids=graph.node_ids,
            scores=np.asarray([scores[n] for n in graph.node_ids]),
            method=PropagationMethod.SPA,
            seed_criterion=SeedCriterion.GE2,
            iterations_run=3,
            residual=0.0,
        )

    def test_features(self, graph: CallGraph, exposure: ExposureVector) -> None:
        relabeling = relabel_high_risk(exposure, 0.3)
        frame = exposure_link_features(graph, exposure, relabeling, ["s", "v", "m"])
        names = exposure_feature_names("spa", "ge2", "ud")
        assert list(frame.columns) == names
        assert list(frame.index) == ["s", "v"]

        s = frame.loc["s"]
        assert s["Exposure SPA ge2 UD"] == pytest.approx(0.05)
        # 高リスク近傍は b(0.5) と c(0.3)
        assert s["Binary High Risk SPA ge2 UD"] == 1.0
        assert s["Count High Risk SPA ge2 UD"] == 2.0
        assert s["Count Low Risk SPA ge2 UD"] == 2.0
        assert s["Weighted High Risk SPA ge2 UD"] == 3.0
        assert s["Mean Neighbor Exposure SPA ge2 UD"] == pytest.approx((0.1 + 0.5 + 0.3 + 0.0) / 4)

        v = frame.loc["v"]
        assert v["Count High Risk SPA ge2 UD"] == 1.0
        assert v["Count Low Risk SPA ge2 UD"] == 1.0

    def test_different_graph(self, graph: CallGraph, exposure: ExposureVector) -> None:
        other = make_graph([("x", "y")])
        with pytest.raises(ValueError, match="different graph"):
            exposure_link_features(other, exposure, relabel_high_risk(exposure, 0.3), ["x"])
