import csv
from pathlib import Path
from typing import Any

import pytest
from fino_callnet import CreditScoringPipeline, DataError, ExperimentConfig, StageError


def _config(base_dir: Path, run_id: str, **overrides: Any) -> ExperimentConfig:
    data: dict[str, Any] = {
        "run_id": run_id,
        "seed": 3,
        "storage": {"base_dir": str(base_dir)},
        "synth": {
            "n_nodes": 600,
            "n_subjects": 240,
            "mean_degree": 6.0,
            "default_rate": 0.2,
            "seed": 3,
        },
        "model_ids": ["A", "C", "H"],
        "classifiers": ["tree", "forest"],
        "model": {"n_trees": 40, "cv_folds": 3, "ccp_grid_size": 5},
        "netstats": {"permutations": 20},
        "importance": {"permutation_repeats": 2, "top_k": 5},
    }
    data.update(overrides)
    return ExperimentConfig.model_validate(data)


@pytest.mark.slow
class TestCreditScoringPipeline:
    @pytest.fixture(scope="class")
    def base_dir(self, tmp_path_factory: pytest.TempPathFactory) -> Path:
        return tmp_path_factory.mktemp("runs")

    @pytest.fixture(scope="class")
    def report(self, base_dir: Path) -> dict[str, Any]:
        return CreditScoringPipeline(_config(base_dir, "first")).run()

    ########## end to end ##########
    def test_report(self, report: dict[str, Any], base_dir: Path) -> None:
        assert report["run_id"] == "first"
        models = [row["model"] for row in report["evaluate"]["rows"]]
        assert models == ["A-tree", "A-forest", "C-tree", "C-forest", "H-tree", "H-forest"]
        for row in report["evaluate"]["rows"]:
            assert 0.0 <= row["auc"] <= 1.0
            assert row["emp"] >= 0.0
            assert 0.0 <= row["emp_fraction"] <= 1.0
        assert set(report["compare"]["edges"]) == {"0.95", "0.99"}
        assert (base_dir / "first" / "report" / "all" / "report.txt").is_file()
        assert (base_dir / "first" / "report" / "all" / "report.json").is_file()

    def test_artifacts_per_timeframe(self, report: dict[str, Any], base_dir: Path) -> None:
        for timeframe in ("t1", "t2", "t3"):
            for mode in ("in", "out", "ud"):
                assert (base_dir / "first" / "graph" / timeframe / f"edges_{mode}.csv").is_file()
            assert (base_dir / "first" / "netstats" / timeframe / "homophily.txt").is_file()

    ########## determinism ##########
    def test_same_seed_same_results(self, report: dict[str, Any], base_dir: Path) -> None:
        again = CreditScoringPipeline(_config(base_dir, "second")).run()
        assert again["evaluate"] == report["evaluate"]
        assert again["importance"] == report["importance"]
        first = (base_dir / "first" / "featurize" / "all" / "features.csv").read_bytes()
        second = (base_dir / "second" / "featurize" / "all" / "features.csv").read_bytes()
        assert first == second

    ########## resume ##########
    def test_completed_run_is_skipped(self, report: dict[str, Any], base_dir: Path) -> None:
        manifest = base_dir / "first" / "train" / "all" / "manifest.json"
        before = manifest.stat().st_mtime_ns
        assert CreditScoringPipeline(_config(base_dir, "first")).run() == report
        assert manifest.stat().st_mtime_ns == before

    def test_resume_after_missing_artifact(self, report: dict[str, Any], base_dir: Path) -> None:
        (base_dir / "first" / "evaluate" / "all" / "evaluation.csv").unlink()
        train_manifest = base_dir / "first" / "train" / "all" / "manifest.json"
        before = train_manifest.stat().st_mtime_ns
        resumed = CreditScoringPipeline(_config(base_dir, "first")).run()
        assert resumed["evaluate"] == report["evaluate"]
        assert (base_dir / "first" / "evaluate" / "all" / "evaluation.csv").is_file()
        assert train_manifest.stat().st_mtime_ns == before


class TestCreditScoringPipelineErrors:
    def test_missing_inputs(self, tmp_path: Path) -> None:
        config = _config(tmp_path, "missing", synth=None, inputs={"calls": str(tmp_path / "calls.csv")})
        with pytest.raises(DataError, match="input file not found"):
            CreditScoringPipeline(config).run()

    def test_stage_error_names_stage(self, tmp_path: Path) -> None:
        pipeline = CreditScoringPipeline(_config(tmp_path, "broken"))
        pipeline.synthesize()
        (tmp_path / "broken" / "synth" / "all" / "accounts.csv").write_text("customer_id\n", encoding="utf-8")
        with pytest.raises(StageError) as excinfo:
            pipeline.run()
        assert excinfo.value.stage == "ingest"
        assert isinstance(excinfo.value.cause, DataError)

    def test_unexpected_failure_is_stage_error(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        class Broken:
            def __init__(self, *_: object) -> None: ...

            def execute(self, *_: object) -> None:
                raise RuntimeError("boom")

        monkeypatch.setattr("fino_callnet.public.credit_scoring.TrainUseCase", Broken)
        with pytest.raises(StageError) as excinfo:
            CreditScoringPipeline(_config(tmp_path, "broken")).train()
        assert excinfo.value.stage == "train"
        assert isinstance(excinfo.value.cause, RuntimeError)

    def test_missing_label_file(self, tmp_path: Path) -> None:
        config = _config(tmp_path, "labels", netstats={"labels": str(tmp_path / "labels.csv")})
        with pytest.raises(StageError) as excinfo:
            CreditScoringPipeline(config).netstats()
        assert isinstance(excinfo.value.cause, FileNotFoundError)


class TestCreditScoringPipelineStages:
    @pytest.fixture
    def graphs(self, tmp_path: Path) -> Path:
        """合成データを取り込み、ネットワークまで作った実行ディレクトリ"""
        pipeline = CreditScoringPipeline(_config(tmp_path, "stages"))
        pipeline.synthesize()
        pipeline.ingest()
        pipeline.build_graph()
        return tmp_path

    def test_netstats_with_label_file(self, graphs: Path) -> None:
        node_ids: dict[str, set[str]] = {}
        for timeframe in ("t1", "t2", "t3"):
            with (graphs / "stages" / "graph" / timeframe / "nodes_ud.csv").open(encoding="utf-8") as f:
                node_ids[timeframe] = {row["node_id"] for row in csv.DictReader(f)}
        every_node = sorted(set().union(*node_ids.values()))
        labels = graphs / "labels.csv"
        with labels.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["node_id", "is_defaulter"])
            writer.writerows([node_id, int(i % 3 == 0)] for i, node_id in enumerate(every_node))
            writer.writerow(["not-in-any-graph", 1])

        config = _config(graphs, "stages", netstats={"permutations": 0, "labels": str(labels)})
        output = CreditScoringPipeline(config).netstats()
        assert set(output.reports) == {"t1", "t2", "t3"}
        for timeframe, report in output.reports.items():
            # 外部ラベルはグラフの全ノードに付いている
            assert report["n_default"] + report["n_nondefault"] == len(node_ids[timeframe])
            assert "permutation_null" not in report

    def test_propagation_subset(self, graphs: Path) -> None:
        config = _config(graphs, "stages", propagation={"methods": "pr", "seed_criteria": ["ge1"]})
        pipeline = CreditScoringPipeline(config)
        output = pipeline.propagate()
        assert len(output.exposures) == 9
        assert {(e.method, e.seed_criterion) for e in output.exposures} == {("pr", "ge1")}

        # 特徴量には全ての伝播が要る
        with pytest.raises(StageError) as excinfo:
            pipeline.featurize()
        assert excinfo.value.stage == "featurize"
        assert isinstance(excinfo.value.cause, DataError)
        assert "propagation" in str(excinfo.value.cause)


@pytest.mark.slow
class TestPlantedHomophilyPipeline:
    """ラベルが通話ネットワークにだけ現れるデータでは、ネットワーク特徴量を持つモデルが勝つ"""

    @pytest.fixture(scope="class")
    def report(self, tmp_path_factory: pytest.TempPathFactory) -> dict[str, Any]:
        config = _config(
            tmp_path_factory.mktemp("runs"),
            "planted",
            seed=5,
            synth={
                "n_nodes": 3000,
                "n_subjects": 1500,
                "bank_share": 0.6,
                "mean_degree": 8.0,
                "default_rate": 0.2,
                "homophily_strength": 10.0,
                # 社会人口統計には信号を入れない
                "planted_feature_effect": 0.0,
                "contagion": 4.0,
                "seed": 5,
            },
            model_ids=["A", "H"],
            classifiers=["forest"],
            model={"n_trees": 200},
            importance={"kinds": ["accuracy"], "permutation_repeats": 2, "top_k": 5},
        )
        return CreditScoringPipeline(config).run()

    def test_network_model_beats_baseline(self, report: dict[str, Any]) -> None:
        auc = {row["model"]: row["auc"] for row in report["evaluate"]["rows"]}
        assert auc["H-forest"] > auc["A-forest"]
        assert "H-forest > A-forest" in report["compare"]["edges"]["0.95"]

    def test_accuracy_importance_only(self, report: dict[str, Any]) -> None:
        importance = report["importance"]
        assert importance["kinds"] == ["accuracy", "membership"]
        assert importance["top_profit"] == []
        assert len(importance["top_accuracy"]) == 5
        assert importance["spearman_rho"] is None
