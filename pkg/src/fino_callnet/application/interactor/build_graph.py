import logging

from fino_callnet.application.input.build_graph import BuildGraphInput
from fino_callnet.application.output.build_graph import BuildGraphOutput, GraphSummary
from fino_callnet.domain.repository.pipeline import PipelineRepository
from fino_callnet.domain.service.graph_builder import build_graph
from fino_callnet.domain.service.labels import node_labels

logger = logging.getLogger(__name__)


class BuildGraphUseCase:
    """タイムフレーム × モードごとに通話ネットワークを作り、ノードのラベルと一緒に保存する"""

    def __init__(self, pipeline_repository: PipelineRepository) -> None:
        self.pipeline_repository = pipeline_repository

    def execute(self, input: BuildGraphInput) -> BuildGraphOutput:
        records = self.pipeline_repository.load_cdr()
        bank = self.pipeline_repository.load_bank()

        graphs: list[GraphSummary] = []
        subjects: dict[str, int] = {}
        customers: dict[str, int] = {}
        for timeframe in input.timeframes:
            window = timeframe.to_range()
            for mode in input.modes:
                graph = build_graph(records, window, mode, timeframe.timeframe_id, input.weight)
                self.pipeline_repository.save_graph(graph)
                graphs.append(
                    GraphSummary(
                        timeframe_id=timeframe.timeframe_id,
                        mode=mode.value,
                        n_nodes=graph.n_nodes,
                        n_edges=graph.n_edges,
                        total_weight=graph.total_weight,
                        rows_outside_window=graph.rows_outside_window,
                    )
                )
                logger.info(
                    "graph %s/%s: %d nodes, %d edges",
                    timeframe.timeframe_id,
                    mode.value,
                    graph.n_nodes,
                    graph.n_edges,
                )
            labels = node_labels(bank, timeframe)
            self.pipeline_repository.save_labels(timeframe.timeframe_id, labels)
            subjects[timeframe.timeframe_id] = len(labels.subjects)
            customers[timeframe.timeframe_id] = len(labels.delinquency_level)
        return BuildGraphOutput(graphs=graphs, subjects=subjects, bank_customers=customers)
