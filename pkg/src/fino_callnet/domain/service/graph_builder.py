import logging
from collections.abc import Sequence
from datetime import date
from typing import Literal

import numpy as np
from scipy import sparse

from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.graph_mode import GraphMode, GraphModeEnum

logger = logging.getLogger(__name__)

EdgeWeight = Literal["count", "duration"]


def build_graph(
    records: Sequence[CdrRecord],
    window: tuple[date, date],
    mode: GraphMode,
    timeframe_id: str = "t1",
    weight: EdgeWeight = "count",
) -> CallGraph:
    """
    期間内の通話を集約して通話ネットワークを作る
    - window は両端を含む日付レンジ
    - エッジ重みはペア間の通話回数（weight="duration" で通話時間の合計。合計0秒でもエッジは残る）
    - ノード番号は電話番号（不透明文字列）の辞書順に振るため、入力順に依存しない
    """
    start, end = window
    callers: list[str] = []
    callees: list[str] = []
    amounts: list[float] = []
    outside = 0
    for record in records:
        if not start <= record.start_date <= end:
            outside += 1
            continue
        callers.append(record.from_id)
        callees.append(record.to_id)
        amounts.append(1.0 if weight == "count" else float(record.duration))

    if outside:
        logger.warning(
            "timeframe %s: %d calls outside window %s..%s rejected",
            timeframe_id,
            outside,
            start.isoformat(),
            end.isoformat(),
        )

    node_ids, inverse = np.unique(np.asarray(callers + callees, dtype=object), return_inverse=True)
    n_nodes = len(node_ids)
    n_calls = len(callers)
    src = inverse[:n_calls].astype(np.int64)
    dst = inverse[n_calls:].astype(np.int64)
    data = np.asarray(amounts, dtype=np.float64)

    match mode.enum:
        case GraphModeEnum.OUT:
            rows, cols, values = src, dst, data
        case GraphModeEnum.IN:
            rows, cols, values = dst, src, data
        case GraphModeEnum.UD:
            rows = np.concatenate([src, dst])
            cols = np.concatenate([dst, src])
            values = np.concatenate([data, data])

    # COO→CSR変換で重複ペアは合算される。重み0のエッジも明示的な0として残す
    weights = sparse.coo_array((values, (rows, cols)), shape=(n_nodes, n_nodes)).tocsr()
    weights.sum_duplicates()
    weights.sort_indices()

    graph = CallGraph(
        timeframe_id=timeframe_id,
        mode=mode,
        node_ids=tuple(str(node_id) for node_id in node_ids),
        weights=weights,
        rows_outside_window=outside,
    )
    logger.info(
        "built %s graph for %s: %d nodes, %d edges, %d calls",
        mode.value,
        timeframe_id,
        graph.n_nodes,
        graph.n_edges,
        n_calls,
    )
    return graph
