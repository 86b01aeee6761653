"""
デフォルトラベルの同類性（homophily）の検定
統計量はラベルが分かっているノード（銀行顧客）に限定した無向グラフで計算する
"""

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.stats import norm

from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.error import DataError
from fino_callnet.domain.value.homophily_report import HomophilyReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledEdges:
    """ラベル付きノードに限定したエッジリスト（上三角のみ、各エッジ1回）"""

    defaulter: npt.NDArray[np.bool_]
    u: npt.NDArray[np.int64]
    v: npt.NDArray[np.int64]

    @property
    def n_nodes(self) -> int:
        return len(self.defaulter)

    @property
    def n_default(self) -> int:
        return int(self.defaulter.sum())

    @property
    def m_total(self) -> int:
        return len(self.u)

    def counts(self, labels: npt.NDArray[np.bool_] | None = None) -> tuple[int, int]:
        """(m_cross, m_dyadic)"""
        labels = self.defaulter if labels is None else labels
        lu, lv = labels[self.u], labels[self.v]
        return int(np.count_nonzero(lu != lv)), int(np.count_nonzero(lu & lv))


def labeled_edges(graph: CallGraph, labels: Mapping[str, bool]) -> LabeledEdges:
    if graph.mode.is_directed:
        raise DataError("homophily statistics need the undirected graph")
    keep = np.asarray(
        [i for i, node_id in enumerate(graph.node_ids) if node_id in labels], dtype=np.int64
    )
    defaulter = np.asarray([labels[graph.node_ids[i]] for i in keep], dtype=np.bool_)
    restricted = sparse.triu(graph.adjacency[keep][:, keep], k=1).tocoo()
    return LabeledEdges(
        defaulter=defaulter,
        u=restricted.row.astype(np.int64),
        v=restricted.col.astype(np.int64),
    )


def _check_labels(edges: LabeledEdges) -> None:
    if edges.n_default == 0 or edges.n_default == edges.n_nodes:
        raise DataError("homophily statistics need at least one node of each label")
    if edges.m_total == 0:
        raise DataError("no edges between labeled nodes")


def _pair_fraction(count: float, n: int) -> float:
    """ノードペアのうち count が占める割合 count / (n choose 2)"""
    return 2.0 * count / (n * (n - 1))


def _dyadicity(edges: LabeledEdges, m_dyadic: int) -> float:
    n1 = edges.n_default
    if n1 < 2:
        raise DataError("dyadicity needs at least two defaulters")
    expected = edges.m_total * _pair_fraction(n1 * (n1 - 1) / 2, edges.n_nodes)
    return m_dyadic / expected


def _heterophilicity(edges: LabeledEdges, m_cross: int) -> float:
    n1 = edges.n_default
    n0 = edges.n_nodes - n1
    expected = edges.m_total * _pair_fraction(n1 * n0, edges.n_nodes)
    return m_cross / expected


def dyadicity(graph: CallGraph, labels: Mapping[str, bool]) -> float:
    edges = labeled_edges(graph, labels)
    if edges.m_total == 0:
        raise DataError("no edges between labeled nodes")
    _, m_dyadic = edges.counts()
    return _dyadicity(edges, m_dyadic)


def heterophilicity(graph: CallGraph, labels: Mapping[str, bool]) -> float:
    edges = labeled_edges(graph, labels)
    _check_labels(edges)
    m_cross, _ = edges.counts()
    return _heterophilicity(edges, m_cross)


def homophily_test(graph: CallGraph, labels: Mapping[str, bool]) -> HomophilyReport:
    """
    片側の比率検定（正規近似）
    ランダムな結合の下での期待クロス比率 2·n₁·n₀/(n(n−1)) より観測値が小さいかを検定する
    分散は期待値ベース: expected(1 − expected)/m
    """
    edges = labeled_edges(graph, labels)
    _check_labels(edges)
    m_cross, m_dyadic = edges.counts()
    n1 = edges.n_default
    n0 = edges.n_nodes - n1
    expected = _pair_fraction(n1 * n0, edges.n_nodes)
    observed = m_cross / edges.m_total
    variance = expected * (1.0 - expected) / edges.m_total
    if variance > 0:
        z = (observed - expected) / math.sqrt(variance)
    else:
        z = 0.0
    p_value = float(norm.cdf(z))

    report = HomophilyReport(
        n_default=n1,
        n_nondefault=n0,
        m_total=edges.m_total,
        m_cross=m_cross,
        m_dyadic=m_dyadic,
        expected_cross_fraction=expected,
        observed_cross_fraction=observed,
        z_statistic=z,
        p_value=min(max(p_value, 0.0), 1.0),
        dyadicity=_dyadicity(edges, m_dyadic) if n1 >= 2 else math.nan,
        heterophilicity=_heterophilicity(edges, m_cross),
    )
    logger.info(
        "homophily on %s: D=%.4f H=%.4f z=%.3f p=%.4g (%s)",
        graph.timeframe_id,
        report.dyadicity,
        report.heterophilicity,
        z,
        report.p_value,
        report.classification,
    )
    return report


def label_permutation_null(
    graph: CallGraph,
    labels: Mapping[str, bool],
    n_permutations: int,
    rng: np.random.Generator,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """ラベルを一様にシャッフルしたときの (D, H) の分布"""
    edges = labeled_edges(graph, labels)
    _check_labels(edges)
    dyadic = np.empty(n_permutations)
    hetero = np.empty(n_permutations)
    for k in range(n_permutations):
        permuted = rng.permutation(edges.defaulter)
        m_cross, m_dyadic = edges.counts(permuted)
        dyadic[k] = _dyadicity(edges, m_dyadic) if edges.n_default >= 2 else math.nan
        hetero[k] = _heterophilicity(edges, m_cross)
    return dyadic, hetero
