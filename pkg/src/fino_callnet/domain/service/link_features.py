"""
近傍のラベルから作るリンク特徴量
- LB: 延滞レベル c の近傍の有無 (Binary)・数 (Count)・重み付き数 (Weighted Count) と最頻レベル (Mode)
- PR/SPA: 自分の曝露スコアと、高リスク近傍の有無・数など
いずれもインジケータベクトルと隣接行列の積で全ノード分をまとめて計算する
"""

from collections.abc import Sequence

import numpy as np
import pandas as pd

from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.value.exposure import ExposureVector, RiskRelabeling
from fino_callnet.domain.value.node_labels import MAX_LEVEL, NodeLabelSet

# ラベル付きの近傍がない場合の最頻レベル（クラス0とは区別する）
NO_INFORMATION = -1.0

LEVELS = tuple(range(MAX_LEVEL + 1))


def link_feature_names(mode: str) -> list[str]:
    suffix = mode.upper()
    return [
        *(f"Binary ({c}) {suffix}" for c in LEVELS),
        *(f"Count ({c}) {suffix}" for c in LEVELS),
        *(f"Weighted Count ({c}) {suffix}" for c in LEVELS if c > 0),
        f"Mode {suffix}",
    ]


def exposure_feature_names(method: str, criterion: str, mode: str) -> list[str]:
    tag = f"{method.upper()} {criterion} {mode.upper()}"
    return [
        f"Exposure {tag}",
        f"Binary High Risk {tag}",
        f"Count High Risk {tag}",
        f"Count Low Risk {tag}",
        f"Weighted High Risk {tag}",
        f"Mean Neighbor Exposure {tag}",
    ]


def _subject_rows(graph: CallGraph, subjects: Sequence[str]) -> tuple[list[str], np.ndarray]:
    """グラフに存在する対象者とその行番号"""
    present = [s for s in subjects if graph.index_of(s, missing_ok=True) is not None]
    return present, np.asarray([graph.index_of(s) for s in present], dtype=np.int64)


def link_based_features(graph: CallGraph, labels: NodeLabelSet, subjects: Sequence[str]) -> pd.DataFrame:
    """
    1つのモードのLB特徴量（12個）
    グラフに存在しない対象者は行を作らない
    """
    present, rows = _subject_rows(graph, subjects)
    levels = labels.level_array(graph)
    adjacency = graph.adjacency
    columns: dict[str, np.ndarray] = {}
    counts = np.zeros((len(rows), len(LEVELS)))
    weighted = np.zeros((len(rows), len(LEVELS)))
    for c in LEVELS:
        indicator = (levels == c).astype(np.float64)
        counts[:, c] = (adjacency @ indicator)[rows]
        weighted[:, c] = (graph.weights @ indicator)[rows]

    names = link_feature_names(graph.mode.value)
    for c in LEVELS:
        columns[names[c]] = (counts[:, c] > 0).astype(np.float64)
    for c in LEVELS:
        columns[names[len(LEVELS) + c]] = counts[:, c]
    for c in LEVELS[1:]:
        columns[names[2 * len(LEVELS) + c - 1]] = weighted[:, c]
    # 同数の場合は小さいレベルを優先する
    mode_level = np.argmax(counts, axis=1).astype(np.float64) if len(rows) else np.zeros(0)
    has_labeled = counts.sum(axis=1) > 0
    columns[names[-1]] = np.where(has_labeled, mode_level, NO_INFORMATION)

    return pd.DataFrame(columns, index=pd.Index(present, name="subject_id"))[names]


def exposure_link_features(
    graph: CallGraph,
    exposure: ExposureVector,
    relabeling: RiskRelabeling,
    subjects: Sequence[str],
) -> pd.DataFrame:
    """1つの (手法 × 情報源の基準 × モード) の曝露特徴量（6個）"""
    if exposure.node_ids != graph.node_ids:
        raise ValueError("Exposure vector was computed on a different graph")
    present, rows = _subject_rows(graph, subjects)
    high = relabeling.high_risk.astype(np.float64)
    adjacency = graph.adjacency
    degree = graph.degrees.astype(np.float64)[rows]
    count_high = (adjacency @ high)[rows]
    neighbor_exposure = (adjacency @ exposure.scores)[rows]
    mean_neighbor = np.divide(
        neighbor_exposure, degree, out=np.zeros_like(neighbor_exposure), where=degree > 0
    )

    names = exposure_feature_names(
        exposure.method.value, exposure.seed_criterion.label, graph.mode.value
    )
    values = [
        exposure.scores[rows],
        (count_high > 0).astype(np.float64),
        count_high,
        degree - count_high,
        (graph.weights @ high)[rows],
        mean_neighbor,
    ]
    return pd.DataFrame(dict(zip(names, values)), index=pd.Index(present, name="subject_id"))
