"""
ROC曲線・AUC と DeLong 検定
スコアは予測デフォルト確率で、score ≥ t のインスタンスを拒否する
- F0(t): デフォルト顧客のうち拒否される割合（TPR）
- F1(t): 非デフォルト顧客のうち拒否される割合（FPR）
"""

import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.stats import norm, rankdata
from sklearn.metrics import auc as trapezoid_auc
from sklearn.metrics import roc_curve

from fino_callnet.domain.error import DataError
from fino_callnet.domain.value.scored_dataset import ScoredDataset

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]


@dataclass(frozen=True)
class RocCurve:
    """(F1, F0) 平面のROC曲線。点はしきい値の降順（(0, 0) から (1, 1) へ）"""

    f1: FloatArray
    f0: FloatArray
    thresholds: FloatArray
    auc: float


@dataclass(frozen=True)
class DelongResult:
    auc_a: float
    auc_b: float
    auc_diff: float
    variance: float
    z: float
    p_value: float


@dataclass(frozen=True)
class DominationEdge:
    level: float
    winner: str
    loser: str
    p_value: float


def _require_both_classes(y: BoolArray) -> tuple[int, int]:
    n_pos = int(np.count_nonzero(y))
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC analysis needs both defaulters and non-defaulters")
    return n_pos, n_neg


def roc_and_auc(scored: ScoredDataset) -> RocCurve:
    """同じスコアはまとめて1つのしきい値として扱う"""
    _require_both_classes(scored.y)
    f1, f0, thresholds = roc_curve(scored.y, scored.score, drop_intermediate=False)
    return RocCurve(
        f1=np.asarray(f1, dtype=np.float64),
        f0=np.asarray(f0, dtype=np.float64),
        thresholds=np.asarray(thresholds, dtype=np.float64),
        auc=float(trapezoid_auc(f1, f0)),
    )


def structural_components(score: FloatArray, y: BoolArray) -> tuple[FloatArray, FloatArray]:
    """
    DeLong の構造成分（midrank による O(n log n) 計算）
    - V10[i]: デフォルト顧客 i のスコアを下回る非デフォルト顧客の割合（同点は0.5）
    - V01[j]: 非デフォルト顧客 j のスコアを上回るデフォルト顧客の割合（同点は0.5）
    """
    n_pos, n_neg = _require_both_classes(y)
    positives, negatives = score[y], score[~y]
    overall = rankdata(np.concatenate([positives, negatives]))
    within_pos = rankdata(positives)
    within_neg = rankdata(negatives)
    v10 = (overall[:n_pos] - within_pos) / n_neg
    v01 = 1.0 - (overall[n_pos:] - within_neg) / n_pos
    return v10, v01


def structural_components_bruteforce(score: FloatArray, y: BoolArray) -> tuple[FloatArray, FloatArray]:
    """全ペアを比較する O(n²) の計算（検証用）"""
    _require_both_classes(y)
    positives, negatives = score[y], score[~y]
    psi = (positives[:, None] > negatives[None, :]).astype(np.float64)
    psi += 0.5 * (positives[:, None] == negatives[None, :])
    return psi.mean(axis=1), psi.mean(axis=0)


def _delong_from_components(
    components_a: tuple[FloatArray, FloatArray],
    components_b: tuple[FloatArray, FloatArray],
) -> DelongResult:
    v10 = np.vstack([components_a[0], components_b[0]])
    v01 = np.vstack([components_a[1], components_b[1]])
    n_pos, n_neg = v10.shape[1], v01.shape[1]
    aucs = v10.mean(axis=1)
    s10 = np.cov(v10) if n_pos > 1 else np.zeros((2, 2))
    s01 = np.cov(v01) if n_neg > 1 else np.zeros((2, 2))
    covariance = s10 / n_pos + s01 / n_neg
    contrast = np.array([1.0, -1.0])
    variance = float(contrast @ covariance @ contrast)
    diff = float(aucs[0] - aucs[1])
    if variance <= 1e-18:
        z, p_value = 0.0, 1.0
    else:
        z = diff / math.sqrt(variance)
        p_value = float(2.0 * norm.sf(abs(z)))
    return DelongResult(
        auc_a=float(aucs[0]),
        auc_b=float(aucs[1]),
        auc_diff=diff,
        variance=max(variance, 0.0),
        z=z,
        p_value=min(p_value, 1.0),
    )


def delong_test(score_a: FloatArray, score_b: FloatArray, y: BoolArray) -> DelongResult:
    """同じインスタンスに対する2つのスコアのAUCの差の両側検定"""
    if score_a.shape != score_b.shape or score_a.shape != y.shape:
        raise DataError("DeLong test needs paired scores on identical instances")
    if np.array_equal(score_a, score_b):
        components = structural_components(score_a, y)
        auc_value = float(components[0].mean())
        return DelongResult(auc_value, auc_value, 0.0, 0.0, 0.0, 1.0)
    return _delong_from_components(structural_components(score_a, y), structural_components(score_b, y))


def delong_test_bruteforce(score_a: FloatArray, score_b: FloatArray, y: BoolArray) -> DelongResult:
    return _delong_from_components(
        structural_components_bruteforce(score_a, y),
        structural_components_bruteforce(score_b, y),
    )


def domination_edges(
    scores: Mapping[str, FloatArray],
    y: BoolArray,
    levels: Sequence[float] = (0.95, 0.99),
) -> list[DominationEdge]:
    """
    全モデルのペアに DeLong 検定を行い、有意に AUC が大きい側から小さい側への辺を作る
    """
    edges: list[DominationEdge] = []
    for name_a, name_b in itertools.combinations(sorted(scores), 2):
        result = delong_test(scores[name_a], scores[name_b], y)
        if result.auc_diff == 0:
            continue
        winner, loser = (name_a, name_b) if result.auc_diff > 0 else (name_b, name_a)
        for level in levels:
            if result.p_value < 1.0 - level:
                edges.append(DominationEdge(level, winner, loser, result.p_value))
    return edges
