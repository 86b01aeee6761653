from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import kendalltau, spearmanr

from fino_callnet.domain.error import DataError

Ranking = Mapping[str, float] | Sequence[str]


@dataclass(frozen=True)
class RankCorrelation:
    spearman_rho: float
    kendall_tau: float
    goodman_kruskal_gamma: float
    n_items: int


def _as_scores(ranking: Ranking) -> dict[str, float]:
    """順位リストは先頭ほど大きいスコアに変換する"""
    if isinstance(ranking, Mapping):
        return {str(k): float(v) for k, v in ranking.items()}
    return {name: float(len(ranking) - i) for i, name in enumerate(ranking)}


def goodman_kruskal_gamma(a: np.ndarray, b: np.ndarray) -> float:
    """一致ペアと不一致ペアから γ = (C − D) / (C + D)。同順位のペアは数えない"""
    upper = np.triu_indices(len(a), k=1)
    sign = np.sign(a[:, None] - a[None, :])[upper] * np.sign(b[:, None] - b[None, :])[upper]
    concordant = int(np.count_nonzero(sign > 0))
    discordant = int(np.count_nonzero(sign < 0))
    if concordant + discordant == 0:
        return float("nan")
    return (concordant - discordant) / (concordant + discordant)


def rank_correlations(ranking_a: Ranking, ranking_b: Ranking) -> RankCorrelation:
    """
    2つのランキングの Spearman ρ、Kendall τ-b、Goodman–Kruskal γ
    ランキングは 特徴量 → 重要度 の対応、または重要な順の特徴量名のリスト
    """
    scores_a, scores_b = _as_scores(ranking_a), _as_scores(ranking_b)
    if set(scores_a) != set(scores_b):
        raise DataError("rankings must cover the same set of features")
    if len(scores_a) < 2:
        raise DataError("rank correlation needs at least two items")
    names = sorted(scores_a)
    a = np.asarray([scores_a[n] for n in names], dtype=np.float64)
    b = np.asarray([scores_b[n] for n in names], dtype=np.float64)
    rho = spearmanr(a, b).statistic
    tau = kendalltau(a, b, variant="b").statistic
    return RankCorrelation(
        spearman_rho=float(rho),
        kendall_tau=float(tau),
        goodman_kruskal_gamma=goodman_kruskal_gamma(a, b),
        n_items=len(names),
    )
