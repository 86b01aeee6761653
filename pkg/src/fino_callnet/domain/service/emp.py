"""
期待最大利益（EMP）と利益の計算

λ（b0）ごとの分類利益 P(t; λ) = λ·π0·F0(t) − ROI·π1·F1(t) を最適なしきい値で最大化し、
λ の分布 h で期待値を取る。h は λ=0 の質量 p0、λ=LGD の質量 p1、(0, LGD) 上の一様分布からなる
最適な点は常にROC凸包の頂点なので、凸包の各辺について「その辺を進むと得になる λ」を求め、
λ の区間ごとに閉形式で積分する
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from decimal import Decimal

import numpy as np
import numpy.typing as npt

from fino_callnet.domain.error import DataError
from fino_callnet.domain.service.roc import roc_and_auc
from fino_callnet.domain.value.emp import EmpParams, LambdaDistribution, LoanOutcome
from fino_callnet.domain.value.scored_dataset import ScoredDataset

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class EmpResult:
    emp: float
    emp_fraction: float
    params: EmpParams


def roc_convex_hull(f1: FloatArray, f0: FloatArray) -> tuple[FloatArray, FloatArray]:
    """(0,0) から (1,1) までのROC上側凸包（モノトーンチェーン）"""
    points = sorted(set(zip(f1.tolist(), f0.tolist())) | {(0.0, 0.0), (1.0, 1.0)})
    hull: list[tuple[float, float]] = []
    for point in points:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            cross = (ax - ox) * (point[1] - oy) - (ay - oy) * (point[0] - ox)
            if cross < 0:
                break
            hull.pop()
        hull.append(point)
    xs, ys = zip(*hull)
    return np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64)


def _switch_lambdas(hull_f1: FloatArray, hull_f0: FloatArray, params: EmpParams) -> FloatArray:
    """凸包の辺 k（頂点 k → k+1）に進むことが得になる最小の λ"""
    d_f1 = np.diff(hull_f1)
    d_f0 = np.diff(hull_f0)
    with np.errstate(divide="ignore", invalid="ignore"):
        switch = params.roi * params.pi1 * d_f1 / (params.pi0 * d_f0)
    switch[d_f1 == 0] = 0.0
    switch[(d_f0 == 0) & (d_f1 > 0)] = np.inf
    return switch


def _priors_from(scored: ScoredDataset, params: EmpParams) -> EmpParams:
    if not scored.has_both_classes:
        raise DataError("EMP needs both defaulters and non-defaulters")
    return params.with_priors(scored.n_defaulters / scored.n_instances)


def emp(scored: ScoredDataset, params: EmpParams) -> EmpResult:
    """
    EMP（総与信額に対する割合）と拒否すべき割合 η̄
    π0, π1 は scored のクラス比率を使う
    """
    params = _priors_from(scored, params)
    curve = roc_and_auc(scored)
    hull_f1, hull_f0 = roc_convex_hull(curve.f1, curve.f0)
    if len(hull_f1) < 2:
        raise DataError("ROC convex hull is empty")
    switch = _switch_lambdas(hull_f1, hull_f0, params)
    pi0, pi1, roi, lgd = params.pi0, params.pi1, params.roi, params.lgd

    def vertex_at(value: float) -> int:
        # 辺 k は λ ≥ switch[k] で採用する
        return int(np.searchsorted(switch, value, side="right"))

    def profit(vertex: int, value: float) -> float:
        return value * pi0 * hull_f0[vertex] - roi * pi1 * hull_f1[vertex]

    def rejected(vertex: int) -> float:
        return pi0 * hull_f0[vertex] + pi1 * hull_f1[vertex]

    v0, v1 = vertex_at(0.0), vertex_at(lgd)
    total = params.p0 * profit(v0, 0.0) + params.p1 * profit(v1, lgd)
    fraction = params.p0 * rejected(v0) + params.p1 * rejected(v1)

    density = params.uniform_mass / lgd
    if density > 0:
        bounds = np.concatenate([[0.0], np.clip(switch, 0.0, lgd), [lgd]])
        for vertex in range(len(hull_f1)):
            a, b = bounds[vertex], bounds[vertex + 1]
            if b <= a:
                continue
            total += density * (
                pi0 * hull_f0[vertex] * (b * b - a * a) / 2.0 - roi * pi1 * hull_f1[vertex] * (b - a)
            )
            fraction += density * rejected(vertex) * (b - a)

    logger.debug("EMP %.6f, fraction %.4f over %d hull vertices", total, fraction, len(hull_f1))
    return EmpResult(emp=float(total), emp_fraction=float(min(max(fraction, 0.0), 1.0)), params=params)


def emp_oracle(
    scored: ScoredDataset, params: EmpParams, grid_size: int = 10_000, chunk: int = 500
) -> EmpResult:
    """
    λ の格子（中点則）と全しきい値の総当たりによる EMP（emp の検証用）
    """
    if grid_size < 1_000:
        raise ValueError(f"grid_size must be at least 1000: {grid_size}")
    params = _priors_from(scored, params)
    curve = roc_and_auc(scored)
    f0 = np.concatenate([[0.0], curve.f0])
    f1 = np.concatenate([[0.0], curve.f1])
    pi0, pi1, roi, lgd = params.pi0, params.pi1, params.roi, params.lgd

    def best(values: FloatArray) -> tuple[FloatArray, FloatArray]:
        profits = values[:, None] * pi0 * f0[None, :] - roi * pi1 * f1[None, :]
        index = np.argmax(profits, axis=1)
        return profits[np.arange(len(values)), index], pi0 * f0[index] + pi1 * f1[index]

    width = lgd / grid_size
    grid = (np.arange(grid_size) + 0.5) * width
    total, fraction = 0.0, 0.0
    for start in range(0, grid_size, chunk):
        profits, rejected = best(grid[start : start + chunk])
        total += float(profits.sum()) * width
        fraction += float(rejected.sum()) * width
    density = params.uniform_mass / lgd
    total *= density
    fraction *= density

    ends_profit, ends_rejected = best(np.array([0.0, lgd]))
    total += params.p0 * float(ends_profit[0]) + params.p1 * float(ends_profit[1])
    fraction += params.p0 * float(ends_rejected[0]) + params.p1 * float(ends_rejected[1])
    return EmpResult(emp=total, emp_fraction=min(max(fraction, 0.0), 1.0), params=params)


def fraction_to_cutoff(scores: FloatArray, emp_fraction: float) -> float:
    """
    テストセットで score ≥ cutoff となる割合が η̄ に最も近いカットオフ
    η̄ = 0 の場合は最大スコアより大きい値を返す
    """
    if not 0.0 <= emp_fraction <= 1.0:
        raise ValueError(f"emp_fraction must be in [0, 1]: {emp_fraction}")
    if scores.size == 0:
        raise DataError("cannot derive a cutoff from an empty score vector")
    unique = np.unique(scores)[::-1]
    rejected = np.searchsorted(np.sort(scores), unique, side="left")
    rejected_fraction = (scores.size - rejected) / scores.size
    candidates = np.concatenate([[0.0], rejected_fraction])
    cutoffs = np.concatenate([[np.nextafter(unique[0], np.inf)], unique])
    # 同じ距離なら拒否が少ない方
    best = int(np.argmin(np.abs(candidates - emp_fraction)))
    return float(cutoffs[best])


def _check_aligned(scored: ScoredDataset, loans: Sequence[LoanOutcome]) -> None:
    if len(loans) != scored.n_instances:
        raise DataError(f"{len(loans)} loans for {scored.n_instances} scored instances")
    for i, (loan, is_defaulter) in enumerate(zip(loans, scored.y)):
        if loan.is_defaulter != bool(is_defaulter):
            raise DataError("loan outcome does not match the scored label", row=i)


def profit_of_decisions(rejected: npt.NDArray[np.bool_], loans: Sequence[LoanOutcome], roi: float) -> Decimal:
    """
    与信判断ごとの利益の合計
    - 承認した非デフォルト: +ROI·A、拒否した非デフォルト: −ROI·A
    - 承認したデフォルト: −LGD·EAD、拒否したデフォルト: 0
    """
    rate = Decimal(str(roi))
    total = Decimal(0)
    for is_rejected, loan in zip(rejected.tolist(), loans):
        if loan.is_defaulter:
            if not is_rejected:
                total -= loan.lgd * loan.ead
        elif is_rejected:
            total -= rate * loan.principal
        else:
            total += rate * loan.principal
    return total


def model_profit(
    scored: ScoredDataset, loans: Sequence[LoanOutcome], params: EmpParams, cutoff: float
) -> Decimal:
    _check_aligned(scored, loans)
    return profit_of_decisions(scored.score >= cutoff, loans, params.roi)


def no_model_profit(scored: ScoredDataset, loans: Sequence[LoanOutcome], params: EmpParams) -> Decimal:
    """全員を承認した場合の利益"""
    _check_aligned(scored, loans)
    return profit_of_decisions(np.zeros(scored.n_instances, dtype=np.bool_), loans, params.roi)


def estimate_lambda_distribution(
    loans: Sequence[LoanOutcome], lgd: float, bins: int = 20
) -> LambdaDistribution:
    """
    デフォルト顧客の λ = LGD·EAD/A から p0（λ=0 の割合）と p1（λ ≥ LGD、全額利用の割合）を推定する
    """
    lambdas = np.asarray([loan.lost_fraction for loan in loans if loan.is_defaulter], dtype=np.float64)
    counts, edges = np.histogram(lambdas, bins=bins, range=(0.0, lgd))
    if lambdas.size == 0:
        logger.warning("no defaulters to estimate the lambda distribution; using p0 = p1 = 0")
        return LambdaDistribution(0.0, 0.0, lgd, edges, counts.astype(np.int64), 0)
    p0 = float(np.mean(lambdas <= 0.0))
    p1 = float(np.mean(lambdas >= lgd * (1.0 - 1e-12)))
    return LambdaDistribution(
        p0=p0,
        p1=p1,
        lgd=lgd,
        bin_edges=edges,
        counts=counts.astype(np.int64),
        n_defaulters=int(lambdas.size),
    )
