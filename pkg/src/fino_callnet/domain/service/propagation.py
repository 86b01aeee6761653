"""
延滞顧客を情報源とした影響伝播

- Personalized PageRank: ξ_{k+1} = α W̃ ξ_k + (1-α) z
  W̃ は重み行列を列正規化した確率行列。出次数0の列（dangling）の質量は z に戻す
- Spreading Activation: 活性ノードはエネルギーの (1-d) を保持し、
  d をリンク重みに比例して近傍へ渡す。総エネルギーは常に一定
"""

import logging
from collections.abc import Callable
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy import sparse

from fino_callnet.domain.entity.call_graph import CallGraph
from fino_callnet.domain.error import ConvergenceError, DataError, MissingCutoffError
from fino_callnet.domain.value.exposure import (
    ExposureVector,
    PropagationMethod,
    RiskRelabeling,
    SeedCriterion,
)
from fino_callnet.domain.value.node_labels import NodeLabelSet
from fino_callnet.interface.config.propagation import PropagationConfig

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
IterationHook = Callable[[int, FloatArray], None]


def _norm(vector: FloatArray, kind: Literal["l1", "linf"]) -> float:
    if vector.size == 0:
        return 0.0
    if kind == "l1":
        return float(np.abs(vector).sum())
    return float(np.abs(vector).max())


def restart_vector(labels: NodeLabelSet, graph: CallGraph, criterion: SeedCriterion) -> FloatArray:
    """基準を満たす延滞顧客に一様な質量を置いた再出発ベクトル z"""
    return labels.seed_mask(graph, criterion.value).astype(np.float64)


def seed_energy(
    labels: NodeLabelSet,
    graph: CallGraph,
    criterion: SeedCriterion,
    severity_weighted: bool = False,
) -> FloatArray:
    """SPAの初期エネルギー。severity_weighted の場合は延滞回数をエネルギーにする"""
    levels = labels.level_array(graph)
    mask = levels >= criterion.value
    if severity_weighted:
        return np.where(mask, levels, 0).astype(np.float64)
    return mask.astype(np.float64)


def column_stochastic(graph: CallGraph) -> tuple[sparse.csr_array, npt.NDArray[np.bool_]]:
    """列正規化した W̃ と dangling 列のマスク"""
    column_sums = np.asarray(graph.weights.sum(axis=0)).ravel()
    dangling = column_sums == 0
    inverse = np.zeros_like(column_sums)
    inverse[~dangling] = 1.0 / column_sums[~dangling]
    normalized = sparse.csr_array(graph.weights @ sparse.diags_array(inverse))
    return normalized, dangling


def personalized_pagerank(
    graph: CallGraph,
    restart: FloatArray,
    config: PropagationConfig,
    criterion: SeedCriterion = SeedCriterion.GE1,
) -> ExposureVector:
    if restart.shape != (graph.n_nodes,):
        raise DataError(f"restart vector length {restart.shape} != n_nodes {graph.n_nodes}")
    if np.any(restart < 0):
        raise DataError("restart vector cannot have negative entries")
    mass = float(restart.sum())
    if mass <= 0:
        raise DataError("restart vector must have at least one positive entry")

    z = restart / mass
    transition, dangling = column_stochastic(graph)
    alpha = config.alpha
    scores = z.copy()
    residual = float("inf")
    for iteration in range(1, config.max_iterations + 1):
        leaked = float(scores[dangling].sum())
        updated = alpha * (transition @ scores) + (alpha * leaked + (1.0 - alpha)) * z
        residual = _norm(updated - scores, config.pr_norm)
        scores = updated
        if residual <= config.tolerance:
            logger.debug(
                "PR converged on %s/%s after %d iterations (residual %.3e)",
                graph.timeframe_id,
                graph.mode.value,
                iteration,
                residual,
            )
            return ExposureVector(
                node_ids=graph.node_ids,
                scores=scores,
                method=PropagationMethod.PR,
                seed_criterion=criterion,
                iterations_run=iteration,
                residual=residual,
            )
    raise ConvergenceError(
        f"Personalized PageRank did not converge on {graph.timeframe_id}/{graph.mode.value}",
        iterations=config.max_iterations,
        residual=residual,
    )


def solve_pagerank_dense(graph: CallGraph, restart: FloatArray, alpha: float) -> FloatArray:
    """
    (I - αW̃)ξ = (1-α)z を密行列で直接解く（小規模グラフの検証用）
    dangling 列は z に置き換えた行列で解くので、反復解と同じ不動点になる
    """
    z = restart / float(restart.sum())
    transition, dangling = column_stochastic(graph)
    dense = transition.toarray()
    dense[:, dangling] = z[:, None]
    system = np.eye(graph.n_nodes) - alpha * dense
    return np.linalg.solve(system, (1.0 - alpha) * z)


def spreading_activation(
    graph: CallGraph,
    energy: FloatArray,
    config: PropagationConfig,
    criterion: SeedCriterion = SeedCriterion.GE1,
    on_iteration: IterationHook | None = None,
) -> ExposureVector:
    """
    活性ノード（エネルギーが tolerance を超えるノード）が拡散を行う
    新たに活性化するノードがなく、エネルギー変化が tolerance 未満になった時点で終了する
    """
    if energy.shape != (graph.n_nodes,):
        raise DataError(f"energy vector length {energy.shape} != n_nodes {graph.n_nodes}")
    if np.any(energy < 0):
        raise DataError("seed energy cannot be negative")
    if not np.any(energy > 0):
        raise DataError("spreading activation needs at least one seed with positive energy")

    strength = np.asarray(graph.weights.sum(axis=1)).ravel()
    has_edges = strength > 0
    inverse = np.zeros_like(strength)
    inverse[has_edges] = 1.0 / strength[has_edges]
    # 転送行列の転置: received = Tᵀ · spread、T の各行は重みの比率
    transfer_t = sparse.csr_array((sparse.diags_array(inverse) @ graph.weights).T)

    d = config.d
    current = energy.astype(np.float64, copy=True)
    change = float("inf")
    iteration = 0
    for iteration in range(1, config.max_iterations + 1):
        affected = current > config.tolerance
        spread = np.where(affected & has_edges, d * current, 0.0)
        updated = current - spread + transfer_t @ spread
        change = _norm(updated - current, config.spa_norm)
        newly_affected = bool(np.any((updated > config.tolerance) & ~affected))
        current = updated
        if on_iteration is not None:
            on_iteration(iteration, current)
        if not newly_affected and change < config.tolerance:
            break
    else:
        logger.warning(
            "SPA on %s/%s stopped at max_iterations=%d (change %.3e)",
            graph.timeframe_id,
            graph.mode.value,
            config.max_iterations,
            change,
        )

    return ExposureVector(
        node_ids=graph.node_ids,
        scores=np.clip(current, 0.0, None),
        method=PropagationMethod.SPA,
        seed_criterion=criterion,
        iterations_run=iteration,
        residual=change,
    )


def exposure_cutoff(exposure: ExposureVector, labels: NodeLabelSet) -> float:
    """3回以上延滞した顧客の最小曝露スコア"""
    index = {node_id: i for i, node_id in enumerate(exposure.node_ids)}
    flagged = [
        index[node_id]
        for node_id, level in labels.delinquency_level.items()
        if level >= SeedCriterion.GE3.value and node_id in index
    ]
    if not flagged:
        raise MissingCutoffError(
            "no delinquent customer with at least three late payments in the graph; "
            "supply an explicit exposure cutoff"
        )
    return float(exposure.scores[flagged].min())


def relabel_high_risk(exposure: ExposureVector, cutoff: float) -> RiskRelabeling:
    relabeling = RiskRelabeling(cutoff=cutoff, high_risk=exposure.scores >= cutoff)
    logger.debug(
        "%s/%s: %d high-risk nodes at cutoff %.6g",
        exposure.method.value,
        exposure.seed_criterion.label,
        relabeling.n_high_risk,
        cutoff,
    )
    return relabeling
