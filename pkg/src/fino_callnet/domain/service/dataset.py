"""
モデリング用データセットの組み立てとデータプロトコル
（特徴量の結合・相関による削除・学習/テスト分割・アンダーサンプリング）
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import pandas as pd
from imblearn.under_sampling import RandomUnderSampler
from sklearn.model_selection import train_test_split

from fino_callnet.domain.error import DataError
from fino_callnet.domain.value.feature_group import FeatureGroupEnum
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.split_spec import SplitSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimeframeFeatures:
    """
    1つのタイムフレームで抽出した特徴量
    - blocks: グループごとの DataFrame（index: 対象者ID）。同じグループの複数ブロックは列方向に結合する
    - targets: 対象者ごとの y_Default
    """

    timeframe_id: str
    subjects: Sequence[str]
    targets: Mapping[str, bool]
    blocks: Mapping[FeatureGroupEnum, Sequence[pd.DataFrame]] = field(default_factory=dict)


def assemble(timeframes: Sequence[TimeframeFeatures]) -> tuple[FeatureMatrix, int]:
    """
    タイムフレームごとの特徴量を結合して1つのデータセットにする
    いずれかのグループ・ターゲットが欠けた対象者は除外し、その数を返す
    """
    if not timeframes:
        raise DataError("no timeframes to assemble")

    group_order = [g for g in FeatureGroupEnum if g in timeframes[0].blocks]
    frames: list[pd.DataFrame] = []
    subject_ids: list[str] = []
    timeframe_ids: list[str] = []
    targets: list[bool] = []
    dropped = 0
    columns: list[str] | None = None
    tags: list[FeatureGroupEnum] = []

    for tf in timeframes:
        if [g for g in FeatureGroupEnum if g in tf.blocks] != group_order:
            raise DataError(f"timeframe {tf.timeframe_id} has a different set of feature groups")
        index = pd.Index([s for s in tf.subjects if s in tf.targets], name="subject_id")
        dropped += len(tf.subjects) - len(index)
        combined = pd.DataFrame(index=index)
        tf_tags: list[FeatureGroupEnum] = []
        for group in group_order:
            for block in tf.blocks[group]:
                combined = combined.join(block, how="inner")
                tf_tags.extend([group] * block.shape[1])
        dropped += len(index) - len(combined)

        if columns is None:
            columns, tags = list(combined.columns), tf_tags
        elif list(combined.columns) != columns:
            raise DataError(f"timeframe {tf.timeframe_id} produced different feature columns")

        frames.append(combined)
        subject_ids.extend(str(s) for s in combined.index)
        timeframe_ids.extend([tf.timeframe_id] * len(combined))
        targets.extend(bool(tf.targets[s]) for s in combined.index)
        logger.info(
            "timeframe %s: %d subjects kept of %d", tf.timeframe_id, len(combined), len(tf.subjects)
        )

    if dropped:
        logger.warning("%d subjects dropped for missing feature groups or target", dropped)
    stacked = pd.concat(frames, axis=0, ignore_index=True)
    matrix = FeatureMatrix.from_frame(
        stacked,
        groups=tags,
        subject_ids=subject_ids,
        timeframe_ids=timeframe_ids,
        target=targets,
    )
    return matrix, dropped


def drop_correlated(matrix: FeatureMatrix, threshold: float = 0.95) -> FeatureMatrix:
    """
    固定の列順で貪欲に特徴量を残す。残した特徴量との |ρ| が threshold を超える列は削除
    定数列（相関が定義できない）は最初に削除する
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1]: {threshold}")
    if matrix.n_rows < 2:
        return matrix

    candidates = np.flatnonzero(matrix.values.std(axis=0) > 0)
    n_constant = matrix.n_features - len(candidates)
    kept: list[int] = []
    if len(candidates):
        corr = np.abs(np.atleast_2d(np.corrcoef(matrix.values[:, candidates], rowvar=False)))
        for j in range(len(candidates)):
            if not kept or float(corr[j, kept].max()) <= threshold:
                kept.append(j)

    logger.info(
        "correlation pruning at %.3f: %d constant, %d correlated, %d kept",
        threshold,
        n_constant,
        len(candidates) - len(kept),
        len(kept),
    )
    return matrix.select_columns([int(candidates[j]) for j in kept])


def split_rows(matrix: FeatureMatrix, spec: SplitSpec) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """学習/テストの行番号（それぞれ昇順）"""
    if matrix.n_rows == 0:
        raise DataError("cannot split an empty dataset")
    rows = np.arange(matrix.n_rows)
    try:
        train_rows, test_rows = train_test_split(
            rows,
            train_size=spec.train_fraction,
            random_state=spec.seed,
            stratify=matrix.target if spec.stratified else None,
        )
    except ValueError as e:
        raise DataError(f"cannot split dataset: {e}") from e
    return np.sort(train_rows).astype(np.int64), np.sort(test_rows).astype(np.int64)


def split(matrix: FeatureMatrix, spec: SplitSpec) -> tuple[FeatureMatrix, FeatureMatrix]:
    train_rows, test_rows = split_rows(matrix, spec)
    return matrix.take(train_rows), matrix.take(test_rows)


def undersample(train: FeatureMatrix, target_ratio: float = 1.0, seed: int = 0) -> FeatureMatrix:
    """
    多数派クラスをランダムに間引き、少数派:多数派 = target_ratio にする
    少数派クラスはそのまま残す
    """
    n_positive = int(train.target.sum())
    n_negative = train.n_rows - n_positive
    if n_positive == 0 or n_negative == 0:
        raise DataError("undersampling needs both classes in the training set")
    if not 0.0 < target_ratio <= 1.0:
        raise DataError(f"target ratio must be in (0, 1]: {target_ratio}")
    minority, majority = sorted((n_positive, n_negative))
    if minority / majority > target_ratio:
        raise DataError(
            f"ratio {target_ratio} unreachable: minority:majority is already {minority}:{majority}"
        )

    sampler = RandomUnderSampler(sampling_strategy=target_ratio, random_state=seed)
    sampler.fit_resample(train.values, train.target.astype(np.int64))
    rows = np.sort(np.asarray(sampler.sample_indices_, dtype=np.int64))
    resampled = train.take(rows)
    logger.info(
        "undersampled training set: %d -> %d rows (%d defaulters)",
        train.n_rows,
        resampled.n_rows,
        int(resampled.target.sum()),
    )
    return resampled
