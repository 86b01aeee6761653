from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import pandas as pd

from fino_callnet.domain.model import ValueObject
from fino_callnet.domain.value.feature_group import FeatureGroupEnum


@dataclass(frozen=True, slots=True, eq=False)
class FeatureMatrix(ValueObject):
    """
    モデリング用データセット（対象者 × 特徴量）
    - values は欠損を0埋めした値、missing が欠損位置を保持する
    - 同じ対象者が複数のタイムフレームに現れる場合は別の行として扱う
    """

    subject_ids: tuple[str, ...]
    timeframe_ids: tuple[str, ...]
    feature_names: tuple[str, ...]
    group_tags: tuple[FeatureGroupEnum, ...]
    values: npt.NDArray[np.float64]
    missing: npt.NDArray[np.bool_]
    target: npt.NDArray[np.bool_]

    def _validate(self) -> None:
        n_rows, n_cols = len(self.subject_ids), len(self.feature_names)
        if len(self.timeframe_ids) != n_rows:
            raise ValueError("timeframe_ids must align with subject_ids")
        if len(self.group_tags) != n_cols:
            raise ValueError("Every feature needs exactly one group tag")
        duplicated = [name for name, count in Counter(self.feature_names).items() if count > 1]
        if duplicated:
            raise ValueError(f"Duplicate feature names: {duplicated[:5]}")
        if self.values.shape != (n_rows, n_cols) or self.missing.shape != (n_rows, n_cols):
            raise ValueError(f"values/missing shape must be ({n_rows}, {n_cols})")
        if self.target.shape != (n_rows,):
            raise ValueError("target must have one entry per row")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Feature values must be finite; encode missing values in the mask")

    @classmethod
    def from_frame(
        cls,
        frame: pd.DataFrame,
        groups: Sequence[FeatureGroupEnum],
        subject_ids: Sequence[str],
        timeframe_ids: Sequence[str],
        target: Iterable[bool],
    ) -> "FeatureMatrix":
        """NaN を欠損として扱い、0埋めした行列を作る"""
        raw = frame.to_numpy(dtype=np.float64)
        missing = ~np.isfinite(raw)
        return cls(
            subject_ids=tuple(subject_ids),
            timeframe_ids=tuple(timeframe_ids),
            feature_names=tuple(str(c) for c in frame.columns),
            group_tags=tuple(groups),
            values=np.where(missing, 0.0, raw),
            missing=missing,
            target=np.fromiter(target, dtype=np.bool_, count=len(subject_ids)),
        )

    @property
    def n_rows(self) -> int:
        return len(self.subject_ids)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def default_rate(self) -> float:
        return float(self.target.mean()) if self.n_rows else 0.0

    def group_sizes(self) -> dict[FeatureGroupEnum, int]:
        counts = Counter(self.group_tags)
        return {group: counts.get(group, 0) for group in FeatureGroupEnum}

    def select_columns(self, columns: Sequence[int]) -> "FeatureMatrix":
        index = list(columns)
        return FeatureMatrix(
            subject_ids=self.subject_ids,
            timeframe_ids=self.timeframe_ids,
            feature_names=tuple(self.feature_names[i] for i in index),
            group_tags=tuple(self.group_tags[i] for i in index),
            values=self.values[:, index],
            missing=self.missing[:, index],
            target=self.target,
        )

    def select_groups(self, groups: Iterable[FeatureGroupEnum]) -> "FeatureMatrix":
        wanted = set(groups)
        return self.select_columns([i for i, g in enumerate(self.group_tags) if g in wanted])

    def take(self, rows: Sequence[int] | npt.NDArray[np.int64]) -> "FeatureMatrix":
        index = np.asarray(rows, dtype=np.int64)
        return FeatureMatrix(
            subject_ids=tuple(self.subject_ids[i] for i in index),
            timeframe_ids=tuple(self.timeframe_ids[i] for i in index),
            feature_names=self.feature_names,
            group_tags=self.group_tags,
            values=self.values[index],
            missing=self.missing[index],
            target=self.target[index],
        )

    def to_frame(self, with_missing: bool = True) -> pd.DataFrame:
        """欠損を NaN に戻した DataFrame。列名は name:group"""
        data = np.where(self.missing, np.nan, self.values) if with_missing else self.values
        columns = [f"{n}:{g.value}" for n, g in zip(self.feature_names, self.group_tags)]
        frame = pd.DataFrame(data, columns=columns)
        frame.insert(0, "timeframe_id", list(self.timeframe_ids))
        frame.insert(0, "subject_id", list(self.subject_ids))
        frame["y_default"] = self.target.astype(np.int64)
        return frame

    @classmethod
    def from_table(cls, frame: pd.DataFrame) -> "FeatureMatrix":
        """to_frame の出力（列名 name:group、空欄は欠損）から復元する"""
        feature_columns = [c for c in frame.columns if c not in ("subject_id", "timeframe_id", "y_default")]
        names: list[str] = []
        groups: list[FeatureGroupEnum] = []
        for column in feature_columns:
            name, _, group = str(column).rpartition(":")
            if not name:
                raise ValueError(f"Feature column must be named 'name:group': {column}")
            names.append(name)
            groups.append(FeatureGroupEnum(group))
        features = frame[feature_columns].set_axis(names, axis=1).astype(np.float64)
        return cls.from_frame(
            features,
            groups,
            subject_ids=frame["subject_id"].astype(str).tolist(),
            timeframe_ids=frame["timeframe_id"].astype(str).tolist(),
            target=(frame["y_default"].astype(np.int64) == 1).tolist(),
        )


@dataclass(frozen=True, slots=True, eq=False)
class BinProfile(ValueObject):
    """
    曜日ビン（月〜日の7個）ごとの取引の割合
    - p: 各ビンの割合 p_ij（取引がなければ全て0）
    - M: 空でないビンの数
    - f: 上位 k ビンに入る割合
    """

    p: npt.NDArray[np.float64]
    M: int
    f: float
    k: int = 3

    def _validate(self) -> None:
        if self.p.shape != (7,):
            raise ValueError("BinProfile needs exactly 7 weekday bins")
        if not 0.0 <= self.f <= 1.0 + 1e-12:
            raise ValueError(f"Top-k fraction out of range: {self.f}")
        if self.M and abs(float(self.p.sum()) - 1.0) > 1e-9:
            raise ValueError("Bin fractions must sum to 1")

    @classmethod
    def from_bins(cls, bins: Sequence[float] | npt.NDArray[np.float64], k: int = 3) -> "BinProfile":
        weights = np.asarray(bins, dtype=np.float64)
        if weights.shape != (7,) or np.any(weights < 0):
            raise ValueError("bins must be 7 non-negative weekday totals")
        total = float(weights.sum())
        if total == 0:
            return cls(p=np.zeros(7), M=0, f=0.0, k=k)
        p = weights / total
        # 同値のビンは曜日の番号順（安定ソート）
        top = np.argsort(-p, kind="stable")[:k]
        return cls(p=p, M=int(np.count_nonzero(p)), f=float(p[top].sum()), k=k)

    @property
    def is_empty(self) -> bool:
        return self.M == 0
