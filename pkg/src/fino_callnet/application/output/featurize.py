from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class FeaturizeOutput:
    n_rows: int
    n_defaulters: int
    subjects_dropped: int
    features_assembled: dict[str, int]
    """グループ → 結合直後の特徴量数"""
    features_kept: dict[str, int]
    """グループ → 相関による削除後の特徴量数"""
