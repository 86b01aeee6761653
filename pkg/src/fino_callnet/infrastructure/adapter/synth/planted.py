import numpy as np
from scipy.special import expit

from fino_callnet.domain.value.emp import LoanOutcome
from fino_callnet.domain.value.feature_group import FeatureGroupEnum
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.infrastructure.adapter.synth.generator import CREDIT_LIMITS
from fino_callnet.util.seed import stage_rng

PLANTED_FEATURE = "planted"


def planted_feature_matrix(
    n_rows: int = 2000,
    n_noise: int = 30,
    effect: float = 3.0,
    default_rate: float = 0.2,
    seed: int = 0,
    lgd: float = 0.8,
) -> tuple[FeatureMatrix, list[LoanOutcome]]:
    """
    1つだけ情報を持つ特徴量（planted）とノイズ特徴量からなるデータセットと、対応するローンの結果
    デフォルト確率は sigmoid(b + effect·planted)、b はデフォルト率に合わせた近似値
    """
    rng = stage_rng(seed, "planted")
    values = rng.standard_normal((n_rows, n_noise + 1))
    intercept = float(np.log(default_rate / (1.0 - default_rate)))
    target = rng.random(n_rows) < expit(intercept + effect * values[:, 0])
    names = (PLANTED_FEATURE, *(f"noise_{j:02d}" for j in range(1, n_noise + 1)))
    matrix = FeatureMatrix(
        subject_ids=tuple(f"s{i:05d}" for i in range(n_rows)),
        timeframe_ids=("t1",) * n_rows,
        feature_names=names,
        group_tags=(FeatureGroupEnum.SD,) * len(names),
        values=values,
        missing=np.zeros_like(values, dtype=np.bool_),
        target=target,
    )
    limits = rng.choice(CREDIT_LIMITS, size=n_rows)
    drawn = np.round(limits * rng.random(n_rows), 2)
    loans = [
        LoanOutcome.of(float(limit), float(ead) if is_defaulter else 0.0, lgd, bool(is_defaulter))
        for limit, ead, is_defaulter in zip(limits.tolist(), drawn.tolist(), target.tolist())
    ]
    return matrix, loans
