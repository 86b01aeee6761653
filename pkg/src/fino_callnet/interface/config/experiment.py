"""
実験設定

設定ファイル（TOML / YAML / JSON）は dynaconf で読み、環境変数 FINO_CALLNET_<KEY> で上書きできる
（入れ子は FINO_CALLNET_MODEL__N_TREES=100 のように __ でつなぐ）
"""

import logging
from collections.abc import Mapping
from datetime import date
from pathlib import Path
from typing import Any, Literal, Self

from dynaconf import Dynaconf
from pydantic import BaseModel, Field, field_validator, model_validator

from fino_callnet.domain.error import DataError
from fino_callnet.domain.value.feature_group import MODEL_FEATURE_GROUPS, FeatureGroupEnum
from fino_callnet.interface.config.emp import EmpConfig
from fino_callnet.interface.config.feature import FeatureConfig
from fino_callnet.interface.config.graph import GraphConfig
from fino_callnet.interface.config.ingest import IngestConfig
from fino_callnet.interface.config.model import ClassifierKind, ModelConfig
from fino_callnet.interface.config.propagation import PropagationConfig
from fino_callnet.interface.config.storage import LocalStorageConfig, S3StorageConfig
from fino_callnet.interface.config.synth import SynthConfig
from fino_callnet.util.timeframe import Timeframe

logger = logging.getLogger(__name__)

ENVVAR_PREFIX = "FINO_CALLNET"
WINDOW_TIMEFRAME_ID = "w1"


class InputPaths(BaseModel):
    """入力ファイルのパス"""

    calls: str = "data/calls.csv"
    accounts: str = "data/accounts.csv"
    transactions: str = "data/transactions.csv"
    card_activity: str = "data/card_activity.csv"

    def as_dict(self) -> dict[str, str]:
        return self.model_dump()

    def missing(self) -> list[str]:
        return [path for path in self.as_dict().values() if not Path(path).is_file()]


class TimeframeConfig(BaseModel):
    """
    連続する n_timeframes 個のタイムフレーム（最初の対象者がカードを受け取った月から）
    - window: 暦月単位の期間 [start, end] を1つだけ使う（指定時は他の項目より優先）
    """

    first_card_year: int = Field(ge=1900, le=2100, default=2017)
    first_card_month: int = Field(ge=1, le=12, default=4)
    n_timeframes: int = Field(ge=1, le=12, default=3)
    lookback_months: int = Field(ge=1, le=24, default=3)
    window: tuple[date, date] | None = None

    @field_validator("window")
    @classmethod
    def validate_window(cls, value: tuple[date, date] | None) -> tuple[date, date] | None:
        if value is not None:
            _ = Timeframe.from_window(WINDOW_TIMEFRAME_ID, *value)
        return value

    def timeframes(self) -> list[Timeframe]:
        if self.window is not None:
            return [Timeframe.from_window(WINDOW_TIMEFRAME_ID, *self.window)]
        frames = Timeframe.consecutive(self.first_card_year, self.first_card_month, self.n_timeframes)
        return [frame.model_copy(update={"lookback_months": self.lookback_months}) for frame in frames]


class NetstatsConfig(BaseModel):
    """
    ホモフィリー検定の設定
    - permutations: ラベルを並べ替えた帰無分布の回数（0 で計算しない）
    - labels: デフォルトラベルの CSV（node_id, is_defaulter）。None なら銀行データのラベル
    """

    permutations: int = Field(ge=0, default=200)
    labels: str | None = None


ImportanceKind = Literal["profit", "accuracy"]


class ImportanceConfig(BaseModel):
    """
    特徴量重要度の設定
    - model_id: 重要度を計算するモデル ID（フォレストで学習する）
    - kinds: 計算する重要度（accuracy には木の所属による重要度も含む）
    - top_k: 人が読む表に載せる件数（CSV には全件）
    """

    model_id: str = "H"
    kinds: tuple[ImportanceKind, ...] = ("profit", "accuracy")
    top_k: int = Field(ge=1, default=20)
    permutation_repeats: int = Field(ge=1, default=5)

    @field_validator("kinds", mode="before")
    @classmethod
    def split_kinds(cls, value: object) -> object:
        if isinstance(value, str):
            return tuple(part.strip().lower() for part in value.split(",") if part.strip())
        return value

    @field_validator("kinds")
    @classmethod
    def validate_kinds(cls, value: tuple[ImportanceKind, ...]) -> tuple[ImportanceKind, ...]:
        if not value:
            raise ValueError("At least one importance kind is required")
        return tuple(dict.fromkeys(value))


class CompareConfig(BaseModel):
    """
    モデル比較の設定
    - delong: False なら AUC の表だけを書き、検定と支配グラフは作らない
    """

    delong: bool = True


class ExperimentConfig(BaseModel):
    run_id: str = Field(min_length=1, default="run")
    seed: int = Field(ge=0, default=0)
    inputs: InputPaths = InputPaths()
    synth: SynthConfig | None = None
    storage: LocalStorageConfig | S3StorageConfig = LocalStorageConfig()
    timeframe: TimeframeConfig = TimeframeConfig()
    ingest: IngestConfig = IngestConfig()
    graph: GraphConfig = GraphConfig()
    propagation: PropagationConfig = PropagationConfig()
    feature: FeatureConfig = FeatureConfig()
    model: ModelConfig = ModelConfig()
    emp: EmpConfig = EmpConfig()
    netstats: NetstatsConfig = NetstatsConfig()
    importance: ImportanceConfig = ImportanceConfig()
    compare: CompareConfig = CompareConfig()
    model_ids: tuple[str, ...] = tuple(MODEL_FEATURE_GROUPS)
    classifiers: tuple[ClassifierKind, ...] = ("forest",)
    domination_levels: tuple[float, ...] = (0.95, 0.99)

    @field_validator("model_ids", "classifiers", mode="before")
    @classmethod
    def split_list(cls, value: object) -> object:
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(",") if part.strip())
        return value

    @field_validator("model_ids")
    @classmethod
    def validate_model_ids(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        upper = tuple(v.upper() for v in value)
        unknown = [v for v in upper if v not in MODEL_FEATURE_GROUPS]
        if unknown:
            raise ValueError(f"Unknown model IDs {unknown}; expected a subset of {sorted(MODEL_FEATURE_GROUPS)}")
        if not upper:
            raise ValueError("At least one model ID is required")
        return upper

    @model_validator(mode="after")
    def validate_experiment(self) -> Self:
        if self.importance.model_id.upper() not in MODEL_FEATURE_GROUPS:
            raise ValueError(f"Unknown importance model ID: {self.importance.model_id}")
        if not self.classifiers:
            raise ValueError("At least one classifier is required")
        for level in self.domination_levels:
            if not 0.0 < level < 1.0:
                raise ValueError(f"Confidence level must be in (0, 1): {level}")
        if self.synth is not None:
            synth_frames = (
                self.synth.first_card_year,
                self.synth.first_card_month,
                self.synth.n_timeframes,
                self.synth.months,
            )
            frames = (
                self.timeframe.first_card_year,
                self.timeframe.first_card_month,
                self.timeframe.n_timeframes,
                self.timeframe.lookback_months,
            )
            if synth_frames != frames:
                raise ValueError("synth timeframes must match the experiment timeframe section")
        return self

    @property
    def model_feature_groups(self) -> dict[str, tuple[FeatureGroupEnum, ...]]:
        """要求されたモデル ID → 特徴量グループ"""
        return {model_id: MODEL_FEATURE_GROUPS[model_id] for model_id in self.model_ids}

    @property
    def required_groups(self) -> tuple[FeatureGroupEnum, ...]:
        """どれかのモデル（重要度のモデルを含む）が使う特徴量グループ"""
        wanted = {g for groups in self.model_feature_groups.values() for g in groups}
        wanted.update(MODEL_FEATURE_GROUPS[self.importance.model_id.upper()])
        return tuple(g for g in FeatureGroupEnum if g in wanted)

    @property
    def feature_groups(self) -> tuple[FeatureGroupEnum, ...]:
        """featurize で作るグループ。feature.groups の指定がなければ required_groups"""
        if self.feature.groups is None:
            return self.required_groups
        return tuple(g for g in FeatureGroupEnum if g in self.feature.groups)

    def check_inputs(self) -> None:
        """入力ファイルの存在確認。合成データを生成する設定なら確認しない"""
        if self.synth is not None:
            return
        missing = self.inputs.missing()
        if missing:
            raise DataError(f"input file not found: {', '.join(missing)}")


def _lower_keys(data: Mapping[str, Any]) -> dict[str, Any]:
    return {
        str(key).lower(): _lower_keys(value) if isinstance(value, Mapping) else value
        for key, value in data.items()
    }


def _merge(base: dict[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _merge(dict(merged[key]), value)
        else:
            merged[key] = value
    return merged


def load_experiment_config(
    path: str | None = None, overrides: Mapping[str, Any] | None = None
) -> ExperimentConfig:
    """
    設定ファイル → 環境変数 → overrides（CLI のフラグ）の順に上書きして ExperimentConfig を作る
    """
    settings_files = [path] if path else []
    if path and not Path(path).is_file():
        raise FileNotFoundError(f"Experiment config not found: {path}")
    settings = Dynaconf(
        settings_files=settings_files,
        envvar_prefix=ENVVAR_PREFIX,
        environments=False,
        load_dotenv=False,
    )
    data = _lower_keys(settings.as_dict())
    data = _merge(data, _lower_keys(overrides or {}))
    config = ExperimentConfig.model_validate(data)
    logger.debug("loaded experiment config %s (run_id=%s, seed=%d)", path or "<defaults>", config.run_id, config.seed)
    return config
