# 公開ドメインオブジェクト
from fino_callnet.domain.error import (
    CallnetError,
    ConvergenceError,
    DataError,
    MissingCutoffError,
    StageError,
)
from fino_callnet.domain.value.emp import EmpParams, EmpReport
from fino_callnet.domain.value.feature_group import MODEL_FEATURE_GROUPS, FeatureGroupEnum
from fino_callnet.domain.value.graph_mode import GraphMode, GraphModeEnum
from fino_callnet.domain.value.scored_dataset import ScoredDataset

# 公開config
from fino_callnet.interface.config.experiment import ExperimentConfig, load_experiment_config
from fino_callnet.interface.config.storage import LocalStorageConfig, S3StorageConfig
from fino_callnet.interface.config.synth import SynthConfig

# 公開クラス
from fino_callnet.public.credit_scoring import CreditScoringPipeline

# 公開UTILITY
from fino_callnet.util.timeframe import Timeframe

__all__ = [
    "CreditScoringPipeline",
    "ExperimentConfig",
    "load_experiment_config",
    "LocalStorageConfig",
    "S3StorageConfig",
    "SynthConfig",
    "CallnetError",
    "ConvergenceError",
    "DataError",
    "MissingCutoffError",
    "StageError",
    "EmpParams",
    "EmpReport",
    "FeatureGroupEnum",
    "MODEL_FEATURE_GROUPS",
    "GraphMode",
    "GraphModeEnum",
    "ScoredDataset",
    "Timeframe",
]
