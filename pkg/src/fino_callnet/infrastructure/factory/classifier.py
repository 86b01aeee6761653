import io
import logging

import joblib

from fino_callnet.infrastructure.adapter.classifier.forest import ForestClassifier
from fino_callnet.infrastructure.adapter.classifier.logistic import LogisticClassifier
from fino_callnet.infrastructure.adapter.classifier.tree import TreeClassifier
from fino_callnet.interface.config.model import ClassifierKind, ModelConfig
from fino_callnet.interface.port.classifier import ClassifierPort

logger = logging.getLogger(__name__)


def create_classifier(config: ModelConfig, seed: int, kind: ClassifierKind | None = None) -> ClassifierPort:
    kind = kind or config.classifier
    logger.debug("creating %s classifier (seed=%d)", kind, seed)
    match kind:
        case "logit":
            return LogisticClassifier(config)
        case "tree":
            return TreeClassifier(config, seed)
        case "forest":
            return ForestClassifier(config, seed)


def dump_classifier(classifier: ClassifierPort) -> bytes:
    """学習済み分類器を joblib 形式のバイト列にする"""
    buffer = io.BytesIO()
    joblib.dump(classifier, buffer)
    return buffer.getvalue()


def load_classifier(data: bytes) -> ClassifierPort:
    classifier = joblib.load(io.BytesIO(data))
    if not isinstance(classifier, (LogisticClassifier, TreeClassifier, ForestClassifier)):
        raise TypeError(f"not a fitted classifier: {type(classifier).__name__}")
    return classifier
