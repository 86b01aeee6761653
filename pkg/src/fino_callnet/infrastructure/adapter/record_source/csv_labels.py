"""
ホモフィリー検定に使うデフォルトラベルのCSV
- node_id, is_defaulter（1/0 または true/false）
"""

import io
import logging
from collections.abc import Iterable

import pandas as pd

from fino_callnet.domain.error import DataError

logger = logging.getLogger(__name__)

LABEL_COLUMNS = ("node_id", "is_defaulter")

_TRUE = frozenset({"1", "true", "yes"})
_FALSE = frozenset({"0", "false", "no"})


def read_default_labels(lines: Iterable[str], delimiter: str = ",") -> dict[str, bool]:
    text = "\n".join(line.rstrip("\r\n") for line in lines)
    if not text.strip():
        raise DataError("label file is empty")
    frame = pd.read_csv(io.StringIO(text), sep=delimiter, dtype=str, keep_default_na=False)
    missing = [c for c in LABEL_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(f"label file is missing columns: {missing}")

    labels: dict[str, bool] = {}
    # 1行目はヘッダー
    for row, (node_id, flag) in enumerate(zip(frame["node_id"], frame["is_defaulter"], strict=True), start=2):
        node_id, flag = node_id.strip(), flag.strip().lower()
        if not node_id:
            raise DataError("node_id cannot be empty", row=row)
        if node_id in labels:
            raise DataError(f"duplicate node_id: {node_id}", row=row)
        if flag in _TRUE:
            labels[node_id] = True
        elif flag in _FALSE:
            labels[node_id] = False
        else:
            raise DataError(f"invalid is_defaulter '{flag}'", row=row)
    logger.info("read %d labels (%d defaulters)", len(labels), sum(labels.values()))
    return labels
