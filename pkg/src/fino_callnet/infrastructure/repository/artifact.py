import io
import json
import logging
from typing import Any

import pandas as pd

from fino_callnet.domain.repository.artifact import ArtifactRepository
from fino_callnet.domain.value.artifact_key import ArtifactKey
from fino_callnet.infrastructure.policy.artifact_path import ArtifactPathPolicy
from fino_callnet.interface.port.storage import StoragePort

logger = logging.getLogger(__name__)


class ArtifactRepositoryImpl(ArtifactRepository):
    """
    成果物をストレージに保存する
    - 表は CSV（欠損は空欄）、構造化データは JSON（キー順固定）で書く
    - 同じ内容からは常に同じバイト列ができる
    """

    def __init__(self, storage: StoragePort) -> None:
        self._storage = storage
        self._path_policy = ArtifactPathPolicy

    def _path(self, key: ArtifactKey) -> str:
        return self._path_policy.generate_path(key)

    def exists(self, key: ArtifactKey) -> bool:
        return self._storage.exists(path=self._path(key))

    def describe(self, key: ArtifactKey) -> str:
        return self._storage.describe(self._path(key))

    def save_frame(self, key: ArtifactKey, frame: pd.DataFrame) -> None:
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n")
        self.save_text(key, buffer.getvalue())
        logger.debug("wrote %d rows to %s", len(frame), self.describe(key))

    def load_frame(self, key: ArtifactKey, dtype: dict[str, Any] | None = None) -> pd.DataFrame:
        return pd.read_csv(io.StringIO(self.load_text(key)), dtype=dtype)

    def save_json(self, key: ArtifactKey, data: Any) -> None:
        self.save_text(key, json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")

    def load_json(self, key: ArtifactKey) -> Any:
        return json.loads(self.load_text(key))

    def save_text(self, key: ArtifactKey, text: str) -> None:
        self.save_bytes(key, text.encode("utf-8"))

    def load_text(self, key: ArtifactKey) -> str:
        return self.load_bytes(key).decode("utf-8")

    def save_bytes(self, key: ArtifactKey, data: bytes) -> None:
        self._storage.save(path=self._path(key), file=data)

    def load_bytes(self, key: ArtifactKey) -> bytes:
        return self._storage.load(path=self._path(key))
