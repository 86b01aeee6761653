from abc import ABC, abstractmethod
from typing import Any

import pandas as pd

from fino_callnet.domain.value.artifact_key import ArtifactKey


class ArtifactRepository(ABC):
    @abstractmethod
    def exists(self, key: ArtifactKey) -> bool: ...
    @abstractmethod
    def describe(self, key: ArtifactKey) -> str: ...
    @abstractmethod
    def save_frame(self, key: ArtifactKey, frame: pd.DataFrame) -> None: ...
    @abstractmethod
    def load_frame(self, key: ArtifactKey, dtype: dict[str, Any] | None = None) -> pd.DataFrame: ...
    @abstractmethod
    def save_json(self, key: ArtifactKey, data: Any) -> None: ...
    @abstractmethod
    def load_json(self, key: ArtifactKey) -> Any: ...
    @abstractmethod
    def save_text(self, key: ArtifactKey, text: str) -> None: ...
    @abstractmethod
    def load_text(self, key: ArtifactKey) -> str: ...
    @abstractmethod
    def save_bytes(self, key: ArtifactKey, data: bytes) -> None: ...
    @abstractmethod
    def load_bytes(self, key: ArtifactKey) -> bytes: ...
