from abc import ABC, abstractmethod


class StoragePort(ABC):
    """パイプラインの成果物を置くストレージ。パスは実行ディレクトリからの相対パス"""

    @abstractmethod
    def exists(self, path: str) -> bool: ...

    @abstractmethod
    def save(self, path: str, file: bytes) -> None: ...

    @abstractmethod
    def load(self, path: str) -> bytes: ...

    @abstractmethod
    def delete(self, path: str) -> None: ...

    @abstractmethod
    def describe(self, path: str) -> str:
        """ログやエラーメッセージ用の実際の場所"""
        ...
