import re
from dataclasses import dataclass

from fino_callnet.domain.model import ValueObject

_SEGMENT = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.=-]*$")


@dataclass(frozen=True, slots=True)
class ArtifactKey(ValueObject):
    """
    パイプラインの成果物の識別子
    - stage: 成果物を作ったステージ（ingest, graph, propagate, ...）
    - timeframe: タイムフレームID。タイムフレームに依存しない成果物は "all"
    """

    run: str
    stage: str
    name: str
    ext: str
    timeframe: str = "all"

    def _validate(self) -> None:
        for label, segment in (
            ("run", self.run),
            ("stage", self.stage),
            ("name", self.name),
            ("ext", self.ext),
            ("timeframe", self.timeframe),
        ):
            if not _SEGMENT.match(segment):
                raise ValueError(f"Invalid artifact {label}: '{segment}'")
