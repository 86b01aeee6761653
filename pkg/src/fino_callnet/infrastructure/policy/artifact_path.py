from dataclasses import dataclass

from fino_callnet.domain.value.artifact_key import ArtifactKey


@dataclass(frozen=True, slots=True)
class ArtifactPathPolicy:
    """成果物のパスを生成するポリシー: <run>/<stage>/<timeframe>/<name>.<ext>"""

    @staticmethod
    def generate_path(key: ArtifactKey) -> str:
        return f"{key.run}/{key.stage}/{key.timeframe}/{key.name}.{key.ext}"
