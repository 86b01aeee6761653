from pydantic import BaseModel, Field, field_validator


class LocalStorageConfig(BaseModel):
    """成果物をローカルのディレクトリに置く"""

    base_dir: str = "runs"


class S3StorageConfig(BaseModel):
    """成果物を S3 のバケットに置く"""

    bucket_name: str = Field(min_length=3)
    region: str
    prefix: str | None = None

    @field_validator("prefix", mode="before")
    @classmethod
    def normalize_prefix(cls, v: str | None) -> str:
        if v is None:
            return ""
        return v


StorageConfig = LocalStorageConfig | S3StorageConfig
