from pydantic import BaseModel, Field, field_validator


class IngestConfig(BaseModel):
    """
    CDR・銀行データの取り込み設定
    - min_duration: これより短い通話（秒）は除外する
    - has_header: None の場合は先頭行から自動判定する
    """

    min_duration: int = Field(ge=0, default=5)
    delimiter: str = ","
    has_header: bool | None = None
    encoding: str = "utf-8"

    @field_validator("delimiter")
    @classmethod
    def validate_delimiter(cls, v: str) -> str:
        if v == "\\t":
            v = "\t"
        if len(v) != 1:
            raise ValueError(f"Delimiter must be a single character: '{v}'")
        return v
