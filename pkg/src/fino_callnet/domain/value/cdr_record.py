from dataclasses import dataclass
from datetime import date, time

from fino_callnet.domain.model import ValueObject

# CDRの日付はロケールに依存しない固定の英語月略称で表現される
MONTH_ABBREVIATIONS = (
    "JAN",
    "FEB",
    "MAR",
    "APR",
    "MAY",
    "JUN",
    "JUL",
    "AUG",
    "SEP",
    "OCT",
    "NOV",
    "DEC",
)


def format_cdr_date(value: date) -> str:
    """date を DDMONYYYY 形式 (例: 01MAY2017) に変換する"""
    return f"{value.day:02d}{MONTH_ABBREVIATIONS[value.month - 1]}{value.year:04d}"


def parse_cdr_date(text: str) -> date:
    """DDMONYYYY 形式の文字列を date に変換する"""
    text = text.strip().upper()
    if len(text) != 9:
        raise ValueError(f"invalid date '{text}': expected DDMONYYYY")
    month_abbr = text[2:5]
    if month_abbr not in MONTH_ABBREVIATIONS:
        raise ValueError(f"invalid date '{text}': unknown month '{month_abbr}'")
    if not (text[:2].isdigit() and text[5:].isdigit()):
        raise ValueError(f"invalid date '{text}': non-numeric day or year")
    return date(int(text[5:]), MONTH_ABBREVIATIONS.index(month_abbr) + 1, int(text[:2]))


@dataclass(frozen=True, slots=True)
class CdrRecord(ValueObject):
    """
    CDRログの1行
    - 電話番号は暗号化済みの不透明な文字列として扱い、数値として解釈しない
    """

    start_date: date
    start_time: time
    duration: int
    """通話時間（秒）"""
    from_id: str
    to_id: str

    def _validate(self) -> None:
        if self.duration < 0:
            raise ValueError(f"Call duration cannot be negative: {self.duration}")
        if not self.from_id or not self.to_id:
            raise ValueError("Caller and callee identities cannot be empty")
        if self.from_id == self.to_id:
            raise ValueError(f"Self-call is not allowed: {self.from_id}")

    def to_fields(self) -> tuple[str, str, str, str, str]:
        """正規化されたフィールド値（CDRログの列順）"""
        return (
            format_cdr_date(self.start_date),
            self.start_time.strftime("%H:%M:%S"),
            str(self.duration),
            self.from_id,
            self.to_id,
        )

    def to_line(self, delimiter: str = ",") -> str:
        return delimiter.join(self.to_fields())
