from dataclasses import dataclass

from fino_callnet.domain.model import ValueObject


@dataclass(frozen=True, slots=True)
class IngestStats(ValueObject):
    """
    取り込み統計
    rows_read = accepted + rows_rejected + rows_filtered_short が常に成り立つ
    """

    rows_read: int = 0
    rows_rejected: int = 0
    rows_filtered_short: int = 0
    distinct_ids: int = 0

    @property
    def accepted(self) -> int:
        return self.rows_read - self.rows_rejected - self.rows_filtered_short

    def _validate(self) -> None:
        if min(self.rows_read, self.rows_rejected, self.rows_filtered_short, self.distinct_ids) < 0:
            raise ValueError("Ingest counts cannot be negative")
        if self.rows_rejected + self.rows_filtered_short > self.rows_read:
            raise ValueError("Rejected and filtered rows exceed rows read")

    def merge(self, other: "IngestStats", distinct_ids: int) -> "IngestStats":
        """
        チャンク単位の統計を結合する
        distinct_ids は集合の和でしか求まらないため呼び出し側で渡す
        """
        return IngestStats(
            rows_read=self.rows_read + other.rows_read,
            rows_rejected=self.rows_rejected + other.rows_rejected,
            rows_filtered_short=self.rows_filtered_short + other.rows_filtered_short,
            distinct_ids=distinct_ids,
        )
