from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Protocol

from fino_callnet.domain.value.bank_record import BankRecord
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.ingest_stats import IngestStats


@dataclass(frozen=True)
class CdrBatch:
    records: list[CdrRecord]
    stats: IngestStats
    rejections: list[str] = field(default_factory=list)
    """'row <n>: <reason>' 形式の棄却ログ"""


@dataclass(frozen=True)
class BankBatch:
    records: list[BankRecord]
    excluded_no_card: int = 0
    """カード利用履歴のない口座の数"""
    orphan_transactions: int = 0
    """口座のない取引の数"""
    rejections: list[str] = field(default_factory=list)

    @property
    def customer_ids(self) -> list[str]:
        return [r.customer_id for r in self.records]


class CdrSourcePort(Protocol):
    """CDRログを読み込むポート"""

    def read_cdr(self, lines: Iterable[str]) -> CdrBatch: ...


class BankSourcePort(Protocol):
    """銀行データ（口座・デビット取引・カード利用履歴）を読み込むポート"""

    def read_bank(
        self,
        accounts: Iterable[str],
        transactions: Iterable[str],
        card_activity: Iterable[str],
    ) -> BankBatch: ...
