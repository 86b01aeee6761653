from collections.abc import Iterable
from dataclasses import dataclass

from fino_callnet.interface.port.record_source import BankSourcePort, CdrSourcePort


@dataclass(frozen=True, slots=True)
class IngestInput:
    cdr_source: CdrSourcePort
    bank_source: BankSourcePort
    calls: Iterable[str]
    accounts: Iterable[str]
    transactions: Iterable[str]
    card_activity: Iterable[str]
