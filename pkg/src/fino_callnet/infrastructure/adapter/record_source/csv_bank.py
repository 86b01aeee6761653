"""
銀行データのCSV（口座・デビット取引・カード利用履歴）
- accounts: customer_id, age, marital_status, postcode（空欄は欠損）
- transactions: customer_id, booking_date (YYYY-MM-DD), amount
- card_activity: customer_id, card_issue_date, credit_limit, drawn_01..drawn_12, arrears_01..arrears_12
"""

import io
import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from datetime import date

import pandas as pd

from fino_callnet.domain.error import DataError, DuplicateKeyError
from fino_callnet.domain.value.bank_record import (
    OBSERVATION_MONTHS,
    BankRecord,
    DebitTransaction,
    Sociodemographics,
)
from fino_callnet.interface.config.ingest import IngestConfig
from fino_callnet.interface.port.record_source import BankBatch

logger = logging.getLogger(__name__)

ACCOUNT_COLUMNS = ("customer_id", "age", "marital_status", "postcode")
TRANSACTION_COLUMNS = ("customer_id", "booking_date", "amount")
DRAWN_COLUMNS = tuple(f"drawn_{m:02d}" for m in range(1, OBSERVATION_MONTHS + 1))
ARREARS_COLUMNS = tuple(f"arrears_{m:02d}" for m in range(1, OBSERVATION_MONTHS + 1))
CARD_COLUMNS = ("customer_id", "card_issue_date", "credit_limit", *DRAWN_COLUMNS, *ARREARS_COLUMNS)


def _read_table(lines: Iterable[str], columns: Sequence[str], source: str, delimiter: str) -> pd.DataFrame:
    text = "\n".join(line.rstrip("\r\n") for line in lines)
    if not text.strip():
        return pd.DataFrame(columns=list(columns), dtype=str)
    frame = pd.read_csv(io.StringIO(text), sep=delimiter, dtype=str, keep_default_na=False)
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise DataError(f"{source} is missing columns: {missing}")
    frame["customer_id"] = frame["customer_id"].str.strip()
    return frame


def _check_unique(frame: pd.DataFrame, source: str) -> None:
    duplicated = frame.loc[frame["customer_id"].duplicated(), "customer_id"]
    if len(duplicated):
        raise DuplicateKeyError(key=str(duplicated.iloc[0]), source=source)


def _optional(text: str) -> str | None:
    text = text.strip()
    return text or None


def _sociodemographics(age_text: str, marital_status: str, postcode: str) -> Sociodemographics:
    age = _optional(age_text)
    return Sociodemographics(
        age=None if age is None else int(float(age)),
        marital_status=_optional(marital_status),
        postcode=_optional(postcode),
    )


def ingest_bank(
    accounts: Iterable[str],
    transactions: Iterable[str],
    card_activity: Iterable[str],
    config: IngestConfig | None = None,
) -> BankBatch:
    """
    3つのデータを customer_id で結合し、カードを持つ顧客ごとに BankRecord を作る
    - カード利用履歴のない口座は除外して数える
    - 口座のない取引は数えて報告する
    - customer_id の重複はエラー
    """
    config = config or IngestConfig()
    account_frame = _read_table(accounts, ACCOUNT_COLUMNS, "accounts", config.delimiter)
    transaction_frame = _read_table(transactions, TRANSACTION_COLUMNS, "transactions", config.delimiter)
    card_frame = _read_table(card_activity, CARD_COLUMNS, "card activity", config.delimiter)
    _check_unique(account_frame, "accounts")
    _check_unique(card_frame, "card activity")

    account_ids = set(account_frame["customer_id"])
    rejections: list[str] = []
    debits: dict[str, list[DebitTransaction]] = defaultdict(list)
    orphans = 0
    for i, row in enumerate(transaction_frame.itertuples(index=False), start=2):
        customer_id = str(row.customer_id)
        if customer_id not in account_ids:
            orphans += 1
            continue
        try:
            debits[customer_id].append(
                DebitTransaction(
                    booking_date=date.fromisoformat(str(row.booking_date).strip()),
                    amount=float(row.amount),
                )
            )
        except ValueError as e:
            rejections.append(f"transactions row {i}: {e}")
            logger.warning("rejected transaction row %d: %s", i, e)
    if orphans:
        logger.warning("%d transactions reference unknown customers", orphans)

    cards = card_frame.set_index("customer_id")
    records: list[BankRecord] = []
    excluded = 0
    for i, account in enumerate(account_frame.itertuples(index=False), start=2):
        customer_id = str(account.customer_id)
        if customer_id not in cards.index:
            excluded += 1
            continue
        card = cards.loc[customer_id]
        try:
            records.append(
                BankRecord(
                    customer_id=customer_id,
                    sociodemographics=_sociodemographics(
                        str(account.age), str(account.marital_status), str(account.postcode)
                    ),
                    card_issue_date=date.fromisoformat(str(card["card_issue_date"]).strip()),
                    credit_limit=float(card["credit_limit"]),
                    monthly_drawn=tuple(float(card[c]) for c in DRAWN_COLUMNS),
                    monthly_arrears_flags=tuple(
                        str(card[c]).strip() in ("1", "true", "True") for c in ARREARS_COLUMNS
                    ),
                    debit_transactions=tuple(sorted(debits.get(customer_id, []), key=lambda t: t.booking_date)),
                )
            )
        except ValueError as e:
            rejections.append(f"accounts row {i} ({customer_id}): {e}")
            logger.warning("rejected bank customer %s: %s", customer_id, e)

    unknown_cards = set(cards.index) - account_ids
    if unknown_cards:
        logger.warning("%d card histories have no account and are ignored", len(unknown_cards))
    logger.info(
        "bank ingest: %d customers with a card, %d accounts without card activity, %d orphan transactions",
        len(records),
        excluded,
        orphans,
    )
    return BankBatch(
        records=records,
        excluded_no_card=excluded,
        orphan_transactions=orphans,
        rejections=rejections,
    )


def bank_frames(records: Sequence[BankRecord]) -> tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
    """ingest_bank で読める3つの表"""
    accounts = pd.DataFrame(
        [
            {
                "customer_id": r.customer_id,
                "age": "" if r.sociodemographics.age is None else r.sociodemographics.age,
                "marital_status": r.sociodemographics.marital_status or "",
                "postcode": r.sociodemographics.postcode or "",
            }
            for r in records
        ],
        columns=list(ACCOUNT_COLUMNS),
    )
    transactions = pd.DataFrame(
        [
            {"customer_id": r.customer_id, "booking_date": t.booking_date.isoformat(), "amount": t.amount}
            for r in records
            for t in r.debit_transactions
        ],
        columns=list(TRANSACTION_COLUMNS),
    )
    cards = pd.DataFrame(
        [
            {
                "customer_id": r.customer_id,
                "card_issue_date": r.card_issue_date.isoformat(),
                "credit_limit": r.credit_limit,
                **dict(zip(DRAWN_COLUMNS, r.monthly_drawn)),
                **{c: int(flag) for c, flag in zip(ARREARS_COLUMNS, r.monthly_arrears_flags)},
            }
            for r in records
        ],
        columns=list(CARD_COLUMNS),
    )
    return accounts, transactions, cards


class CsvBankSource:
    def __init__(self, config: IngestConfig) -> None:
        self.config = config

    def read_bank(
        self,
        accounts: Iterable[str],
        transactions: Iterable[str],
        card_activity: Iterable[str],
    ) -> BankBatch:
        return ingest_bank(accounts, transactions, card_activity, self.config)
