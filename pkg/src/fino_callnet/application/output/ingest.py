from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class IngestOutput:
    rows_read: int
    rows_accepted: int
    rows_rejected: int
    rows_filtered_short: int
    distinct_ids: int
    bank_customers: int
    excluded_no_card: int
    orphan_transactions: int
    bank_rejections: int
