"""
銀行データからタイムフレームごとのラベルを作る
- 延滞レベル: ネットワーク期間の終わり（対象者のカード受取月）までに観測された延滞回数
- 対象者: カード受取月にカードを受け取った顧客
- y_Default: カード発行後12ヶ月で3回以上の延滞
"""

import logging
from collections.abc import Iterable, Sequence

from fino_callnet.domain.value.bank_record import BankRecord
from fino_callnet.domain.value.emp import LoanOutcome
from fino_callnet.domain.value.node_labels import NodeLabelSet
from fino_callnet.util.timeframe import Timeframe

logger = logging.getLogger(__name__)


def subjects_of(records: Iterable[BankRecord], timeframe: Timeframe) -> list[str]:
    card_month = timeframe.card_month_start
    return sorted(r.customer_id for r in records if r.card_month == card_month)


def node_labels(records: Sequence[BankRecord], timeframe: Timeframe) -> NodeLabelSet:
    """
    カード受取月の時点で存在する銀行顧客のラベル
    カード受取月より後にカードを受け取った顧客はまだ銀行顧客として扱わない
    """
    card_month = timeframe.card_month_start
    levels = {
        r.customer_id: r.delinquency_level(as_of=card_month)
        for r in records
        if r.card_month <= card_month
    }
    labels = NodeLabelSet(delinquency_level=levels, subjects=frozenset(subjects_of(records, timeframe)))
    logger.debug(
        "timeframe %s: %d bank customers, %d subjects",
        timeframe.timeframe_id,
        len(levels),
        len(labels.subjects),
    )
    return labels


def default_targets(records: Iterable[BankRecord]) -> dict[str, bool]:
    return {r.customer_id: r.is_defaulter for r in records}


def loan_outcomes(records: Sequence[BankRecord], subject_ids: Sequence[str], lgd: float) -> list[LoanOutcome]:
    """対象者の並びに合わせたローンの結果（A = 利用限度額、EAD = デフォルト月の利用残高）"""
    by_id = {r.customer_id: r for r in records}
    missing = [s for s in subject_ids if s not in by_id]
    if missing:
        raise KeyError(f"No bank record for subjects: {missing[:5]}")
    return [
        LoanOutcome.of(
            principal=by_id[s].credit_limit,
            ead=by_id[s].exposure_at_default,
            lgd=lgd,
            is_defaulter=by_id[s].is_defaulter,
        )
        for s in subject_ids
    ]
