"""
顧客自身の行動に基づく特徴量
- CB: 通話の回数と通話時間を 向き × 時間帯 でクロス集計した72個
- SD: 社会人口統計とデビット口座の利用行動（多様性・ロイヤルティを含む）35個
欠損は NaN で返し、データセット組み立て時に欠損マスクへ変換する
"""

import logging
import math
from collections.abc import Iterable, Sequence
from datetime import date
from typing import Literal

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy.stats import entropy

from fino_callnet.domain.value.bank_record import BankRecord
from fino_callnet.domain.value.cdr_record import CdrRecord
from fino_callnet.domain.value.feature_matrix import BinProfile

logger = logging.getLogger(__name__)

WEEKDAYS = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")
TIME_SLICES = ("Day", "Night", *WEEKDAYS, "Weekday", "Weekend", "Total")
DIRECTIONS = ("IN", "OUT", "UD")
MEASURES = ("Count", "Duration")

MARITAL_STATUSES = ("single", "married", "divorced", "widowed")

DiversityScope = Literal["all", "non-empty"]


def calling_behavior_feature_names() -> list[str]:
    names: list[str] = []
    for direction in DIRECTIONS:
        for measure in MEASURES:
            for time_slice in TIME_SLICES:
                prefix = "" if time_slice == "Total" else f"{time_slice} "
                names.append(f"{prefix}{measure} {direction}")
    return names


def _slice_indicators(weekday: npt.NDArray[np.int64], hour: npt.NDArray[np.int64], day_hours: tuple[int, int]) -> pd.DataFrame:
    day_start, day_end = day_hours
    is_day = (hour >= day_start) & (hour < day_end)
    columns: dict[str, npt.NDArray[np.bool_]] = {"Day": is_day, "Night": ~is_day}
    for i, name in enumerate(WEEKDAYS):
        columns[name] = weekday == i
    columns["Weekday"] = weekday < 5
    columns["Weekend"] = weekday >= 5
    columns["Total"] = np.ones_like(is_day)
    return pd.DataFrame(columns).astype(np.float64)


def calling_behavior_features(
    records: Iterable[CdrRecord],
    window: tuple[date, date],
    subjects: Sequence[str],
    day_hours: tuple[int, int] = (8, 20),
) -> pd.DataFrame:
    """
    対象者ごとの通話行動特徴量（index: 対象者ID、列: 72個）
    通話のない対象者は全て0
    """
    start, end = window
    calls = [r for r in records if start <= r.start_date <= end]
    caller = np.asarray([r.from_id for r in calls], dtype=object)
    callee = np.asarray([r.to_id for r in calls], dtype=object)
    duration = np.asarray([r.duration for r in calls], dtype=np.float64)
    weekday = np.asarray([r.start_date.weekday() for r in calls], dtype=np.int64)
    hour = np.asarray([r.start_time.hour for r in calls], dtype=np.int64)

    counts = _slice_indicators(weekday, hour, day_hours)
    durations = counts.mul(duration, axis=0)
    index = pd.Index(list(subjects), name="subject_id")

    per_direction: dict[str, tuple[pd.DataFrame, pd.DataFrame]] = {}
    for direction, node in (("OUT", caller), ("IN", callee)):
        per_direction[direction] = (
            counts.groupby(node).sum().reindex(index, fill_value=0.0),
            durations.groupby(node).sum().reindex(index, fill_value=0.0),
        )
    per_direction["UD"] = (
        per_direction["IN"][0] + per_direction["OUT"][0],
        per_direction["IN"][1] + per_direction["OUT"][1],
    )

    blocks: list[pd.DataFrame] = []
    for direction in DIRECTIONS:
        for measure, table in zip(MEASURES, per_direction[direction]):
            renamed = table.rename(
                columns=lambda s: f"{'' if s == 'Total' else s + ' '}{measure} {direction}"
            )
            blocks.append(renamed)
    features = pd.concat(blocks, axis=1)
    logger.debug("CB features: %d subjects, %d calls in window", len(index), len(calls))
    return features[calling_behavior_feature_names()]


def diversity(bins: Sequence[float] | npt.NDArray[np.float64], scope: DiversityScope = "non-empty") -> float:
    """
    曜日ビンに対する正規化エントロピー D = -Σ p log p / log M
    - scope="non-empty": M は取引のあるビンの数、"all": M = 7
    - 取引がなければ NaN（欠損）、M = 1 の場合は 0
    """
    profile = BinProfile.from_bins(bins)
    if profile.is_empty:
        return math.nan
    n_bins = profile.M if scope == "non-empty" else len(profile.p)
    if n_bins <= 1:
        return 0.0
    value = float(entropy(profile.p[profile.p > 0])) / math.log(n_bins)
    return min(max(value, 0.0), 1.0)


def loyalty(bins: Sequence[float] | npt.NDArray[np.float64], k: int = 3) -> float:
    """上位 k ビンに入る取引の割合。取引がなければ NaN"""
    profile = BinProfile.from_bins(bins, k=k)
    return math.nan if profile.is_empty else profile.f


def sociodemographic_feature_names() -> list[str]:
    return [
        "Age",
        "Credit Limit",
        *(f"Marital {status.capitalize()}" for status in MARITAL_STATUSES),
        *(f"Postcode Region {digit}" for digit in range(10)),
        "Amount Spent",
        "Mean Spent p. Day",
        "Number of Transactions",
        "Mean Transaction",
        "Max Transaction",
        "Active Days",
        *(f"{day} Amount Spent" for day in WEEKDAYS),
        "Diversity-NE Number",
        "Diversity-NE Value",
        "Diversity-ALL Number",
        "Diversity-ALL Value",
        "Loyalty-Number",
        "Loyalty-Value",
    ]


def _sociodemographic_row(record: BankRecord, window: tuple[date, date], loyalty_k: int) -> list[float]:
    start, end = window
    demo = record.sociodemographics
    row: list[float] = [
        math.nan if demo.age is None else float(demo.age),
        record.credit_limit,
    ]

    if demo.marital_status is None:
        row.extend([math.nan] * len(MARITAL_STATUSES))
    else:
        status = demo.marital_status.strip().lower()
        row.extend(float(status == s) for s in MARITAL_STATUSES)

    postcode = (demo.postcode or "").strip()
    if postcode[:1].isdigit():
        row.extend(float(int(postcode[0]) == d) for d in range(10))
    else:
        row.extend([math.nan] * 10)

    transactions = [t for t in record.debit_transactions if start <= t.booking_date <= end]
    amounts = np.asarray([t.amount for t in transactions], dtype=np.float64)
    count_bins = np.zeros(7)
    value_bins = np.zeros(7)
    for t in transactions:
        count_bins[t.booking_date.weekday()] += 1
        value_bins[t.booking_date.weekday()] += t.amount

    n_days = (end - start).days + 1
    total = float(amounts.sum())
    row.extend(
        [
            total,
            total / n_days,
            float(len(transactions)),
            float(amounts.mean()) if len(amounts) else 0.0,
            float(amounts.max()) if len(amounts) else 0.0,
            float(len({t.booking_date for t in transactions})),
        ]
    )
    row.extend(value_bins.tolist())
    row.extend(
        [
            diversity(count_bins, "non-empty"),
            diversity(value_bins, "non-empty"),
            diversity(count_bins, "all"),
            diversity(value_bins, "all"),
            loyalty(count_bins, loyalty_k),
            loyalty(value_bins, loyalty_k),
        ]
    )
    return row


def sociodemographic_features(
    records: Iterable[BankRecord],
    window: tuple[date, date],
    loyalty_k: int = 3,
) -> pd.DataFrame:
    """
    対象者ごとの社会人口統計・デビット口座特徴量（index: 顧客ID、列: 35個）
    window はカード受取月の前月。欠損項目は NaN
    """
    records = list(records)
    rows = [_sociodemographic_row(record, window, loyalty_k) for record in records]
    return pd.DataFrame(
        rows,
        index=pd.Index([r.customer_id for r in records], name="subject_id"),
        columns=sociodemographic_feature_names(),
        dtype=np.float64,
    )
