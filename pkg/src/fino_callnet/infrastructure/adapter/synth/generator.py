"""
合成データの生成

1. 銀行顧客ごとに潜在リスク z を引き、デフォルト確率 sigmoid(b + effect·z) で一次ラベルを決める
2. 一次ラベルに依存した混合で通話ネットワークを引く（異なるラベル間の辺は 1/homophily_strength の確率で採択）
3. 近傍の一次ラベルのデフォルト割合を contagion 倍してロジットに足し、同じ一様乱数で最終ラベルを決める
4. 辺ごとに通話、顧客ごとにデビット取引と12ヶ月のカード利用履歴を作る

切片 b はデフォルト率が default_rate になるよう数値的に合わせる
乱数はすべて seed からステージ名で分岐したサブストリームから引く
"""

import io
import logging
from dataclasses import dataclass
from datetime import date, time, timedelta

import numpy as np
import numpy.typing as npt
import pandas as pd
from dateutil.relativedelta import relativedelta
from scipy import sparse
from scipy.optimize import brentq
from scipy.special import expit

from fino_callnet.domain.error import DataError
from fino_callnet.domain.service.behavior_features import MARITAL_STATUSES
from fino_callnet.domain.value.bank_record import (
    DEFAULT_ARREARS,
    OBSERVATION_MONTHS,
    BankRecord,
    DebitTransaction,
    Sociodemographics,
)
from fino_callnet.domain.value.cdr_record import MONTH_ABBREVIATIONS, CdrRecord
from fino_callnet.infrastructure.adapter.record_source.csv_bank import bank_frames
from fino_callnet.infrastructure.adapter.record_source.csv_cdr import CDR_COLUMNS
from fino_callnet.interface.config.synth import SynthConfig
from fino_callnet.interface.port.storage import StoragePort
from fino_callnet.util.seed import stage_rng
from fino_callnet.util.timeframe import Timeframe

logger = logging.getLogger(__name__)

SYNTH_FILES = {
    "calls": "calls.csv",
    "accounts": "accounts.csv",
    "transactions": "transactions.csv",
    "card_activity": "card_activity.csv",
    "truth": "truth.csv",
}

CREDIT_LIMITS = (500.0, 1000.0, 1500.0, 2000.0, 2500.0, 3000.0, 5000.0)
MARITAL_WEIGHTS = (0.35, 0.45, 0.12, 0.08)
# 非デフォルト顧客の延滞回数 0/1/2 の割合
LATE_PAYMENT_WEIGHTS = (0.82, 0.12, 0.06)
# デフォルト月の利用率: 0（未利用）、満額、その間の一様
DEFAULT_UTILIZATION_WEIGHTS = (0.15, 0.35, 0.50)
HOUR_WEIGHTS = np.asarray([1, 1, 1, 1, 1, 1, 2, 3, 5, 6, 6, 6, 6, 6, 6, 6, 6, 6, 5, 5, 4, 3, 2, 1], dtype=np.float64)
MAX_EDGE_ROUNDS = 64


@dataclass(frozen=True)
class SynthDataset:
    """
    生成結果
    - calls: CDR の列（start_date, start_time, duration, from_id, to_id）を文字列で持つ表
    - truth: customer_id, role（subject / customer）, timeframe_id, latent_risk, y_default
    """

    calls: pd.DataFrame
    bank: list[BankRecord]
    truth: pd.DataFrame
    timeframes: list[Timeframe]

    def cdr_records(self) -> list[CdrRecord]:
        return [
            CdrRecord(
                start_date=_parse_date(row.start_date),
                start_time=time.fromisoformat(row.start_time),
                duration=int(row.duration),
                from_id=row.from_id,
                to_id=row.to_id,
            )
            for row in self.calls.itertuples(index=False)
        ]

    @property
    def realized_default_rate(self) -> float:
        subjects = self.truth[self.truth["role"] == "subject"]
        return float(subjects["y_default"].mean()) if len(subjects) else float("nan")


def _parse_date(text: str) -> date:
    return date(int(text[5:]), MONTH_ABBREVIATIONS.index(text[2:5]) + 1, int(text[:2]))


def _calibrated_intercept(logits: npt.NDArray[np.float64], rate: float) -> float:
    """mean(sigmoid(b + logits)) = rate となる b"""
    if logits.size == 0:
        return 0.0
    return float(brentq(lambda b: float(expit(b + logits).mean()) - rate, -50.0, 50.0, xtol=1e-12))


def _node_ids(n_nodes: int, rng: np.random.Generator) -> npt.NDArray[np.object_]:
    width = len(str(n_nodes))
    return np.asarray([f"+32 4{i:0{width}d}" for i in rng.permutation(n_nodes)], dtype=object)


def _propensity(config: SynthConfig, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    if config.degree_model == "poisson":
        return np.ones(config.n_nodes, dtype=np.float64)
    theta = rng.pareto(config.degree_exponent - 1.0, size=config.n_nodes) + 1.0
    return np.minimum(theta, float(config.max_degree))


def _draw_edges(
    config: SynthConfig, mixing_label: npt.NDArray[np.int64], rng: np.random.Generator
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """
    次数の偏りを持つ植え付け分割モデル
    端点は propensity に比例して選び、ラベルの異なる銀行顧客間の辺を 1/homophily_strength の比で採択する
    ラベルのないノード（telco のみ）との辺は常に採択する
    """
    n = config.n_nodes
    target = int(round(n * config.mean_degree / 2.0))
    if target > n * (n - 1) // 4:
        raise DataError(f"mean_degree {config.mean_degree} is too dense for {n} nodes")
    theta = _propensity(config, rng)
    probs = theta / theta.sum()
    cross_weight = 1.0 / config.homophily_strength
    scale = max(1.0, cross_weight)

    keys = np.empty(0, dtype=np.int64)
    for _ in range(MAX_EDGE_ROUNDS):
        batch = 2 * (target - keys.size) + 64
        u = rng.choice(n, size=batch, p=probs)
        v = rng.choice(n, size=batch, p=probs)
        lu, lv = mixing_label[u], mixing_label[v]
        cross = (lu >= 0) & (lv >= 0) & (lu != lv)
        accept = rng.random(batch) < np.where(cross, cross_weight, 1.0) / scale
        keep = accept & (u != v)
        lo, hi = np.minimum(u[keep], v[keep]), np.maximum(u[keep], v[keep])
        keys = np.concatenate([keys, lo.astype(np.int64) * n + hi])
        unique, first = np.unique(keys, return_index=True)
        keys = unique[np.argsort(first, kind="stable")]
        if keys.size >= target:
            keys = keys[:target]
            return keys // n, keys % n
    raise DataError(
        f"could not place {target} edges among {n} nodes "
        f"(homophily_strength={config.homophily_strength}, degree_model={config.degree_model})"
    )


def _calls(
    config: SynthConfig,
    ids: npt.NDArray[np.object_],
    src: npt.NDArray[np.int64],
    dst: npt.NDArray[np.int64],
    span: tuple[date, date],
    rng: np.random.Generator,
) -> pd.DataFrame:
    n_calls = 1 + rng.poisson(config.calls_per_edge - 1.0, size=src.size)
    caller = np.repeat(src, n_calls)
    callee = np.repeat(dst, n_calls)
    total = int(caller.size)
    swap = rng.random(total) < 0.5
    caller, callee = np.where(swap, callee, caller), np.where(swap, caller, callee)

    n_days = (span[1] - span[0]).days + 1
    days = pd.to_datetime(span[0]) + pd.to_timedelta(rng.integers(0, n_days, size=total), unit="D")
    seconds = rng.choice(24, size=total, p=HOUR_WEIGHTS / HOUR_WEIGHTS.sum()) * 3600 + rng.integers(0, 3600, size=total)
    short = rng.random(total) < config.short_call_share
    duration = np.where(
        short,
        rng.integers(0, 5, size=total),
        5 + np.floor(rng.lognormal(mean=4.0, sigma=1.0, size=total)).astype(np.int64),
    )

    order = np.lexsort((callee, caller, seconds, days.to_numpy()))
    days = days[order]
    seconds = seconds[order]
    months = np.asarray(MONTH_ABBREVIATIONS, dtype=object)[days.month.to_numpy() - 1]
    frame = pd.DataFrame(
        {
            "start_date": days.strftime("%d").to_numpy(dtype=object) + months + days.strftime("%Y").to_numpy(dtype=object),
            "start_time": [f"{s // 3600:02d}:{s % 3600 // 60:02d}:{s % 60:02d}" for s in seconds.tolist()],
            "duration": duration[order],
            "from_id": ids[caller[order]],
            "to_id": ids[callee[order]],
        },
        columns=list(CDR_COLUMNS),
    )
    logger.debug("generated %d calls over %d edges", total, src.size)
    return frame


def _arrears(is_defaulter: bool, rng: np.random.Generator) -> tuple[tuple[bool, ...], int | None]:
    """12ヶ月の延滞フラグと、デフォルトした月（3回目の延滞月）"""
    flags = [False] * OBSERVATION_MONTHS
    if is_defaulter:
        n_late = int(rng.integers(DEFAULT_ARREARS, 7))
        start = int(rng.integers(0, OBSERVATION_MONTHS - n_late + 1))
        for m in range(start, start + n_late):
            flags[m] = True
        return tuple(flags), start + DEFAULT_ARREARS - 1
    n_late = int(rng.choice(len(LATE_PAYMENT_WEIGHTS), p=LATE_PAYMENT_WEIGHTS))
    for m in rng.choice(OBSERVATION_MONTHS, size=n_late, replace=False).tolist():
        flags[m] = True
    return tuple(flags), None


def _drawn(limit: float, default_month: int | None, rng: np.random.Generator) -> tuple[float, ...]:
    utilization = rng.beta(2.0, 3.0, size=OBSERVATION_MONTHS)
    if default_month is not None:
        kind = int(rng.choice(3, p=DEFAULT_UTILIZATION_WEIGHTS))
        utilization[default_month] = (0.0, 1.0, float(rng.random()))[kind]
    return tuple(float(min(limit, round(limit * u, 2))) for u in utilization.tolist())


def _debits(
    risk: float, month_start: date, rng: np.random.Generator, missing_share: float
) -> tuple[DebitTransaction, ...]:
    if rng.random() < missing_share:
        return ()
    month_end = month_start + relativedelta(months=1)
    n_days = (month_end - month_start).days
    count = int(rng.poisson(max(1.0, 25.0 * np.exp(-0.3 * risk))))
    days = np.sort(rng.integers(0, n_days, size=count))
    amounts = np.round(rng.lognormal(mean=3.2 - 0.25 * risk, sigma=0.8, size=count), 2)
    return tuple(
        DebitTransaction(booking_date=month_start + timedelta(days=int(d)), amount=float(a))
        for d, a in zip(days.tolist(), amounts.tolist())
    )


def _sociodemographics(risk: float, rng: np.random.Generator, missing_share: float) -> Sociodemographics:
    age = int(np.clip(round(40.0 - 5.0 * risk + rng.normal(0.0, 9.0)), 18, 85))
    marital = MARITAL_STATUSES[int(rng.choice(len(MARITAL_STATUSES), p=MARITAL_WEIGHTS))]
    postcode = str(int(rng.integers(1000, 10000)))
    return Sociodemographics(
        age=None if rng.random() < missing_share else age,
        marital_status=None if rng.random() < missing_share else marital,
        postcode=None if rng.random() < missing_share else postcode,
    )


def generate(config: SynthConfig) -> SynthDataset:
    """
    設定から合成データを作る。同じ設定（seed を含む）からは常に同じデータができる
    """
    seed = config.seed
    timeframes = Timeframe.consecutive(config.first_card_year, config.first_card_month, config.n_timeframes)
    timeframes = [tf.model_copy(update={"lookback_months": config.months}) for tf in timeframes]
    span = (timeframes[0].to_range()[0], timeframes[-1].to_range()[1])

    n = config.n_nodes
    ids = _node_ids(n, stage_rng(seed, "synth", "ids"))
    roles_rng = stage_rng(seed, "synth", "roles")
    is_subject = np.zeros(n, dtype=np.bool_)
    is_subject[: config.n_subjects] = True
    is_bank = is_subject | (roles_rng.random(n) < config.bank_share)
    timeframe_of = np.full(n, -1, dtype=np.int64)
    timeframe_of[: config.n_subjects] = np.arange(config.n_subjects) % config.n_timeframes

    label_rng = stage_rng(seed, "synth", "labels")
    risk = label_rng.standard_normal(n)
    uniform = label_rng.random(n)
    base_logit = config.planted_feature_effect * risk
    intercept = _calibrated_intercept(base_logit[is_bank], config.default_rate)
    first_pass = is_bank & (uniform < expit(intercept + base_logit))
    mixing_label = np.where(is_bank, first_pass.astype(np.int64), -1)

    src, dst = _draw_edges(config, mixing_label, stage_rng(seed, "synth", "edges"))
    adjacency = sparse.coo_array((np.ones(src.size), (src, dst)), shape=(n, n)).tocsr()
    adjacency = adjacency + adjacency.T
    degree = np.asarray(adjacency.sum(axis=1)).ravel()
    with np.errstate(divide="ignore", invalid="ignore"):
        neighbor_share = np.where(degree > 0, adjacency @ first_pass.astype(np.float64) / degree, 0.0)
    contagion_logit = base_logit + config.contagion * (neighbor_share - neighbor_share[is_bank].mean())
    intercept = _calibrated_intercept(contagion_logit[is_bank], config.default_rate)
    y_default = is_bank & (uniform < expit(intercept + contagion_logit))

    calls = _calls(config, ids, src, dst, span, stage_rng(seed, "synth", "calls"))

    bank_rng = stage_rng(seed, "synth", "bank")
    records: list[BankRecord] = []
    truth_rows: list[dict[str, object]] = []
    for i in np.flatnonzero(is_bank).tolist():
        if is_subject[i]:
            timeframe = timeframes[int(timeframe_of[i])]
            card_month = timeframe.card_month_start
        else:
            timeframe = None
            card_month = span[0] - relativedelta(months=OBSERVATION_MONTHS + 1 + int(bank_rng.integers(0, 12)))
        issue_date = card_month + timedelta(days=int(bank_rng.integers(0, 28)))
        limit = float(bank_rng.choice(CREDIT_LIMITS))
        flags, default_month = _arrears(bool(y_default[i]), bank_rng)
        records.append(
            BankRecord(
                customer_id=str(ids[i]),
                sociodemographics=_sociodemographics(float(risk[i]), bank_rng, config.missing_share),
                card_issue_date=issue_date,
                credit_limit=limit,
                monthly_drawn=_drawn(limit, default_month, bank_rng),
                monthly_arrears_flags=flags,
                debit_transactions=_debits(
                    float(risk[i]), card_month - relativedelta(months=1), bank_rng, config.missing_share
                ),
            )
        )
        truth_rows.append(
            {
                "customer_id": str(ids[i]),
                "role": "subject" if timeframe is not None else "customer",
                "timeframe_id": timeframe.timeframe_id if timeframe is not None else "",
                "latent_risk": round(float(risk[i]), 6),
                "y_default": int(y_default[i]),
            }
        )

    order = sorted(range(len(records)), key=lambda k: records[k].customer_id)
    records = [records[k] for k in order]
    truth = pd.DataFrame([truth_rows[k] for k in order])
    dataset = SynthDataset(calls=calls, bank=records, truth=truth, timeframes=timeframes)
    logger.info(
        "synthetic data: %d nodes, %d edges, %d calls, %d bank customers, %d subjects, default rate %.4f",
        n,
        src.size,
        len(calls),
        len(records),
        config.n_subjects,
        dataset.realized_default_rate,
    )
    return dataset


def _csv_bytes(frame: pd.DataFrame) -> bytes:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue().encode("utf-8")


def write_synth(dataset: SynthDataset, storage: StoragePort, prefix: str = "") -> dict[str, str]:
    """取り込み（ingest）が読める CSV を書き出し、種類 → 保存先 を返す"""
    accounts, transactions, cards = bank_frames(dataset.bank)
    frames = {
        "calls": dataset.calls,
        "accounts": accounts,
        "transactions": transactions,
        "card_activity": cards,
        "truth": dataset.truth,
    }
    written: dict[str, str] = {}
    for kind, frame in frames.items():
        path = f"{prefix.rstrip('/')}/{SYNTH_FILES[kind]}" if prefix else SYNTH_FILES[kind]
        storage.save(path=path, file=_csv_bytes(frame))
        written[kind] = storage.describe(path)
    logger.info("synthetic data written: %s", ", ".join(sorted(written.values())))
    return written
