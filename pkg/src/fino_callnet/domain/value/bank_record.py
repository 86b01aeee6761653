from dataclasses import dataclass, field
from datetime import date

from dateutil.relativedelta import relativedelta

from fino_callnet.domain.model import ValueObject

# カード発行後の観測期間（月数）
OBSERVATION_MONTHS = 12
# バーゼル定義: 3回以上の延滞でデフォルト
DEFAULT_ARREARS = 3


@dataclass(frozen=True, slots=True)
class DebitTransaction(ValueObject):
    booking_date: date
    amount: float

    def _validate(self) -> None:
        if self.amount < 0:
            raise ValueError(f"Debit amount cannot be negative: {self.amount}")


@dataclass(frozen=True, slots=True)
class Sociodemographics(ValueObject):
    """申込時点の社会人口統計情報。欠損はNoneで表す"""

    age: int | None = None
    marital_status: str | None = None
    postcode: str | None = None

    def _validate(self) -> None:
        if self.age is not None and not 0 <= self.age <= 130:
            raise ValueError(f"Age out of range: {self.age}")


@dataclass(frozen=True, slots=True)
class BankRecord(ValueObject):
    """
    クレジットカード保有顧客1人分の銀行データ
    - monthly_drawn[m], monthly_arrears_flags[m] はカード発行月の m+1 ヶ月後の値
    """

    customer_id: str
    sociodemographics: Sociodemographics
    card_issue_date: date
    credit_limit: float
    monthly_drawn: tuple[float, ...]
    monthly_arrears_flags: tuple[bool, ...]
    debit_transactions: tuple[DebitTransaction, ...] = field(default=())

    def _validate(self) -> None:
        if not self.customer_id:
            raise ValueError("Customer ID cannot be empty")
        if self.credit_limit <= 0:
            raise ValueError(f"Credit limit must be positive: {self.credit_limit}")
        if len(self.monthly_drawn) != OBSERVATION_MONTHS:
            raise ValueError(
                f"monthly_drawn must cover {OBSERVATION_MONTHS} months: {len(self.monthly_drawn)}"
            )
        if len(self.monthly_arrears_flags) != OBSERVATION_MONTHS:
            raise ValueError(
                f"monthly_arrears_flags must cover {OBSERVATION_MONTHS} months: {len(self.monthly_arrears_flags)}"
            )
        for drawn in self.monthly_drawn:
            if drawn < 0 or drawn > self.credit_limit:
                raise ValueError(
                    f"Drawn amount {drawn} outside [0, {self.credit_limit}] for {self.customer_id}"
                )

    @property
    def card_month(self) -> date:
        return self.card_issue_date.replace(day=1)

    @property
    def late_payments(self) -> int:
        return sum(self.monthly_arrears_flags)

    @property
    def is_defaulter(self) -> bool:
        return self.late_payments >= DEFAULT_ARREARS

    @property
    def exposure_at_default(self) -> float:
        """デフォルトした月（3回目の延滞月）の利用残高。非デフォルトは0"""
        count = 0
        for drawn, in_arrears in zip(self.monthly_drawn, self.monthly_arrears_flags):
            count += in_arrears
            if count >= DEFAULT_ARREARS:
                return drawn
        return 0.0

    def delinquency_level(self, as_of: date) -> int:
        """
        as_of より前に締まった月の延滞回数（3以上は3に丸める）
        ネットワーク期間後の延滞を参照しないためのもの
        """
        observed = 0
        for m, in_arrears in enumerate(self.monthly_arrears_flags):
            month_start = self.card_month + relativedelta(months=m + 1)
            if month_start >= as_of.replace(day=1):
                break
            observed += in_arrears
        return min(observed, DEFAULT_ARREARS)
