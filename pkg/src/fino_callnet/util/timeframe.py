from datetime import date, timedelta
from typing import Iterator, Self, Tuple

from dateutil.relativedelta import relativedelta
from pydantic import BaseModel, Field, model_validator


class Timeframe(BaseModel):
    """
    ネットワーク期間を表すモデル
    - card_year, card_month: 対象者(subject)がカードを受け取った月
    - lookback_months: ネットワークを構築する直前の暦月数（既定3ヶ月）
    ネットワーク期間はカード受取月の直前 lookback_months ヶ月のまるごと
    """

    timeframe_id: str = Field(min_length=1)
    card_year: int = Field(ge=1900, le=2100)
    card_month: int = Field(ge=1, le=12)
    lookback_months: int = Field(ge=1, le=24, default=3)

    @model_validator(mode="after")
    def validate_identifier(self) -> Self:
        if self.timeframe_id != self.timeframe_id.strip():
            raise ValueError("timeframe_id cannot have surrounding spaces")
        return self

    @property
    def card_month_start(self) -> date:
        return date(self.card_year, self.card_month, 1)

    def to_range(self) -> Tuple[date, date]:
        """
        ネットワーク期間を [start, end] の日付レンジに変換する（両端を含む）

        Examples
        --------
        >>> Timeframe(timeframe_id="t1", card_year=2015, card_month=4).to_range()
        (datetime.date(2015, 1, 1), datetime.date(2015, 3, 31))
        """
        start = self.card_month_start - relativedelta(months=self.lookback_months)
        end = self.card_month_start - timedelta(days=1)
        return start, end

    def contains(self, day: date) -> bool:
        start, end = self.to_range()
        return start <= day <= end

    def iterate_by_month(self) -> Iterator[date]:
        """ネットワーク期間の各月の初日をイテレートする"""
        start, _ = self.to_range()
        for offset in range(self.lookback_months):
            yield start + relativedelta(months=offset)

    def debit_range(self) -> Tuple[date, date]:
        """カード受取月の前月（デビット口座の特徴量に使う1ヶ月）"""
        start = self.card_month_start - relativedelta(months=1)
        return start, self.card_month_start - timedelta(days=1)

    @classmethod
    def from_window(cls, timeframe_id: str, start: date, end: date) -> Self:
        """
        暦月単位の期間 [start, end] からタイムフレームを作る（カード受取月は end の翌月）

        Examples
        --------
        >>> Timeframe.from_window("w", date(2017, 1, 1), date(2017, 3, 31)).card_month
        4
        """
        following = end + timedelta(days=1)
        if start.day != 1 or following.day != 1 or end < start:
            raise ValueError(f"Window must span whole calendar months: {start}..{end}")
        span = relativedelta(following, start)
        return cls(
            timeframe_id=timeframe_id,
            card_year=following.year,
            card_month=following.month,
            lookback_months=span.years * 12 + span.months,
        )

    @classmethod
    def consecutive(cls, first_card_year: int, first_card_month: int, count: int = 3) -> list[Self]:
        """
        連続する count ヶ月分のタイムフレーム (t1, t2, ...) を生成する
        """
        first = date(first_card_year, first_card_month, 1)
        frames: list[Self] = []
        for i in range(count):
            month = first + relativedelta(months=i)
            frames.append(
                cls(timeframe_id=f"t{i + 1}", card_year=month.year, card_month=month.month)
            )
        return frames
