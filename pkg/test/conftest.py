from collections.abc import Callable
from datetime import date, time

import pytest
from fino_callnet.domain.value.cdr_record import CdrRecord

CallFactory = Callable[..., CdrRecord]


@pytest.fixture
def call() -> CallFactory:
    """テスト用の CdrRecord を短く書くためのファクトリ"""

    def _call(
        from_id: str,
        to_id: str,
        day: date = date(2017, 2, 1),
        duration: int = 60,
        at: time = time(10, 0),
    ) -> CdrRecord:
        return CdrRecord(start_date=day, start_time=at, duration=duration, from_id=from_id, to_id=to_id)

    return _call
