from datetime import date

import pytest
from fino_callnet.domain.value.bank_record import BankRecord, DebitTransaction, Sociodemographics


def make_record(
    flags: tuple[bool, ...],
    drawn: tuple[float, ...] | None = None,
    issue: date = date(2017, 1, 15),
) -> BankRecord:
    return BankRecord(
        customer_id="c1",
        sociodemographics=Sociodemographics(age=35, marital_status="single", postcode="1000"),
        card_issue_date=issue,
        credit_limit=1000.0,
        monthly_drawn=drawn if drawn is not None else tuple(float(10 * (m + 1)) for m in range(12)),
        monthly_arrears_flags=flags,
    )


NO_ARREARS = (False,) * 12


@pytest.mark.domain
class TestBankRecord:
    ########## default definition ##########
    def test_non_defaulter(self) -> None:
        record = make_record(NO_ARREARS)
        assert record.late_payments == 0
        assert not record.is_defaulter
        assert record.exposure_at_default == 0.0

    def test_two_arrears_is_not_default(self) -> None:
        record = make_record((True, True) + (False,) * 10)
        assert not record.is_defaulter

    def test_exposure_at_third_arrears_month(self) -> None:
        flags = (False, True, False, True, True) + (False,) * 7
        record = make_record(flags)
        assert record.is_defaulter
        # 3回目の延滞は5ヶ月目
        assert record.exposure_at_default == 50.0

    ########## delinquency level ##########
    def test_level_ignores_months_not_yet_closed(self) -> None:
        # カード発行 2017-01、延滞は2月・3月・4月分
        record = make_record((True, True, True) + (False,) * 9)
        assert record.delinquency_level(date(2017, 2, 1)) == 0
        assert record.delinquency_level(date(2017, 3, 1)) == 1
        assert record.delinquency_level(date(2017, 4, 20)) == 2
        assert record.delinquency_level(date(2018, 1, 1)) == 3

    def test_level_is_capped(self) -> None:
        record = make_record((True,) * 12)
        assert record.delinquency_level(date(2019, 1, 1)) == 3

    ########## validation ##########
    def test_wrong_length(self) -> None:
        with pytest.raises(ValueError, match="12 months"):
            make_record((False,) * 11)

    def test_drawn_above_limit(self) -> None:
        with pytest.raises(ValueError, match="outside"):
            make_record(NO_ARREARS, drawn=(2000.0,) + (0.0,) * 11)

    def test_non_positive_limit(self) -> None:
        with pytest.raises(ValueError, match="Credit limit"):
            BankRecord("c1", Sociodemographics(), date(2017, 1, 1), 0.0, (0.0,) * 12, NO_ARREARS)

    def test_age_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="Age"):
            Sociodemographics(age=200)

    def test_negative_debit(self) -> None:
        with pytest.raises(ValueError, match="negative"):
            DebitTransaction(booking_date=date(2017, 1, 1), amount=-5.0)
