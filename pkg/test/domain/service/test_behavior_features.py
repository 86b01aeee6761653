import math
from datetime import date, time

import numpy as np
import pytest
from fino_callnet.domain.service.behavior_features import (
    calling_behavior_feature_names,
    calling_behavior_features,
    diversity,
    loyalty,
    sociodemographic_feature_names,
    sociodemographic_features,
)
from fino_callnet.domain.value.bank_record import BankRecord, DebitTransaction, Sociodemographics
from fino_callnet.domain.value.cdr_record import CdrRecord

WINDOW = (date(2017, 1, 1), date(2017, 3, 31))
MONDAY = date(2017, 2, 6)
SATURDAY = date(2017, 2, 11)


@pytest.mark.domain
class TestCallingBehaviorFeatures:
    @pytest.fixture
    def records(self) -> list[CdrRecord]:
        return [
            CdrRecord(MONDAY, time(10, 0), 60, "s", "x"),
            CdrRecord(MONDAY, time(21, 0), 10, "s", "y"),
            CdrRecord(SATURDAY, time(22, 30), 30, "x", "s"),
            # 窓の外
            CdrRecord(date(2017, 4, 3), time(10, 0), 500, "s", "x"),
        ]

    def test_names(self) -> None:
        names = calling_behavior_feature_names()
        assert len(names) == 72
        assert len(set(names)) == 72
        assert "Count IN" in names
        assert "Sunday Duration UD" in names

    def test_cross_tabulation(self, records: list[CdrRecord]) -> None:
        frame = calling_behavior_features(records, WINDOW, ["s", "q"])
        assert frame.shape == (2, 72)
        s = frame.loc["s"]
        assert s["Count OUT"] == 2.0
        assert s["Monday Count OUT"] == 2.0
        assert s["Day Count OUT"] == 1.0
        assert s["Night Count OUT"] == 1.0
        assert s["Duration OUT"] == 70.0
        assert s["Day Duration OUT"] == 60.0
        assert s["Count IN"] == 1.0
        assert s["Weekend Count IN"] == 1.0
        assert s["Weekday Count IN"] == 0.0
        assert s["Saturday Duration IN"] == 30.0
        assert s["Count UD"] == 3.0
        assert s["Duration UD"] == 100.0

    def test_subject_without_calls_is_zero(self, records: list[CdrRecord]) -> None:
        frame = calling_behavior_features(records, WINDOW, ["q"])
        assert (frame.loc["q"] == 0.0).all()

    def test_day_hours(self, records: list[CdrRecord]) -> None:
        frame = calling_behavior_features(records, WINDOW, ["s"], day_hours=(6, 22))
        assert frame.loc["s", "Day Count OUT"] == 2.0
        assert frame.loc["s", "Night Count IN"] == 1.0


@pytest.mark.domain
class TestDiversityAndLoyalty:
    def test_uniform_bins(self) -> None:
        assert diversity([1] * 7, "all") == pytest.approx(1.0)
        assert diversity([1] * 7, "non-empty") == pytest.approx(1.0)

    def test_scopes_differ(self) -> None:
        bins = [2, 1, 0, 0, 0, 0, 0]
        h = -(2 / 3 * math.log(2 / 3) + 1 / 3 * math.log(1 / 3))
        assert diversity(bins, "non-empty") == pytest.approx(h / math.log(2))
        assert diversity(bins, "all") == pytest.approx(h / math.log(7))

    def test_single_bin(self) -> None:
        assert diversity([0, 0, 5, 0, 0, 0, 0]) == 0.0
        assert diversity([0, 0, 5, 0, 0, 0, 0], "all") == 0.0

    def test_empty_bins_are_missing(self) -> None:
        assert math.isnan(diversity([0] * 7))
        assert math.isnan(loyalty([0] * 7))

    def test_loyalty(self) -> None:
        assert loyalty([1] * 7, k=3) == pytest.approx(3 / 7)
        assert loyalty([5, 3, 1, 1, 0, 0, 0], k=2) == pytest.approx(0.8)
        assert loyalty([5, 3, 1, 1, 0, 0, 0], k=7) == pytest.approx(1.0)

    def test_invalid_bins(self) -> None:
        with pytest.raises(ValueError, match="7 non-negative"):
            diversity([1, 2, 3])


def make_customer(
    customer_id: str,
    transactions: tuple[DebitTransaction, ...] = (),
    demographics: Sociodemographics = Sociodemographics(),
) -> BankRecord:
    return BankRecord(
        customer_id=customer_id,
        sociodemographics=demographics,
        card_issue_date=date(2017, 4, 10),
        credit_limit=2500.0,
        monthly_drawn=(0.0,) * 12,
        monthly_arrears_flags=(False,) * 12,
        debit_transactions=transactions,
    )


@pytest.mark.domain
class TestSociodemographicFeatures:
    DEBIT_WINDOW = (date(2017, 3, 1), date(2017, 3, 31))

    def test_names(self) -> None:
        names = sociodemographic_feature_names()
        assert len(names) == 35
        assert len(set(names)) == 35

    def test_features(self) -> None:
        record = make_customer(
            "c1",
            transactions=(
                DebitTransaction(date(2017, 3, 6), 10.0),
                DebitTransaction(date(2017, 3, 6), 30.0),
                DebitTransaction(date(2017, 3, 7), 20.0),
                DebitTransaction(date(2017, 2, 28), 100.0),
            ),
            demographics=Sociodemographics(age=None, marital_status=" Married", postcode="3150"),
        )
        row = sociodemographic_features([record], self.DEBIT_WINDOW).loc["c1"]
        assert math.isnan(row["Age"])
        assert row["Credit Limit"] == 2500.0
        assert row["Marital Married"] == 1.0
        assert row["Marital Single"] == 0.0
        assert row["Postcode Region 3"] == 1.0
        assert row["Postcode Region 0"] == 0.0
        assert row["Amount Spent"] == 60.0
        assert row["Mean Spent p. Day"] == pytest.approx(60.0 / 31)
        assert row["Number of Transactions"] == 3.0
        assert row["Mean Transaction"] == 20.0
        assert row["Max Transaction"] == 30.0
        assert row["Active Days"] == 2.0
        assert row["Monday Amount Spent"] == 40.0
        assert row["Tuesday Amount Spent"] == 20.0
        assert row["Diversity-NE Value"] == pytest.approx(diversity([40, 20, 0, 0, 0, 0, 0], "non-empty"))
        assert row["Loyalty-Number"] == 1.0

    def test_missing_values_are_nan(self) -> None:
        frame = sociodemographic_features([make_customer("c2")], self.DEBIT_WINDOW)
        row = frame.loc["c2"]
        assert np.isnan(row[["Marital Single", "Postcode Region 1", "Diversity-ALL Number", "Loyalty-Value"]]).all()
        assert row["Amount Spent"] == 0.0
        assert row["Active Days"] == 0.0
