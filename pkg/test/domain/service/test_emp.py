from decimal import Decimal

import numpy as np
import pytest
from fino_callnet.domain.error import DataError
from fino_callnet.domain.service.emp import (
    emp,
    emp_oracle,
    estimate_lambda_distribution,
    fraction_to_cutoff,
    model_profit,
    no_model_profit,
    profit_of_decisions,
    roc_convex_hull,
)
from fino_callnet.domain.value.emp import EmpParams, EmpReport, LoanOutcome
from fino_callnet.domain.value.scored_dataset import ScoredDataset


def scored(score: np.ndarray, y: np.ndarray) -> ScoredDataset:
    return ScoredDataset(
        subject_ids=tuple(f"s{i}" for i in range(len(y))),
        y=np.asarray(y, dtype=np.bool_),
        score=np.asarray(score, dtype=np.float64),
    )


def random_scored(seed: int, n: int = 400, signal: float = 1.2) -> ScoredDataset:
    rng = np.random.default_rng(seed)
    y = rng.random(n) < 0.25
    score = 1.0 / (1.0 + np.exp(-(signal * y + rng.normal(size=n))))
    return scored(np.round(score, 3), y)


@pytest.mark.domain
class TestEmp:
    @pytest.mark.parametrize(
        "params",
        [
            EmpParams(roi=0.2644, lgd=0.8, p0=0.0, p1=0.0),
            EmpParams(roi=0.05, lgd=0.8, p0=0.0, p1=0.3),
            EmpParams(roi=0.1, lgd=0.5, p0=0.0, p1=0.0),
            EmpParams(roi=1.0, lgd=1.0, p0=0.0, p1=0.5),
        ],
    )
    @pytest.mark.parametrize("seed", [0, 1])
    def test_matches_grid_oracle(self, params: EmpParams, seed: int) -> None:
        data = random_scored(seed)
        exact = emp(data, params)
        oracle = emp_oracle(data, params, grid_size=10_000)
        assert exact.emp == pytest.approx(oracle.emp, abs=1e-3)
        assert exact.emp_fraction == pytest.approx(oracle.emp_fraction, abs=1e-3)

    def test_matches_grid_oracle_with_zero_loss_mass(self) -> None:
        # λ=0 では拒否しても利益が変わらないので、EMP の値だけを比べる
        data = random_scored(3)
        params = EmpParams(roi=0.05, lgd=0.8, p0=0.4, p1=0.2)
        assert emp(data, params).emp == pytest.approx(emp_oracle(data, params).emp, abs=1e-3)

    def test_perfect_classifier(self) -> None:
        y = np.array([True] * 25 + [False] * 75)
        score = np.where(y, 0.9, 0.1)
        result = emp(scored(score, y), EmpParams(roi=0.05, lgd=0.8))
        # 全てのデフォルトだけを拒否: π0·E[λ]
        assert result.emp == pytest.approx(0.25 * 0.4)
        assert result.emp_fraction == pytest.approx(0.25)
        assert result.params.pi0 == pytest.approx(0.25)

    def test_uninformative_classifier(self) -> None:
        y = np.array([True] * 10 + [False] * 90)
        result = emp(scored(np.full(100, 0.3), y), EmpParams(roi=0.2644, lgd=0.8))
        assert result.emp == pytest.approx(0.0)
        assert result.emp_fraction == pytest.approx(0.0)

    def test_emp_is_non_negative(self) -> None:
        for seed in range(3):
            assert emp(random_scored(seed, signal=-1.0), EmpParams()).emp >= 0.0

    def test_single_class(self) -> None:
        with pytest.raises(DataError, match="both defaulters"):
            emp(scored(np.array([0.1, 0.2]), np.array([False, False])), EmpParams())

    def test_oracle_grid_too_coarse(self) -> None:
        with pytest.raises(ValueError, match="at least 1000"):
            emp_oracle(random_scored(0), EmpParams(), grid_size=100)


@pytest.mark.domain
class TestConvexHull:
    def test_hull_drops_concave_points(self) -> None:
        f1 = np.array([0.0, 0.1, 0.5, 0.6, 1.0])
        f0 = np.array([0.0, 0.5, 0.6, 0.9, 1.0])
        xs, ys = roc_convex_hull(f1, f0)
        assert xs.tolist() == [0.0, 0.1, 0.6, 1.0]
        assert ys.tolist() == [0.0, 0.5, 0.9, 1.0]


@pytest.mark.domain
class TestFractionToCutoff:
    SCORES = np.array([0.1, 0.2, 0.3, 0.4])

    @pytest.mark.parametrize(("fraction", "expected"), [(0.5, 0.3), (1.0, 0.1), (0.3, 0.4), (0.7, 0.2)])
    def test_nearest_fraction(self, fraction: float, expected: float) -> None:
        assert fraction_to_cutoff(self.SCORES, fraction) == expected

    def test_zero_rejects_nobody(self) -> None:
        cutoff = fraction_to_cutoff(self.SCORES, 0.0)
        assert cutoff > 0.4
        assert not np.any(self.SCORES >= cutoff)

    def test_tie_prefers_fewer_rejections(self) -> None:
        assert fraction_to_cutoff(self.SCORES, 0.375) == 0.4

    def test_tied_scores(self) -> None:
        assert fraction_to_cutoff(np.array([0.5, 0.1, 0.5, 0.1]), 0.5) == 0.5

    def test_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="emp_fraction"):
            fraction_to_cutoff(self.SCORES, 1.5)

    def test_empty(self) -> None:
        with pytest.raises(DataError, match="empty score vector"):
            fraction_to_cutoff(np.zeros(0), 0.5)


@pytest.mark.domain
class TestProfit:
    GOOD = LoanOutcome.of(principal=1000, ead=0, lgd=0.8, is_defaulter=False)
    BAD = LoanOutcome.of(principal=1000, ead=400, lgd=0.8, is_defaulter=True)

    @pytest.mark.parametrize(
        ("loan", "rejected", "expected"),
        [
            ("GOOD", False, Decimal("50")),
            ("GOOD", True, Decimal("-50")),
            ("BAD", False, Decimal("-320")),
            ("BAD", True, Decimal("0")),
        ],
    )
    def test_single_decision(self, loan: str, rejected: bool, expected: Decimal) -> None:
        total = profit_of_decisions(np.array([rejected]), [getattr(self, loan)], roi=0.05)
        assert total == expected

    def test_cutoff_above_every_score_is_no_model(self) -> None:
        data = scored(np.array([0.9, 0.2, 0.6]), np.array([True, False, False]))
        loans = [self.BAD, self.GOOD, self.GOOD]
        params = EmpParams(roi=0.05)
        assert no_model_profit(data, loans, params) == Decimal("-220")
        assert model_profit(data, loans, params, cutoff=0.95) == no_model_profit(data, loans, params)
        # 0.5 以上を拒否: デフォルトと1件の非デフォルト
        assert model_profit(data, loans, params, cutoff=0.5) == Decimal("0")

    def test_misaligned_loans(self) -> None:
        data = scored(np.array([0.9, 0.2]), np.array([True, False]))
        with pytest.raises(DataError, match="row 1"):
            model_profit(data, [self.BAD, self.BAD], EmpParams(), cutoff=0.5)
        with pytest.raises(DataError, match="1 loans for 2"):
            no_model_profit(data, [self.BAD], EmpParams())


@pytest.mark.domain
class TestLambdaDistribution:
    def test_point_masses(self) -> None:
        loans = [
            LoanOutcome.of(1000, 0, 0.8, True),
            LoanOutcome.of(1000, 1000, 0.8, True),
            LoanOutcome.of(1000, 500, 0.8, True),
            LoanOutcome.of(1000, 1000, 0.8, True),
            LoanOutcome.of(1000, 0, 0.8, False),
        ]
        distribution = estimate_lambda_distribution(loans, lgd=0.8, bins=4)
        assert distribution.n_defaulters == 4
        assert distribution.p0 == pytest.approx(0.25)
        assert distribution.p1 == pytest.approx(0.5)
        assert int(distribution.counts.sum()) == 4

    def test_no_defaulters(self) -> None:
        distribution = estimate_lambda_distribution([LoanOutcome.of(1000, 0, 0.8, False)], lgd=0.8)
        assert distribution.p0 == distribution.p1 == 0.0
        assert distribution.n_defaulters == 0


@pytest.mark.domain
class TestEmpParams:
    def test_mean_lambda(self) -> None:
        assert EmpParams(lgd=0.8, p0=0.2, p1=0.3).mean_lambda == pytest.approx(0.3 * 0.8 + 0.5 * 0.4)

    def test_with_overrides(self) -> None:
        params = EmpParams(roi=0.05).with_overrides(roi=0.3)
        assert params.roi == 0.3
        assert params.lgd == 0.8

    @pytest.mark.parametrize(
        ("changes", "message"),
        [
            ({"roi": 0.0}, "ROI"),
            ({"lgd": 1.5}, "LGD"),
            ({"p0": 0.7, "p1": 0.5}, "point masses"),
            ({"pi0": -0.1}, "Prior"),
        ],
    )
    def test_invalid(self, changes: dict[str, float], message: str) -> None:
        with pytest.raises(ValueError, match=message):
            EmpParams(**changes)

    def test_loan_ead_above_principal(self) -> None:
        with pytest.raises(ValueError, match="EAD"):
            LoanOutcome.of(1000, 1200, 0.8, True)


@pytest.mark.domain
class TestEmpReport:
    def test_to_dict_is_json_ready(self) -> None:
        report = EmpReport(
            model_name="H-forest",
            auc=0.71,
            emp=np.float64(0.012),
            emp_fraction=0.1,
            implied_cutoff=0.62,
            model_profit=Decimal("1200.50"),
            no_model_profit=Decimal("-300"),
        )
        data = report.to_dict()
        assert data["model_profit"] == "1200.50"
        assert data["no_model_profit"] == "-300"
        assert type(data["emp"]) is float
        assert list(data) == [
            "model_name", "auc", "emp", "emp_fraction", "implied_cutoff", "model_profit", "no_model_profit"
        ]
