from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class ExposureSummary:
    timeframe_id: str
    mode: str
    method: str
    seed_criterion: str
    n_seeds: int
    iterations_run: int
    residual: float
    total: float
    cutoff: float
    n_high_risk: int


@dataclass(frozen=True, slots=True)
class PropagateOutput:
    exposures: list[ExposureSummary]
