from .seed import stage_int, stage_rng, stage_seed
from .timeframe import Timeframe

__all__ = ["Timeframe", "stage_int", "stage_rng", "stage_seed"]
