from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class SynthesizeOutput:
    written: dict[str, str]
    """ファイルの種類 → 保存先"""
    n_calls: int
    n_bank_customers: int
    n_subjects: int
    realized_default_rate: float
