from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class CompareOutput:
    n_pairs: int
    edges: dict[str, list[str]]
    """信頼水準 → 'winner > loser' の一覧"""
