"""Result containers shared by all metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from subscore.tokens import NormalizationMode
from subscore.ter import EditCounts


@dataclass(frozen=True)
class NGramStats:
    """Clipped n-gram matches and totals per order (index 0 is order 1)."""

    matches: tuple[int, ...]
    hyp_totals: tuple[int, ...]
    ref_totals: tuple[int, ...]
    hyp_length: int
    ref_length: int

    def __post_init__(self):
        for matched, total in zip(self.matches, self.hyp_totals):
            if matched > total:
                raise ValueError("more n-gram matches than hypothesis n-grams")

    def __add__(self, other: "NGramStats") -> "NGramStats":
        return NGramStats(
            tuple(a + b for a, b in zip(self.matches, other.matches)),
            tuple(a + b for a, b in zip(self.hyp_totals, other.hyp_totals)),
            tuple(a + b for a, b in zip(self.ref_totals, other.ref_totals)),
            self.hyp_length + other.hyp_length,
            self.ref_length + other.ref_length,
        )

    def as_dict(self) -> dict:
        return {
            "matches": list(self.matches),
            "hyp_totals": list(self.hyp_totals),
            "ref_totals": list(self.ref_totals),
            "hyp_length": self.hyp_length,
            "ref_length": self.ref_length,
        }


@dataclass
class MetricScore:
    metric: str
    value: float
    mode: Optional[NormalizationMode] = None
    segment_level: str = "file"
    details: Union[EditCounts, NGramStats, dict, None] = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"{self.metric}: invalid score {self.value}")

    def details_dict(self) -> dict:
        if self.details is None:
            return {}
        if isinstance(self.details, dict):
            return dict(self.details)
        return self.details.as_dict()
