"""Sparse term vectors shared by items, queries, communities, and concepts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping


@dataclass(frozen=True)
class TermVector:
    """Sparse term -> weight map with a cached Euclidean norm.

    Weights are nonnegative and zero-weight entries are never stored; treat
    instances as immutable once built.
    """

    entries: dict[str, float]
    norm: float

    @classmethod
    def from_entries(cls, entries: Mapping[str, float]) -> "TermVector":
        kept: dict[str, float] = {}
        for term, weight in entries.items():
            w = float(weight)
            if w < 0.0:
                raise ValueError(f"negative weight {w} for term {term!r}")
            if w != 0.0:
                kept[term] = w
        norm = math.sqrt(math.fsum(w * w for w in kept.values()))
        return cls(kept, norm)

    @classmethod
    def unit_terms(cls, terms: Iterable[str]) -> "TermVector":
        """Vector with weight 1.0 on each distinct term (query-side shape)."""
        return cls.from_entries({t: 1.0 for t in terms})

    def get(self, term: str) -> float:
        return self.entries.get(term, 0.0)

    def weight_sum(self) -> float:
        return math.fsum(self.entries.values())

    def unit_sum(self) -> "TermVector":
        """Rescale so weights sum to 1; empty vectors stay empty."""
        total = self.weight_sum()
        if total == 0.0:
            return self
        return TermVector.from_entries({t: w / total for t, w in self.entries.items()})

    def top_terms(self, n: int) -> list[str]:
        """The n highest-weight terms, ties broken lexicographically."""
        ranked = sorted(self.entries.items(), key=lambda kv: (-kv[1], kv[0]))
        return [t for t, _ in ranked[:n]]

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


def cosine(a: TermVector, b: TermVector) -> float:
    """Cosine similarity; defined as 0.0 when either vector has zero norm."""
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    if len(b.entries) < len(a.entries):
        a, b = b, a
    dot = math.fsum(w * b.entries.get(t, 0.0) for t, w in a.entries.items())
    return dot / (a.norm * b.norm)
