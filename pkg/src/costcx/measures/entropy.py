"""Shannon entropy of symbol frequency tables."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from ..errors import DomainError


@dataclass(frozen=True)
class SymbolDistribution:
    counts: Mapping[Hashable, int]
    total: int = field(init=False)

    def __post_init__(self):
        for sym, c in self.counts.items():
            if int(c) != c or c < 0:
                raise DomainError(f"count for {sym!r} must be a non-negative integer, got {c!r}")
        object.__setattr__(self, "total", int(sum(self.counts.values())))

    @classmethod
    def from_tokens(cls, tokens: Iterable[Hashable]) -> "SymbolDistribution":
        return cls(dict(Counter(tokens)))

    @classmethod
    def from_text(cls, text: str, lowercase: bool = False) -> "SymbolDistribution":
        """Whitespace tokenization, case-sensitive unless `lowercase`."""
        if lowercase:
            text = text.lower()
        return cls.from_tokens(text.split())

    @property
    def n_symbols(self) -> int:
        return sum(1 for c in self.counts.values() if c > 0)


def shannon_entropy(dist: SymbolDistribution | Mapping[Hashable, int]) -> float:
    """Average information per symbol, in bits.

    Zero-count symbols contribute nothing (0 log 0 = 0).
    """
    if not isinstance(dist, SymbolDistribution):
        dist = SymbolDistribution(dist)
    if dist.total < 1:
        raise DomainError("entropy of an empty distribution is undefined")
    total = dist.total
    positive = [c for c in dist.counts.values() if c > 0]
    if len(set(positive)) == 1:
        return math.log2(len(positive)) if len(positive) > 1 else 0.0
    terms = []
    for c in dist.counts.values():
        if c > 0:
            p = c / total
            terms.append(-p * math.log2(p))
    h = math.fsum(terms)
    # rounding must not reach the uniform maximum
    return min(max(h, 0.0), math.nextafter(math.log2(len(positive)), 0.0))
