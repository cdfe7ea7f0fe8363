from __future__ import annotations

from typing import Dict, Optional, Tuple

from src.schema.enums import PredicateTier


E, C, R, B, N = (
    PredicateTier.Exact,
    PredicateTier.Close,
    PredicateTier.Related,
    PredicateTier.Broad,
    PredicateTier.Narrow,
)

WALKABLE_TIERS = (E, C, R, B, N)
SYMMETRIC_TIERS = frozenset({E, C, R})

# (first hop, second hop) -> tier of the two-hop path; pairs not listed do not compose
_TABLE: Dict[Tuple[PredicateTier, PredicateTier], PredicateTier] = {
    (C, C): R,
    (C, B): R,
    (C, N): R,
    (B, C): R,
    (N, C): R,
    (B, B): B,
    (N, N): N,
}


def compose(first: PredicateTier, second: PredicateTier) -> Optional[PredicateTier]:
    """Tier of a path `first` then `second`, or None when the two do not compose."""
    if PredicateTier.Unknown in (first, second):
        return None
    if first == E:
        return second
    if second == E:
        return first
    return _TABLE.get((first, second))
