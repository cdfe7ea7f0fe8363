from __future__ import annotations

import json
from collections import Counter
from decimal import Decimal
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from src.schema.mapping import Mapping, MappingSet
from src.schema.predicates import predicate_tier
from src.schema.slots import format_decimal


UNSET = "(none)"


class MappingStatistics(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: int
    negated_rows: int
    rows_with_confidence: int
    mean_confidence: Optional[Decimal] = None
    by_predicate: Dict[str, int] = {}
    by_tier: Dict[str, int] = {}
    by_match_type: Dict[str, int] = {}
    by_source_pair: Dict[str, int] = {}


def _sorted_counts(counter: Counter) -> Dict[str, int]:
    return dict(sorted(counter.items()))


class StatsAggregator:
    def aggregate(self, mapping_set: MappingSet) -> MappingStatistics:
        mappings = mapping_set.mappings
        confidences = [m.confidence for m in mappings if m.confidence is not None]
        mean = None
        if confidences:
            mean = Decimal(format_decimal(sum(confidences) / len(confidences)))

        return MappingStatistics(
            rows=len(mappings),
            negated_rows=sum(1 for m in mappings if not m.is_plain_assertion),
            rows_with_confidence=len(confidences),
            mean_confidence=mean,
            by_predicate=_sorted_counts(Counter(self._predicate(m) for m in mappings)),
            by_tier=_sorted_counts(Counter(self._tier(m) for m in mappings)),
            by_match_type=_sorted_counts(Counter(self._match_type(m) for m in mappings)),
            by_source_pair=_sorted_counts(Counter(
                f"{m.subject_source or UNSET} -> {m.object_source or UNSET}" for m in mappings
            )),
        )

    @staticmethod
    def _predicate(mapping: Mapping) -> str:
        return str(mapping.predicate_id) if mapping.predicate_id else UNSET

    @staticmethod
    def _tier(mapping: Mapping) -> str:
        return predicate_tier(mapping.predicate_id).value if mapping.predicate_id else UNSET

    @staticmethod
    def _match_type(mapping: Mapping) -> str:
        if mapping.match_type is not None:
            return mapping.match_type.value
        return mapping.unparsed.get("match_type", UNSET)


def render_stats_text(stats: MappingStatistics) -> str:
    lines: List[str] = [
        f"rows\t{stats.rows}",
        f"negated_rows\t{stats.negated_rows}",
        f"rows_with_confidence\t{stats.rows_with_confidence}",
        f"mean_confidence\t{stats.mean_confidence if stats.mean_confidence is not None else 'n/a'}",
    ]
    for title, counts in (
        ("predicate", stats.by_predicate),
        ("tier", stats.by_tier),
        ("match_type", stats.by_match_type),
        ("source_pair", stats.by_source_pair),
    ):
        lines.extend(f"{title}\t{name}\t{count}" for name, count in counts.items())
    return "\n".join(lines) + "\n"


def render_stats_json(stats: MappingStatistics) -> str:
    return json.dumps(stats.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"
