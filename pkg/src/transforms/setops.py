"""
Set algebra over mapping sets: merge, filter, diff and invert.

All operations return new values; inputs are never modified.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from decimal import Decimal
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict

from src.schema.curie import Curie, PrefixMap, merge_prefix_maps
from src.schema.enums import MatchType, PrefixConflictPolicy, PredicateTier
from src.schema.errors import ConfigError
from src.schema.mapping import HeaderValue, Mapping, MappingKey, MappingSet
from src.schema.predicates import invert_predicate, predicate_tier
from src.schema.slots import SET_SLOTS, SWAPPED_SLOT_PAIRS, render_value


logger = logging.getLogger(__name__)


def _confidence_rank(mapping: Mapping) -> Tuple[int, Decimal]:
    # an absent confidence ranks below every present one
    if mapping.confidence is None:
        return (0, Decimal(0))
    return (1, mapping.confidence)


def _rendered_set_slot(mapping_set: MappingSet, slot: str) -> Optional[str]:
    if slot in mapping_set.unparsed:
        return mapping_set.unparsed[slot]
    return render_value(getattr(mapping_set, slot))


def merge(
    sets: Sequence[MappingSet],
    policy: PrefixConflictPolicy = PrefixConflictPolicy.error,
    mapping_set_id: Optional[str] = None,
    license: Optional[str] = None,
) -> MappingSet:
    """
    Merge mapping sets into one.

    Duplicate assertions (same MappingKey) keep the row with the higher
    confidence; ties keep the earlier input. Set-level slots with equal values
    collapse; differing values move to `set_extensions` as `<slot>_<n>` where n
    is the 1-based input position.

    Raises:
        PrefixConflict: under the error policy when a prefix is bound twice.
        ConfigError: when no set is given.
    """
    if not sets:
        raise ConfigError("merge needs at least one mapping set")

    curie_map = PrefixMap()
    for mapping_set in sets:
        curie_map = merge_prefix_maps(curie_map, mapping_set.curie_map, policy)

    rows: Dict[MappingKey, Mapping] = {}
    replaced = 0
    for mapping_set in sets:
        for mapping in mapping_set.mappings:
            key = mapping.key
            kept = rows.get(key)
            if kept is None:
                rows[key] = mapping
            elif _confidence_rank(mapping) > _confidence_rank(kept):
                rows[key] = mapping
                replaced += 1

    fields: Dict[str, object] = {}
    unparsed: Dict[str, str] = {}
    set_extensions: Dict[str, HeaderValue] = {}
    for slot in SET_SLOTS:
        if slot.name == "mapping_set_id":
            continue
        present = [
            (position, mapping_set, _rendered_set_slot(mapping_set, slot.name))
            for position, mapping_set in enumerate(sets, start=1)
        ]
        present = [item for item in present if item[2] is not None]
        if not present:
            continue
        if len({rendered for _, _, rendered in present}) == 1:
            _, source, _ = present[0]
            if slot.name in source.unparsed:
                unparsed[slot.name] = source.unparsed[slot.name]
            else:
                fields[slot.name] = getattr(source, slot.name)
            continue
        logger.warning(f"Set-level slot differs between inputs: slot={slot.name}, inputs={len(present)}")
        for position, _, rendered in present:
            set_extensions[f"{slot.name}_{position}"] = rendered

    for mapping_set in sets:
        for key, value in mapping_set.set_extensions.items():
            set_extensions.setdefault(key, value)

    if mapping_set_id is not None:
        fields["mapping_set_id"] = mapping_set_id
    if license is not None:
        fields["license"] = license
        unparsed.pop("license", None)

    logger.info(
        f"Merged mapping sets: inputs={len(sets)}, rows={len(rows)}, "
        f"replaced_by_confidence={replaced}, prefixes={len(curie_map)}"
    )
    return MappingSet(
        curie_map=curie_map,
        mappings=tuple(rows.values()),
        set_extensions=set_extensions,
        unparsed=unparsed,
        **fields,
    )


class FilterCriteria(BaseModel):
    """
    Conjunction of optional clauses. A clause left as None is not applied;
    an empty set clause admits nothing.
    """

    model_config = ConfigDict(frozen=True)

    min_confidence: Optional[Decimal] = None
    predicates: Optional[FrozenSet[Curie]] = None
    tiers: Optional[FrozenSet[PredicateTier]] = None
    match_types: Optional[FrozenSet[MatchType]] = None
    subject_prefixes: Optional[FrozenSet[str]] = None
    object_prefixes: Optional[FrozenSet[str]] = None
    exclude_negated: bool = False

    def conjoin(self, other: "FilterCriteria") -> "FilterCriteria":
        """Criteria admitting exactly the rows admitted by both."""

        def both(a, b):
            if a is None:
                return b
            if b is None:
                return a
            return a & b

        if self.min_confidence is None:
            min_confidence = other.min_confidence
        elif other.min_confidence is None:
            min_confidence = self.min_confidence
        else:
            min_confidence = max(self.min_confidence, other.min_confidence)

        return FilterCriteria(
            min_confidence=min_confidence,
            predicates=both(self.predicates, other.predicates),
            tiers=both(self.tiers, other.tiers),
            match_types=both(self.match_types, other.match_types),
            subject_prefixes=both(self.subject_prefixes, other.subject_prefixes),
            object_prefixes=both(self.object_prefixes, other.object_prefixes),
            exclude_negated=self.exclude_negated or other.exclude_negated,
        )


class FilterReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    kept: int
    dropped: int
    missing_confidence: int  # rows dropped by min_confidence because they carry no confidence


def _admits(criteria: FilterCriteria, mapping: Mapping) -> bool:
    if criteria.min_confidence is not None:
        if mapping.confidence is None or mapping.confidence < criteria.min_confidence:
            return False
    if criteria.predicates is not None and mapping.predicate_id not in criteria.predicates:
        return False
    if criteria.tiers is not None:
        if mapping.predicate_id is None or predicate_tier(mapping.predicate_id) not in criteria.tiers:
            return False
    if criteria.match_types is not None and mapping.match_type not in criteria.match_types:
        return False
    if criteria.subject_prefixes is not None:
        if mapping.subject_id is None or mapping.subject_id.prefix not in criteria.subject_prefixes:
            return False
    if criteria.object_prefixes is not None:
        if mapping.object_id is None or mapping.object_id.prefix not in criteria.object_prefixes:
            return False
    if criteria.exclude_negated and not mapping.is_plain_assertion:
        return False
    return True


def filter_set(mapping_set: MappingSet, criteria: FilterCriteria) -> Tuple[MappingSet, FilterReport]:
    """Keep the rows satisfying every clause, in their original order."""
    kept: List[Mapping] = []
    missing_confidence = 0
    for mapping in mapping_set.mappings:
        if _admits(criteria, mapping):
            kept.append(mapping)
        elif criteria.min_confidence is not None and mapping.confidence is None:
            missing_confidence += 1

    report = FilterReport(
        kept=len(kept),
        dropped=len(mapping_set.mappings) - len(kept),
        missing_confidence=missing_confidence,
    )
    logger.info(
        f"Filtered mapping set: kept={report.kept}, dropped={report.dropped}, "
        f"missing_confidence={report.missing_confidence}"
    )
    return mapping_set.model_copy(update={"mappings": tuple(kept)}), report


class PredicateConflict(BaseModel):
    model_config = ConfigDict(frozen=True)

    subject_id: Curie
    object_id: Curie
    predicate_left: Curie
    predicate_right: Curie


class DiffReport(BaseModel):
    """Key-level comparison of two sets; metadata differences are not reported."""

    model_config = ConfigDict(frozen=True)

    common: List[MappingKey] = []
    only_left: List[MappingKey] = []
    only_right: List[MappingKey] = []
    predicate_conflicts: List[PredicateConflict] = []


def _predicates_by_pair(mappings: Iterable[Mapping]) -> Dict[Tuple[Curie, Curie], Set[Curie]]:
    grouped: Dict[Tuple[Curie, Curie], Set[Curie]] = defaultdict(set)
    for m in mappings:
        if m.subject_id is not None and m.object_id is not None and m.predicate_id is not None:
            grouped[(m.subject_id, m.object_id)].add(m.predicate_id)
    return grouped


def diff(left: MappingSet, right: MappingSet) -> DiffReport:
    left_keys = {m.key for m in left.mappings}
    right_keys = {m.key for m in right.mappings}

    def ordered(keys: Set[MappingKey]) -> List[MappingKey]:
        return sorted(keys, key=MappingKey.sort_key)

    left_pairs = _predicates_by_pair(left.mappings)
    right_pairs = _predicates_by_pair(right.mappings)
    conflicts = []
    for pair in sorted(left_pairs.keys() & right_pairs.keys(), key=lambda p: (str(p[0]), str(p[1]))):
        only_l = sorted(left_pairs[pair] - right_pairs[pair], key=str)
        only_r = sorted(right_pairs[pair] - left_pairs[pair], key=str)
        for predicate_left in only_l:
            for predicate_right in only_r:
                conflicts.append(PredicateConflict(
                    subject_id=pair[0],
                    object_id=pair[1],
                    predicate_left=predicate_left,
                    predicate_right=predicate_right,
                ))

    report = DiffReport(
        common=ordered(left_keys & right_keys),
        only_left=ordered(left_keys - right_keys),
        only_right=ordered(right_keys - left_keys),
        predicate_conflicts=conflicts,
    )
    logger.info(
        f"Diffed mapping sets: common={len(report.common)}, only_left={len(report.only_left)}, "
        f"only_right={len(report.only_right)}, conflicts={len(conflicts)}"
    )
    return report


def _invert_row(mapping: Mapping, predicate: Curie) -> Mapping:
    update: Dict[str, object] = {"predicate_id": predicate}
    unparsed = dict(mapping.unparsed)
    for subject_slot, object_slot in SWAPPED_SLOT_PAIRS:
        update[subject_slot] = getattr(mapping, object_slot)
        update[object_slot] = getattr(mapping, subject_slot)
        subject_raw = unparsed.pop(subject_slot, None)
        object_raw = unparsed.pop(object_slot, None)
        if object_raw is not None:
            unparsed[subject_slot] = object_raw
        if subject_raw is not None:
            unparsed[object_slot] = subject_raw
    update["unparsed"] = unparsed
    return mapping.model_copy(update=update)


def invert(mapping_set: MappingSet) -> Tuple[MappingSet, List[MappingKey]]:
    """
    Swap subject and object of every row whose predicate has an inverse.

    Rows without an invertible predicate are left out and their keys returned.
    """
    inverted: List[Mapping] = []
    dropped: List[MappingKey] = []
    for mapping in mapping_set.mappings:
        inverse = invert_predicate(mapping.predicate_id) if mapping.predicate_id is not None else None
        if inverse is None:
            dropped.append(mapping.key)
            continue
        inverted.append(_invert_row(mapping, inverse))

    logger.info(f"Inverted mapping set: inverted={len(inverted)}, dropped={len(dropped)}")
    return mapping_set.model_copy(update={"mappings": tuple(inverted)}), dropped
