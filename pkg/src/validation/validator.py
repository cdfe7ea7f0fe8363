from __future__ import annotations

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.schema.curie import Curie, resolves
from src.schema.diagnostic import Diagnostic, RuleConfig, make_diagnostic
from src.schema.enums import CardinalityPolicy, PredicateTier, PreprocessingToken
from src.schema.mapping import Mapping, MappingKey, MappingSet
from src.schema.predicates import predicate_tier
from src.schema.slots import (
    CURIE_SLOTS,
    DATE_SLOTS,
    DECIMAL_SLOTS,
    MAPPING_SLOT_INDEX,
    PROVENANCE_ID_SLOTS,
    REQUIRED_SLOTS,
    SET_SLOT_INDEX,
    SlotKind,
)


logger = logging.getLogger(__name__)


RECOMMENDED_ID_PREFIXES = frozenset({"orcid", "ror", "wikidata"})

_PREPROCESSING_TOKENS = frozenset(t.value for t in PreprocessingToken)

# unparsed slot kind -> diagnostic code
_UNPARSED_CODES: Dict[SlotKind, str] = {
    SlotKind.curie: "E008",
    SlotKind.match_type: "E005",
    SlotKind.date: "E006",
    SlotKind.modifier: "E010",
    SlotKind.decimal: "E012",
}


class _Findings:
    def __init__(self, config: RuleConfig):
        self.config = config
        self.items: List[Diagnostic] = []

    def add(self, code: str, message: str, row: Optional[int] = None, slot: Optional[str] = None) -> None:
        self.items.append(make_diagnostic(code, message, row=row, slot=slot, config=self.config))


def _check_unparsed(mapping: Mapping, row: int, findings: _Findings) -> None:
    for slot_name, raw in mapping.unparsed.items():
        slot = MAPPING_SLOT_INDEX.get(slot_name)
        code = _UNPARSED_CODES.get(slot.kind) if slot else None
        if code:
            findings.add(code, f"cannot read {slot_name} value '{raw}'", row=row, slot=slot_name)


def _check_prefixes(
    curies: List[Tuple[str, Curie]],
    mapping_set: MappingSet,
    findings: _Findings,
    row: Optional[int] = None,
) -> None:
    reported: Set[Tuple[str, str]] = set()
    for slot, curie in curies:
        if (slot, curie.prefix) in reported or resolves(curie.prefix, mapping_set.curie_map):
            continue
        reported.add((slot, curie.prefix))
        findings.add("E002", f"prefix '{curie.prefix}' of {curie} is not declared", row=row, slot=slot)


def _check_provenance_ids(curies: List[Tuple[str, Curie]], findings: _Findings, row: Optional[int] = None) -> None:
    for slot, curie in curies:
        if slot in PROVENANCE_ID_SLOTS and curie.prefix not in RECOMMENDED_ID_PREFIXES:
            findings.add(
                "E013",
                f"{curie} is not an ORCID, ROR or Wikidata identifier",
                row=row,
                slot=slot,
            )


def _check_row(mapping: Mapping, row: int, mapping_set: MappingSet, findings: _Findings) -> None:
    for slot in REQUIRED_SLOTS:
        if getattr(mapping, slot) is None and slot not in mapping.unparsed:
            findings.add("E001", f"required slot {slot} is empty", row=row, slot=slot)

    _check_unparsed(mapping, row, findings)

    curies = mapping.curies()
    _check_prefixes(curies, mapping_set, findings, row=row)
    _check_provenance_ids(curies, findings, row=row)

    for slot in DECIMAL_SLOTS:
        value = getattr(mapping, slot)
        if value is not None and not (0 <= value <= 1):
            findings.add("E003", f"{slot} {value} is outside [0,1]", row=row, slot=slot)

    if mapping.predicate_id is not None and predicate_tier(mapping.predicate_id) == PredicateTier.Unknown:
        findings.add(
            "E004",
            f"predicate {mapping.predicate_id} is not in the recommended vocabulary",
            row=row,
            slot="predicate_id",
        )

    if mapping.semantic_similarity_score is not None and not mapping.semantic_similarity_measure:
        findings.add(
            "E009",
            "semantic_similarity_score given without semantic_similarity_measure",
            row=row,
            slot="semantic_similarity_score",
        )

    for token in mapping.preprocessing:
        if token not in _PREPROCESSING_TOKENS:
            findings.add("E014", f"unknown preprocessing token '{token}'", row=row, slot="preprocessing")

    if mapping.subject_id is not None and mapping.subject_id == mapping.object_id:
        findings.add("E015", f"subject and object are both {mapping.subject_id}", row=row, slot="object_id")


def _check_duplicates(mapping_set: MappingSet, rows: Sequence[int], findings: _Findings) -> None:
    first_row: Dict[MappingKey, int] = {}
    for row, mapping in zip(rows, mapping_set.mappings):
        key = mapping.key
        if key.subject_id is None or key.predicate_id is None or key.object_id is None:
            continue
        if "predicate_modifier" in mapping.unparsed:
            continue
        if key in first_row:
            findings.add("E007", f"duplicate of row {first_row[key]}: {key}", row=row)
        else:
            first_row[key] = row


def _check_set(mapping_set: MappingSet, findings: _Findings) -> None:
    for slot in ("license", "mapping_set_id"):
        if getattr(mapping_set, slot) is None and slot not in mapping_set.unparsed:
            findings.add("E011", f"set-level {slot} is missing", slot=slot)

    for slot_name, raw in mapping_set.unparsed.items():
        slot = SET_SLOT_INDEX.get(slot_name)
        code = _UNPARSED_CODES.get(slot.kind) if slot else None
        if code:
            findings.add(code, f"cannot read set-level {slot_name} value '{raw}'", slot=slot_name)

    creators = [("creator_id", curie) for curie in mapping_set.creator_id]
    _check_prefixes(creators, mapping_set, findings)
    _check_provenance_ids(creators, findings)

    for iri, prefixes in sorted(mapping_set.curie_map.shared_iri_prefixes().items()):
        findings.add("E019", f"prefixes {', '.join(prefixes)} all expand to {iri}", slot="curie_map")

    if not mapping_set.mappings:
        findings.add("E021", "mapping set has no mappings")


def validate(
    mapping_set: MappingSet,
    config: Optional[RuleConfig] = None,
    row_numbers: Optional[Sequence[int]] = None,
) -> List[Diagnostic]:
    """
    Run every rule over a mapping set.

    Row locations are `row_numbers[i]` for the i-th mapping when given (the
    data-row numbers recorded by the reader), otherwise positions from 1.
    The result is deterministic: ordered by row (set-level first), then code.
    Findings are data; nothing here raises for bad content.
    """
    config = config or RuleConfig()
    findings = _Findings(config)

    rows = list(row_numbers) if row_numbers is not None else list(range(1, len(mapping_set.mappings) + 1))
    if len(rows) != len(mapping_set.mappings):
        raise ValueError(f"row_numbers has {len(rows)} entries for {len(mapping_set.mappings)} mappings")

    _check_set(mapping_set, findings)
    for row, mapping in zip(rows, mapping_set.mappings):
        _check_row(mapping, row, mapping_set, findings)
    _check_duplicates(mapping_set, rows, findings)

    diagnostics = findings.items
    if config.cardinality is not None:
        diagnostics = diagnostics + check_cardinality(mapping_set, config.cardinality, config)

    diagnostics = sorted(diagnostics, key=Diagnostic.sort_key)
    logger.info(f"Validated mapping set: rows={len(mapping_set.mappings)}, diagnostics={len(diagnostics)}")
    return diagnostics


def _exact_pairs(mapping_set: MappingSet) -> List[Tuple[Curie, Curie]]:
    return [
        (m.subject_id, m.object_id)
        for m in mapping_set.mappings
        if m.is_plain_assertion
        and m.subject_id is not None
        and m.object_id is not None
        and m.predicate_id is not None
        and predicate_tier(m.predicate_id) == PredicateTier.Exact
    ]


def _many_to_one(pairs: List[Tuple[Curie, Curie]], slot: str, config: Optional[RuleConfig]) -> List[Diagnostic]:
    grouped: Dict[Curie, Set[Curie]] = defaultdict(set)
    for shared, other in pairs:
        grouped[shared].add(other)
    other_slot = "subject_id" if slot == "object_id" else "object_id"
    found = []
    for shared in sorted(grouped, key=str):
        others = grouped[shared]
        if len(others) < 2:
            continue
        names = ", ".join(sorted(str(o) for o in others))
        found.append(make_diagnostic(
            "E020",
            f"{slot} {shared} has exact mappings to {len(others)} distinct {other_slot} values: {names}",
            slot=slot,
            config=config,
        ))
    return found


def check_cardinality(
    mapping_set: MappingSet,
    policy: CardinalityPolicy,
    config: Optional[RuleConfig] = None,
) -> List[Diagnostic]:
    """
    Reconciliation check over non-negated Exact-tier rows.

    object-unique flags every object reached from two or more subjects;
    subject-unique is the mirror; one-to-one applies both.
    """
    pairs = _exact_pairs(mapping_set)
    found: List[Diagnostic] = []
    if policy in (CardinalityPolicy.object_unique, CardinalityPolicy.one_to_one):
        found.extend(_many_to_one([(o, s) for s, o in pairs], "object_id", config))
    if policy in (CardinalityPolicy.subject_unique, CardinalityPolicy.one_to_one):
        found.extend(_many_to_one(pairs, "subject_id", config))
    return sorted(found, key=Diagnostic.sort_key)
