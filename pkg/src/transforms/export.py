"""
Exporters: canonical JSON and N-Triples.

Both walk the rows in canonical order so equal sets export identically.
"""
from __future__ import annotations

import json
import logging
import re
import uuid
from datetime import date
from decimal import Decimal
from enum import Enum
from typing import Any, Dict, List

from rdflib import Literal, URIRef
from rdflib.namespace import XSD

from src.schema.curie import Curie, expand
from src.schema.mapping import Mapping, MappingSet
from src.schema.slots import CURIE_MAP, MAPPING_SLOTS, SET_SLOTS, SlotKind
from src.tsv.writer import canonical_rows, serialize_canonical
from src.utils.iri import is_plausible_iri


logger = logging.getLogger(__name__)


SSSOM_NAMESPACE = "https://w3id.org/sssom/"

_INDENT = "  "

_JSON_NUMBER = re.compile(r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?")


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(item) for item in value]
    if isinstance(value, Curie):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    return value


def _encode(value: Any, level: int) -> str:
    """
    JSON text for `value`.

    Decimals are written as numbers with their stored digits; a stored text
    JSON cannot carry as a number (`1.`, `+1`, `.5`) is written as a string.
    """
    if isinstance(value, Decimal):
        text = str(value)
        return text if _JSON_NUMBER.fullmatch(text) else json.dumps(text)
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = _INDENT * (level + 1)
        items = [f"{inner}{json.dumps(key, ensure_ascii=False)}: {_encode(item, level + 1)}" for key, item in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + _INDENT * level + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        inner = _INDENT * (level + 1)
        items = [f"{inner}{_encode(item, level + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + "\n" + _INDENT * level + "]"
    return json.dumps(value, ensure_ascii=False)


def _slot_values(model: Any, slots: Any, unparsed: Dict[str, str]) -> Dict[str, Any]:
    """Present slots in canonical order; an unreadable cell is written as its raw text."""
    values: Dict[str, Any] = {}
    for slot in slots:
        if slot.name in unparsed:
            values[slot.name] = unparsed[slot.name]
            continue
        value = getattr(model, slot.name)
        if value is None or value == ():
            continue
        values[slot.name] = _plain(value)
    return values


def _mapping_object(mapping: Mapping) -> Dict[str, Any]:
    row = _slot_values(mapping, MAPPING_SLOTS, mapping.unparsed)
    for column in sorted(mapping.extensions):
        row[column] = mapping.extensions[column]
    return row


def to_json(mapping_set: MappingSet) -> bytes:
    """
    One JSON object: `curie_map` as a nested object, present set-level slots in
    canonical order, header extensions alphabetically, then `mappings` with the
    present slots of each row followed by its extension columns.
    """
    document: Dict[str, Any] = {}
    if len(mapping_set.curie_map):
        document[CURIE_MAP] = dict(sorted(mapping_set.curie_map.items()))
    document.update(_slot_values(mapping_set, SET_SLOTS, mapping_set.unparsed))
    for key in sorted(mapping_set.set_extensions):
        document[key] = mapping_set.set_extensions[key]
    document["mappings"] = [_mapping_object(m) for m in canonical_rows(mapping_set.mappings)]
    return (_encode(document, 0) + "\n").encode("utf-8")


def _ascii_escape(line: str) -> str:
    out = []
    for ch in line:
        code = ord(ch)
        if code < 0x80:
            out.append(ch)
        elif code <= 0xFFFF:
            out.append(f"\\u{code:04X}")
        else:
            out.append(f"\\U{code:08X}")
    return "".join(out)


def _node_base(mapping_set: MappingSet) -> str:
    if mapping_set.mapping_set_id and is_plausible_iri(mapping_set.mapping_set_id):
        return mapping_set.mapping_set_id.rstrip("/")
    digest = uuid.uuid5(uuid.NAMESPACE_URL, serialize_canonical(mapping_set).decode("utf-8"))
    return f"urn:uuid:{digest}"


def _object_term(kind: SlotKind, value: Any, mapping_set: MappingSet) -> str:
    if kind == SlotKind.curie:
        return URIRef(expand(value, mapping_set.curie_map)).n3()
    if kind == SlotKind.decimal:
        return Literal(str(value), datatype=XSD.double, normalize=False).n3()
    if kind == SlotKind.date:
        return Literal(value.isoformat(), datatype=XSD.date, normalize=False).n3()
    if isinstance(value, Enum):
        value = value.value
    return Literal(str(value)).n3()


def _row_triples(node: str, mapping: Mapping, mapping_set: MappingSet) -> List[str]:
    triples = []
    for slot in MAPPING_SLOTS:
        value = getattr(mapping, slot.name)
        if value is None or value == ():
            continue
        predicate = URIRef(SSSOM_NAMESPACE + slot.name).n3()
        values = value if slot.multivalued else (value,)
        for item in values:
            triples.append(f"{node} {predicate} {_object_term(slot.kind, item, mapping_set)} .")
    return triples


def to_ntriples(mapping_set: MappingSet, emit_direct: bool = False) -> bytes:
    """
    Reify every row as a mapping node carrying one triple per present slot.

    With `emit_direct`, rows that assert their triple (no predicate_modifier)
    also yield `subject predicate object`. Lines are sorted; duplicates are kept.

    Raises:
        UnresolvablePrefix: a CURIE cannot be expanded.
    """
    base = _node_base(mapping_set)
    lines: List[str] = []
    direct = 0
    for index, mapping in enumerate(canonical_rows(mapping_set.mappings), start=1):
        node = URIRef(f"{base}/mapping/{index}").n3()
        lines.extend(_row_triples(node, mapping, mapping_set))
        if emit_direct and mapping.is_plain_assertion and None not in (
            mapping.subject_id, mapping.predicate_id, mapping.object_id,
        ):
            terms = [URIRef(expand(c, mapping_set.curie_map)).n3()
                     for c in (mapping.subject_id, mapping.predicate_id, mapping.object_id)]
            lines.append(" ".join(terms) + " .")
            direct += 1

    logger.info(f"Exported N-Triples: mappings={len(mapping_set.mappings)}, triples={len(lines)}, direct={direct}")
    if not lines:
        return b""
    lines = sorted(_ascii_escape(line) for line in lines)
    return ("\n".join(lines) + "\n").encode("ascii")
