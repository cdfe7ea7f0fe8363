from __future__ import annotations

import logging
from typing import Any, List, Optional, Sequence, Tuple

from src.schema.errors import SerializationError
from src.schema.mapping import Mapping, MappingSet
from src.schema.slots import CURIE_MAP, MAPPING_SLOT_INDEX, MAPPING_SLOTS, REQUIRED_SLOTS, SET_SLOTS, render_value
from src.tsv.header import HeaderBlock, render_header


logger = logging.getLogger(__name__)


_FORBIDDEN_CELL_CHARS = ("\t", "\r", "\n")


def _cell(mapping: Mapping, column: str) -> str:
    if column in mapping.unparsed:
        return mapping.unparsed[column]
    if column in mapping.extensions:
        return mapping.extensions[column]
    if column in MAPPING_SLOT_INDEX:
        rendered = render_value(getattr(mapping, column))
        return rendered if rendered is not None else ""
    return ""


def canonical_columns(mappings: Sequence[Mapping]) -> List[str]:
    """Required columns, then populated slots in registry order, then extension columns alphabetically."""
    columns = list(REQUIRED_SLOTS)
    for slot in MAPPING_SLOTS:
        if slot.required:
            continue
        if any(_cell(m, slot.name) for m in mappings):
            columns.append(slot.name)
    extensions = sorted({key for m in mappings for key, value in m.extensions.items() if value})
    return columns + extensions


def _row(mapping: Mapping, columns: Sequence[str]) -> Tuple[str, ...]:
    return tuple(_cell(mapping, column) for column in columns)


def canonical_rows(mappings: Sequence[Mapping]) -> List[Mapping]:
    """Mappings in canonical order: by rendered cells, subject/predicate/object first."""
    columns = canonical_columns(mappings)
    return sorted(mappings, key=lambda m: _row(m, columns))


def _header_value(value: Any) -> Optional[Any]:
    if isinstance(value, tuple):
        return [str(item) for item in value] or None
    return render_value(value)


def canonical_header(mapping_set: MappingSet) -> HeaderBlock:
    block: HeaderBlock = {}
    if len(mapping_set.curie_map):
        block[CURIE_MAP] = dict(sorted(mapping_set.curie_map.items()))
    for slot in SET_SLOTS:
        if slot.name in mapping_set.unparsed:
            block[slot.name] = mapping_set.unparsed[slot.name]
            continue
        value = _header_value(getattr(mapping_set, slot.name))
        if value is not None:
            block[slot.name] = value
    for key in sorted(mapping_set.set_extensions):
        block[key] = mapping_set.set_extensions[key]
    return block


def serialize_canonical(mapping_set: MappingSet) -> bytes:
    """
    Write a mapping set in canonical embedded-mode form.

    The output depends only on the set's value: input column order, row order
    and header key order do not show through.

    Raises:
        SerializationError: a header value or cell contains a tab or line break.
    """
    lines = render_header(canonical_header(mapping_set))
    columns = canonical_columns(mapping_set.mappings)
    lines.append("\t".join(columns))

    rows = sorted(_row(m, columns) for m in mapping_set.mappings)
    for index, row in enumerate(rows, start=1):
        for column, cell in zip(columns, row):
            if any(ch in cell for ch in _FORBIDDEN_CELL_CHARS):
                raise SerializationError(f"row {index}, column '{column}': value contains a tab or line break")
        lines.append("\t".join(row))

    logger.info(f"Serialized mapping set: rows={len(rows)}, columns={len(columns)}")
    return ("\n".join(lines) + "\n").encode("utf-8")
