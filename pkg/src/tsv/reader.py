from __future__ import annotations

import codecs
import logging
import time
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict

from src.schema.curie import PrefixMap, check_prefix_entry
from src.schema.diagnostic import Diagnostic, make_diagnostic
from src.schema.enums import ParseMode, Severity
from src.schema.errors import FatalParse, UnknownMatchType
from src.schema.mapping import Mapping, MappingSet
from src.schema.predicates import normalize_match_type
from src.schema.slots import (
    CURIE_MAP,
    LIST_SEPARATOR,
    MAPPING_SLOT_INDEX,
    REQUIRED_SLOTS,
    SET_SLOT_INDEX,
    CellError,
    SlotKind,
    parse_cell,
)
from src.tsv.header import COMMENT, HeaderBlock, parse_header_text, strip_comment_lines


logger = logging.getLogger(__name__)


class ParsedDocument(BaseModel):
    """A parsed SSSOM TSV document: the mapping set, its column order and parse-level findings."""

    model_config = ConfigDict(frozen=True)

    mapping_set: MappingSet
    column_order: List[str]
    diagnostics: List[Diagnostic] = []
    rows_read: int = 0
    # 1-based data-row number of each mapping, parallel to mapping_set.mappings
    row_numbers: List[int] = []

    @property
    def has_errors(self) -> bool:
        return any(d.severity == Severity.Error for d in self.diagnostics)


class _Collector:
    """Collects parse diagnostics; in strict mode an Error-severity finding aborts the parse."""

    def __init__(self, mode: ParseMode):
        self.mode = mode
        self.diagnostics: List[Diagnostic] = []

    def add(self, code: str, message: str, row: int | None = None, slot: str | None = None) -> None:
        diagnostic = make_diagnostic(code, message, row=row, slot=slot, mode=self.mode)
        if self.mode == ParseMode.strict and diagnostic.severity == Severity.Error:
            location = "set" if row is None else f"row {row}"
            raise FatalParse(f"{diagnostic.code} at {location}: {message}", diagnostic)
        self.diagnostics.append(diagnostic)

    def extend(self, diagnostics: List[Diagnostic]) -> None:
        self.diagnostics.extend(diagnostics)


def decode_text(data: bytes, what: str, collector: _Collector | None = None) -> str:
    if data.startswith(codecs.BOM_UTF8):
        data = data[len(codecs.BOM_UTF8):]
        if collector is not None:
            collector.add("E017", f"{what}: byte-order mark consumed")
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise FatalParse(f"{what} is not valid UTF-8: {e}") from e


def split_lines(text: str) -> List[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def split_sections(lines: List[str]) -> Tuple[List[str], List[str]]:
    """Split into leading `#` lines and the table; a `#` line inside the table is fatal."""
    header: List[str] = []
    position = 0
    while position < len(lines) and (lines[position].startswith(COMMENT) or lines[position].strip() == ""):
        if lines[position].startswith(COMMENT):
            header.append(lines[position])
        position += 1
    body = lines[position:]
    for offset, line in enumerate(body):
        if line.startswith(COMMENT):
            raise FatalParse(
                f"line {position + offset + 1}: header line after the start of the table"
            )
    return header, body


def _single_value(key: str, value: Any) -> str:
    if not isinstance(value, str):
        raise FatalParse(f"header: '{key}' must be a single value")
    return value


def _build_prefix_map(value: Any, collector: _Collector) -> PrefixMap:
    if isinstance(value, str) and value == "":
        return PrefixMap()
    if not isinstance(value, dict):
        raise FatalParse("header: curie_map must be a block of 'prefix: IRI' entries")
    entries: Dict[str, str] = {}
    for prefix, iri in value.items():
        error = check_prefix_entry(prefix, iri)
        if error:
            collector.add("E018", f"curie_map entry dropped: {error}", slot=CURIE_MAP)
            continue
        entries[prefix] = iri
    return PrefixMap.model_construct(entries=entries)


def _build_set_fields(block: HeaderBlock, collector: _Collector) -> Dict[str, Any]:
    fields: Dict[str, Any] = {"curie_map": PrefixMap(), "set_extensions": {}, "unparsed": {}}
    for key, value in block.items():
        if key == CURIE_MAP:
            fields["curie_map"] = _build_prefix_map(value, collector)
            continue
        slot = SET_SLOT_INDEX.get(key)
        if slot is None:
            fields["set_extensions"][key] = value
            continue
        if slot.multivalued and isinstance(value, list):
            raw = LIST_SEPARATOR.join(value)
        else:
            raw = _single_value(key, value)
        if raw == "":
            continue
        try:
            fields[key] = parse_cell(slot, raw)
        except CellError as e:
            collector.add(e.code, str(e), slot=key)
            fields["unparsed"][key] = raw
    return fields


def _build_mapping(
    columns: List[str],
    cells: List[str],
    row: int,
    collector: _Collector,
) -> Mapping:
    fields: Dict[str, Any] = {}
    extensions: Dict[str, str] = {}
    unparsed: Dict[str, str] = {}
    implied_preprocessing: List[str] = []

    for column, cell in zip(columns, cells):
        if cell == "":
            continue
        slot = MAPPING_SLOT_INDEX.get(column)
        if slot is None:
            extensions[column] = cell
            continue
        if slot.kind == SlotKind.match_type:
            try:
                fields[column], implied_preprocessing = normalize_match_type(cell, collector.mode)
            except UnknownMatchType as e:
                collector.add("E005", str(e), row=row, slot=column)
                unparsed[column] = cell
            continue
        try:
            fields[column] = parse_cell(slot, cell)
        except CellError as e:
            collector.add(e.code, str(e), row=row, slot=column)
            unparsed[column] = cell

    if implied_preprocessing:
        existing = fields.get("preprocessing", ())
        fields["preprocessing"] = existing + tuple(t for t in implied_preprocessing if t not in existing)

    # cells were typed above
    return Mapping.model_construct(extensions=extensions, unparsed=unparsed, **fields)


def _build_document(
    block: HeaderBlock,
    body: List[str],
    collector: _Collector,
) -> ParsedDocument:
    start_time = time.perf_counter()

    if not block:
        collector.add("E022", "header block is empty: no set metadata and no curie_map")
    set_fields = _build_set_fields(block, collector)

    if not body:
        raise FatalParse("no column header line found")
    columns = body[0].split("\t")
    seen = set()
    for column in columns:
        if column in seen:
            raise FatalParse(f"duplicate column '{column}'")
        seen.add(column)
    missing = [slot for slot in REQUIRED_SLOTS if slot not in seen]
    if missing:
        raise FatalParse(f"required column(s) missing: {', '.join(missing)}")

    mappings: List[Mapping] = []
    row_numbers: List[int] = []
    row = 0
    for line in body[1:]:
        if line == "":
            continue
        row += 1
        cells = line.split("\t")
        if len(cells) != len(columns):
            collector.add(
                "E016",
                f"row has {len(cells)} cells but the header has {len(columns)} columns; row rejected",
                row=row,
            )
            continue
        mappings.append(_build_mapping(columns, cells, row, collector))
        row_numbers.append(row)

    mapping_set = MappingSet(mappings=tuple(mappings), **set_fields).with_row_defaults()
    if not mappings:
        collector.add("E021", "mapping set has no mappings")

    elapsed_ms = int((time.perf_counter() - start_time) * 1000)
    logger.info(
        f"Parsed mapping set: rows={row}, mappings={len(mappings)}, "
        f"diagnostics={len(collector.diagnostics)}, time_ms={elapsed_ms}"
    )
    return ParsedDocument(
        mapping_set=mapping_set,
        column_order=columns,
        diagnostics=collector.diagnostics,
        rows_read=row,
        row_numbers=row_numbers,
    )


def parse_embedded(data: bytes, mode: ParseMode = ParseMode.lenient) -> ParsedDocument:
    """
    Parse an SSSOM TSV document whose metadata header is embedded as `#` lines.

    Raises:
        FatalParse: input is not UTF-8, has no column header, lacks a required
            column, has a malformed header; in strict mode also any Error-level
            row finding.
    """
    collector = _Collector(mode)
    text = decode_text(data, "input", collector)
    header_lines, body = split_sections(split_lines(text))
    block, header_diagnostics = parse_header_text(strip_comment_lines(header_lines)) if header_lines else ({}, [])
    collector.extend(header_diagnostics)
    return _build_document(block, body, collector)


def parse_external(tsv: bytes, header: bytes, mode: ParseMode = ParseMode.lenient) -> ParsedDocument:
    """
    Parse a TSV body whose metadata header lives in a separate YAML file.

    When the body also carries `#` lines, their values win over the external
    header; both the presence of such lines and every conflicting key are
    reported as E017 warnings.
    """
    collector = _Collector(mode)
    header_text = decode_text(header, "header", collector)
    external_block, header_diagnostics = parse_header_text(header_text)
    collector.extend(header_diagnostics)

    text = decode_text(tsv, "input", collector)
    header_lines, body = split_sections(split_lines(text))
    block = dict(external_block)
    if header_lines:
        collector.add("E017", "table carries its own '#' header; its values win over the external header")
        embedded_block, embedded_diagnostics = parse_header_text(strip_comment_lines(header_lines))
        collector.extend(embedded_diagnostics)
        for key, value in embedded_block.items():
            if key in external_block and external_block[key] != value:
                collector.add("E017", f"conflicting values for header key '{key}': embedded value kept", slot=key)
            block[key] = value
    return _build_document(block, body, collector)


def embed(tsv: bytes, header: bytes) -> bytes:
    """
    Convert an external-mode pair into one embedded-mode document.

    The body bytes are kept as-is except for a leading byte-order mark, which
    moves to the start of the output so it is still read as one.
    """
    header_text = decode_text(header, "header")
    decode_text(tsv, "input")
    if not header_text.strip():
        return tsv
    bom = b""
    if tsv.startswith(codecs.BOM_UTF8):
        bom, tsv = codecs.BOM_UTF8, tsv[len(codecs.BOM_UTF8):]
        logger.debug("Moved body byte-order mark ahead of the embedded header")
    lines = split_lines(header_text)
    prefix = "".join(f"{COMMENT}{line}\n" for line in lines)
    return bom + prefix.encode("utf-8") + tsv
