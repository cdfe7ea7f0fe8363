from __future__ import annotations

import csv
import io
import logging
from typing import List

import pandas as pd

from src.schema.curie import Curie, PrefixMap, check_prefix_entry
from src.schema.errors import FatalParse, MalformedCurie
from src.schema.slots import CURIE_MAP, split_list
from src.matcher.lexical import TermRecord, TermTable
from src.tsv.header import parse_header_text, strip_comment_lines
from src.tsv.reader import decode_text, split_lines, split_sections


logger = logging.getLogger(__name__)


TERM_COLUMNS = ("id", "label", "exact_synonyms", "identifiers")


def _values(cell: str) -> tuple[str, ...]:
    if not cell:
        return ()
    return tuple(item for item in split_list(cell) if item)


def _header_text(block: dict, key: str) -> str | None:
    value = block.get(key)
    if value is None or value == "":
        return None
    if not isinstance(value, str):
        raise FatalParse(f"term table header: '{key}' must be a single value")
    return value


def _prefix_map(block: dict) -> PrefixMap:
    value = block.get(CURIE_MAP)
    if not value:
        return PrefixMap()
    if not isinstance(value, dict):
        raise FatalParse("term table header: curie_map must be a block of 'prefix: IRI' entries")
    entries = {}
    for prefix, iri in value.items():
        error = check_prefix_entry(prefix, iri)
        if error:
            logger.warning(f"Skipping curie_map entry of term table: {error}")
            continue
        entries[prefix] = iri
    return PrefixMap(entries=entries)


class TermTableLoader:
    def load(self, data: bytes) -> TermTable:
        """
        Read a term table: `#source:`, `#source_version:` and `#curie_map:`
        header lines, then a TSV with columns id, label, exact_synonyms and
        identifiers (pipe-separated lists).

        Rows with an unreadable id or no strings at all are skipped with a warning.

        Raises:
            FatalParse: malformed header, missing `id` column or a repeated id.
        """
        header_lines, body = split_sections(split_lines(decode_text(data, "term table")))
        block, _ = parse_header_text(strip_comment_lines(header_lines)) if header_lines else ({}, [])
        if not body:
            raise FatalParse("term table has no column header")

        df = pd.read_csv(
            io.StringIO("\n".join(body) + "\n"),
            sep="\t",
            dtype=str,
            keep_default_na=False,
            quoting=csv.QUOTE_NONE,
        ).fillna("")
        if "id" not in df.columns:
            raise FatalParse("term table lacks an 'id' column")
        for column in TERM_COLUMNS:
            if column not in df.columns:
                df[column] = ""

        records: List[TermRecord] = []
        seen = set()
        for position, row in enumerate(df.itertuples(index=False), start=1):
            try:
                term_id = Curie.parse(str(row.id).strip())
            except MalformedCurie as e:
                logger.warning(f"Skipping term row: row={position}, reason={e}")
                continue
            if term_id in seen:
                raise FatalParse(f"term table row {position}: duplicate id {term_id}")
            seen.add(term_id)
            record = TermRecord(
                id=term_id,
                labels=_values(row.label),
                exact_synonyms=_values(row.exact_synonyms),
                identifiers=_values(row.identifiers),
            )
            if record.is_empty():
                logger.warning(f"Skipping term row without label, synonym or identifier: row={position}, id={term_id}")
                continue
            records.append(record)

        logger.info(f"Loaded term table: source={block.get('source')}, terms={len(records)}")
        return TermTable(
            name=_header_text(block, "source"),
            version=_header_text(block, "source_version"),
            records=tuple(records),
            curie_map=_prefix_map(block),
        )
