import codecs
from datetime import date
from decimal import Decimal

import pytest

from src.schema.enums import MatchType, ParseMode, Severity
from src.schema.errors import FatalParse
from src.tsv.reader import embed, parse_embedded, parse_external

from tests.conftest import c, fixture_bytes


HEADER = (
    b'#mapping_set_id: "https://example.org/sets/t"\n'
    b'#license: "https://creativecommons.org/publicdomain/zero/1.0/"\n'
    b"#curie_map:\n"
    b'#  X: "http://example.org/x/"\n'
    b'#  Y: "http://example.org/y/"\n'
)
COLUMNS = b"subject_id\tpredicate_id\tobject_id\tmatch_type\tconfidence\n"


def _doc(*rows: bytes, mode=ParseMode.lenient):
    return parse_embedded(HEADER + COLUMNS + b"".join(rows), mode)


def _codes(document):
    return [d.code for d in document.diagnostics]


class TestExposure:
    def test_rows_and_set_metadata(self, exposure_document):
        mapping_set = exposure_document.mapping_set
        assert len(mapping_set.mappings) == 6
        assert exposure_document.rows_read == 6
        assert exposure_document.diagnostics == []
        assert mapping_set.license == "https://creativecommons.org/publicdomain/zero/1.0/"
        assert mapping_set.curie_map.get("CHEBI") == "http://purl.obolibrary.org/obo/CHEBI_"
        assert exposure_document.column_order[:4] == ["subject_id", "subject_label", "predicate_id", "object_id"]

    def test_first_row(self, exposure):
        first = exposure.mappings[0]
        assert first.subject_id == c("CHEBI:33282")
        assert first.subject_label is None
        assert first.predicate_id == c("owl:equivalentClass")
        assert first.object_label == "antibacterial agent"
        assert first.confidence == Decimal("0.500024776")
        assert first.subject_match_field == (c("dc:identifier"),)

    def test_set_mapping_date_is_inherited(self, exposure):
        assert {m.mapping_date for m in exposure.mappings} == {date(2021, 4, 20)}

    def test_lexical_stemming_is_normalized(self, exposure):
        stemmed = [m for m in exposure.mappings if m.preprocessing == ("Stemming",)]
        assert len(stemmed) == 2
        assert all(m.match_type == MatchType.Lexical for m in exposure.mappings)

    def test_lexical_stemming_is_fatal_in_strict_mode(self, exposure_bytes):
        with pytest.raises(FatalParse) as excinfo:
            parse_embedded(exposure_bytes, ParseMode.strict)
        assert excinfo.value.diagnostic.code == "E005"

    def test_external_mode_gives_the_same_set(self, exposure):
        document = parse_external(fixture_bytes("exposure.body.tsv"), fixture_bytes("exposure.header.yaml"))
        assert document.mapping_set == exposure
        assert document.diagnostics == []

    def test_embed_gives_the_same_set(self, exposure):
        embedded = embed(fixture_bytes("exposure.body.tsv"), fixture_bytes("exposure.header.yaml"))
        assert parse_embedded(embedded).mapping_set == exposure

    def test_embed_moves_body_byte_order_mark(self, exposure):
        body = codecs.BOM_UTF8 + fixture_bytes("exposure.body.tsv")
        embedded = embed(body, fixture_bytes("exposure.header.yaml"))
        assert embedded.startswith(codecs.BOM_UTF8 + b"#")
        document = parse_embedded(embedded)
        assert document.mapping_set == exposure
        assert _codes(document) == ["E017"]

    def test_crlf_line_endings(self, exposure_bytes, exposure):
        assert parse_embedded(exposure_bytes.replace(b"\n", b"\r\n")).mapping_set == exposure

    def test_byte_order_mark(self, exposure_bytes, exposure):
        document = parse_embedded(codecs.BOM_UTF8 + exposure_bytes)
        assert document.mapping_set == exposure
        assert _codes(document) == ["E017"]


class TestRows:
    def test_unparseable_confidence_is_kept_raw(self):
        document = _doc(b"X:1\tskos:exactMatch\tY:1\tLexical\thigh\n")
        mapping = document.mapping_set.mappings[0]
        assert mapping.confidence is None
        assert mapping.unparsed == {"confidence": "high"}
        assert _codes(document) == ["E012"]
        assert document.diagnostics[0].row == 1
        assert document.has_errors

    def test_unparseable_confidence_is_fatal_in_strict_mode(self):
        with pytest.raises(FatalParse):
            _doc(b"X:1\tskos:exactMatch\tY:1\tLexical\thigh\n", mode=ParseMode.strict)

    def test_unknown_match_type_is_a_warning_in_lenient_mode(self):
        document = _doc(b"X:1\tskos:exactMatch\tY:1\tFuzzy\t\n")
        assert document.mapping_set.mappings[0].unparsed == {"match_type": "Fuzzy"}
        assert [(d.code, d.severity) for d in document.diagnostics] == [("E005", Severity.Warning)]

    def test_wrong_cell_count_rejects_the_row(self):
        document = _doc(
            b"X:1\tskos:exactMatch\tY:1\tLexical\t0.5\n",
            b"X:2\tskos:exactMatch\tY:2\tLexical\n",
        )
        assert len(document.mapping_set.mappings) == 1
        assert [(d.code, d.row) for d in document.diagnostics] == [("E016", 2)]

    def test_blank_lines_in_the_table_are_skipped(self):
        document = _doc(b"X:1\tskos:exactMatch\tY:1\tLexical\t0.5\n", b"\n", b"X:2\tskos:exactMatch\tY:2\tLexical\t\n")
        assert len(document.mapping_set.mappings) == 2
        assert document.rows_read == 2

    def test_unknown_columns_become_extensions(self):
        document = parse_embedded(
            HEADER + b"subject_id\tpredicate_id\tobject_id\tmatch_type\tmy_score\n"
            + b"X:1\tskos:exactMatch\tY:1\tLexical\t7\n"
        )
        assert document.mapping_set.mappings[0].extensions == {"my_score": "7"}

    def test_unknown_header_keys_become_set_extensions(self):
        document = parse_embedded(b"#my_note: hello\n" + HEADER + COLUMNS)
        assert document.mapping_set.set_extensions == {"my_note": "hello"}

    def test_bad_curie_map_entry_is_dropped(self):
        document = parse_embedded(HEADER + b'#  W: "not an iri"\n' + COLUMNS
                                  + b"X:1\tskos:exactMatch\tY:1\tLexical\t\n")
        assert "W" not in document.mapping_set.curie_map.entries
        assert "E018" in _codes(document)


class TestEmptyInputs:
    def test_table_without_rows(self):
        document = _doc()
        assert document.mapping_set.mappings == ()
        assert _codes(document) == ["E021"]

    def test_empty_header(self):
        document = parse_embedded(COLUMNS + b"X:1\tskos:exactMatch\tY:1\tLexical\t\n")
        assert _codes(document) == ["E022"]
        assert len(document.mapping_set.mappings) == 1


class TestFatal:
    @pytest.mark.parametrize("data", [
        HEADER,
        HEADER + b"subject_id\tpredicate_id\tobject_id\n",
        HEADER + b"subject_id\tpredicate_id\tobject_id\tmatch_type\tobject_id\n",
        HEADER + COLUMNS + b"#late: header\n",
        HEADER + b"\xff\xfe" + COLUMNS,
        b"#curie_map: [X, Y]\n" + COLUMNS,
        b"#curie_map: not-a-map\n" + COLUMNS,
    ], ids=["no-columns", "missing-required", "duplicate-column", "late-comment", "not-utf8", "flow-list", "scalar-map"])
    def test_fatal(self, data):
        with pytest.raises(FatalParse):
            parse_embedded(data)


class TestExternal:
    def test_embedded_values_win_over_the_external_header(self):
        external = b'license: "https://example.org/external"\nmapping_set_id: "https://example.org/sets/t"\n'
        tsv = b'#license: "https://example.org/embedded"\n' + COLUMNS + b"X:1\tskos:exactMatch\tY:1\tLexical\t\n"
        document = parse_external(tsv, external)
        assert document.mapping_set.license == "https://example.org/embedded"
        assert document.mapping_set.mapping_set_id == "https://example.org/sets/t"
        assert _codes(document) == ["E017", "E017"]

    def test_embed_with_empty_header_keeps_the_body(self):
        body = fixture_bytes("exposure.body.tsv")
        assert embed(body, b"") == body
