import json

import pytest

from src.loader.file_loader import FileLoader
from src.pipeline.processor import MappingSetProcessor
from src.schema.curie import PrefixMap
from src.schema.diagnostic import RuleConfig
from src.schema.enums import CardinalityPolicy, Severity
from src.schema.mapping import MappingSet
from src.validation.report import has_errors, render_json, render_text, severity_counts
from src.validation.validator import check_cardinality, validate

from tests.conftest import DEFECTS, c, row


XY = PrefixMap(entries={"X": "http://example.org/x/", "Y": "http://example.org/y/"})


def _set(*mappings, **fields) -> MappingSet:
    fields.setdefault("mapping_set_id", "https://example.org/sets/t")
    fields.setdefault("license", "https://creativecommons.org/publicdomain/zero/1.0/")
    fields.setdefault("curie_map", XY)
    return MappingSet(mappings=tuple(mappings), **fields)


def _process(path, config=None):
    return MappingSetProcessor(FileLoader(), config).process(str(path))


def test_exposure_has_no_errors(exposure):
    diagnostics = validate(exposure)
    assert not has_errors(diagnostics)
    # the exposure set carries no mapping_set_id
    assert [(d.code, d.slot) for d in diagnostics] == [("E011", "mapping_set_id")]


@pytest.mark.parametrize("path", sorted(p for p in DEFECTS.glob("E*.sssom.tsv") if not p.name.startswith("E020")),
                         ids=lambda p: p.name.split("_")[0])
def test_each_defect_reports_its_own_code(path):
    code = path.name.split("_")[0]
    outcome = _process(path)
    assert [d.code for d in outcome.diagnostics] == [code]


def test_many_to_one_needs_a_cardinality_policy():
    path = DEFECTS / "E020_many_to_one.sssom.tsv"
    assert _process(path).diagnostics == []
    outcome = _process(path, RuleConfig(cardinality=CardinalityPolicy.object_unique))
    assert [(d.code, d.row, d.slot) for d in outcome.diagnostics] == [("E020", None, "object_id")]


def test_parse_and_validate_findings_are_not_repeated():
    outcome = _process(DEFECTS / "E012_confidence_not_a_number.sssom.tsv")
    assert len(outcome.diagnostics) == 1
    assert not outcome.valid


_HEADER = (
    b"#curie_map:\n"
    b"#  X: \"http://example.org/x/\"\n"
    b"#  Y: \"http://example.org/y/\"\n"
    b"#mapping_set_id: \"https://example.org/sets/t\"\n"
    b"#license: \"https://creativecommons.org/publicdomain/zero/1.0/\"\n"
    b"subject_id\tpredicate_id\tobject_id\tmatch_type\tconfidence\n"
)


class TestRowLocations:
    def test_rejected_row_does_not_shift_later_rows(self):
        data = _HEADER + (
            b"X:1\tskos:exactMatch\tY:1\tLexical\t0.5\n"
            b"X:2\tskos:exactMatch\tY:2\tLexical\n"
            b"X:3\tskos:exactMatch\tY:3\tLexical\thigh\n"
        )
        outcome = MappingSetProcessor(FileLoader()).process_bytes(data)
        assert [(d.code, d.row) for d in outcome.diagnostics] == [("E016", 2), ("E012", 3)]

    def test_duplicate_points_at_data_rows(self):
        data = _HEADER + (
            b"X:1\tskos:exactMatch\tY:1\tLexical\t0.5\n"
            b"X:2\tskos:exactMatch\n"
            b"X:1\tskos:exactMatch\tY:1\tLexical\t0.7\n"
        )
        outcome = MappingSetProcessor(FileLoader()).process_bytes(data)
        assert [(d.code, d.row) for d in outcome.diagnostics] == [("E016", 2), ("E007", 3)]
        assert "duplicate of row 1" in outcome.diagnostics[1].message

    def test_explicit_row_numbers(self):
        mapping_set = _set(row("X:1", "skos:exactMatch", "Y:1"), row("X:2", "skos:exactMatch", "X:2"))
        assert [(d.code, d.row) for d in validate(mapping_set, row_numbers=[4, 9])] == [("E015", 9)]

    def test_row_numbers_must_match_mappings(self):
        with pytest.raises(ValueError):
            validate(_set(row("X:1", "skos:exactMatch", "Y:1")), row_numbers=[1, 2])


@pytest.mark.slow
def test_large_file_parses_and_validates():
    rows = b"".join(
        b"X:%d\tskos:exactMatch\tY:%d\tLexical\t0.%04d\n" % (n, n, n % 10000)
        for n in range(100_000)
    )
    outcome = MappingSetProcessor(FileLoader()).process_bytes(_HEADER + rows)
    assert len(outcome.document.mapping_set.mappings) == 100_000
    assert outcome.document.row_numbers[-1] == 100_000
    assert not has_errors(outcome.diagnostics)
    assert outcome.valid


class TestRules:
    def test_prefix_reported_once_per_slot(self):
        mapping_set = _set(row("Z:1", "skos:exactMatch", "Z:2"))
        findings = [(d.code, d.slot) for d in validate(mapping_set)]
        assert findings == [("E002", "object_id"), ("E002", "subject_id")]

    def test_out_of_range_similarity_score(self):
        mapping_set = _set(row("X:1", "skos:exactMatch", "Y:1",
                               semantic_similarity_score="-0.1", semantic_similarity_measure="cosine"))
        assert [d.code for d in validate(mapping_set)] == ["E003"]

    def test_negated_row_is_not_a_duplicate_of_the_assertion(self):
        mapping_set = _set(
            row("X:1", "skos:exactMatch", "Y:1"),
            row("X:1", "skos:exactMatch", "Y:1", predicate_modifier="Not"),
        )
        assert validate(mapping_set) == []

    def test_shared_iri_prefix(self):
        pm = PrefixMap(entries={**XY.entries, "X2": "http://example.org/x/"})
        findings = validate(_set(row("X:1", "skos:exactMatch", "Y:1"), curie_map=pm))
        assert [(d.code, d.row) for d in findings] == [("E019", None)]

    def test_set_creator_outside_recommended_schemes(self):
        findings = validate(_set(row("X:1", "skos:exactMatch", "Y:1"), creator_id=(c("X:me"),)))
        assert [(d.code, d.slot) for d in findings] == [("E013", "creator_id")]

    def test_empty_set(self):
        assert [d.code for d in validate(_set())] == ["E021"]

    def test_order_is_set_level_first_then_rows(self):
        mapping_set = _set(
            row("X:1", "X:rel", "Y:1"),
            row("X:2", "skos:exactMatch", "X:2"),
            license=None,
        )
        assert [(d.row, d.code) for d in validate(mapping_set)] == [(None, "E011"), (1, "E004"), (2, "E015")]


class TestOverrides:
    def test_override_changes_severity(self):
        mapping_set = _set(row("X:1", "X:rel", "Y:1"))
        config = RuleConfig(severity_overrides={"E004": Severity.Error})
        diagnostics = validate(mapping_set, config)
        assert [(d.code, d.severity) for d in diagnostics] == [("E004", Severity.Error)]
        assert has_errors(diagnostics)

    def test_override_applies_to_parse_findings(self):
        config = RuleConfig(severity_overrides={"E012": Severity.Warning})
        outcome = _process(DEFECTS / "E012_confidence_not_a_number.sssom.tsv", config)
        assert [(d.code, d.severity) for d in outcome.diagnostics] == [("E012", Severity.Warning)]
        assert outcome.valid

    def test_unknown_code_is_rejected(self):
        with pytest.raises(ValueError):
            RuleConfig(severity_overrides={"E999": Severity.Info})


class TestCardinality:
    def _pairs(self):
        return _set(
            row("X:1", "skos:exactMatch", "Y:1"),
            row("X:2", "owl:equivalentClass", "Y:1"),
            row("X:1", "skos:exactMatch", "Y:2"),
            row("X:3", "skos:exactMatch", "Y:1", predicate_modifier="Not"),
            row("X:3", "skos:closeMatch", "Y:1"),
        )

    def test_object_unique(self):
        found = check_cardinality(self._pairs(), CardinalityPolicy.object_unique)
        assert [(d.code, d.slot) for d in found] == [("E020", "object_id")]
        assert "Y:1" in found[0].message
        assert "X:1, X:2" in found[0].message

    def test_subject_unique(self):
        found = check_cardinality(self._pairs(), CardinalityPolicy.subject_unique)
        assert [(d.code, d.slot) for d in found] == [("E020", "subject_id")]
        assert "Y:1, Y:2" in found[0].message

    def test_one_to_one(self):
        found = check_cardinality(self._pairs(), CardinalityPolicy.one_to_one)
        assert sorted(d.slot for d in found) == ["object_id", "subject_id"]

    def test_clean_set(self):
        mapping_set = _set(row("X:1", "skos:exactMatch", "Y:1"), row("X:2", "skos:exactMatch", "Y:2"))
        assert check_cardinality(mapping_set, CardinalityPolicy.one_to_one) == []


class TestReport:
    def test_text_lines(self):
        outcome = _process(DEFECTS / "E001_missing_match_type.sssom.tsv")
        text = render_text(outcome.diagnostics)
        assert text.startswith("ERROR E001 row=1 slot=match_type ")
        assert text.count("\n") == 1

    def test_set_level_location(self, exposure):
        assert render_text(validate(exposure)).startswith("WARNING E011 row=set slot=mapping_set_id ")

    def test_empty_report(self):
        assert render_text([]) == ""

    def test_json(self):
        outcome = _process(DEFECTS / "E015_subject_is_object.sssom.tsv")
        data = json.loads(render_json(outcome.diagnostics))
        assert data[0]["code"] == "E015"
        assert data[0]["severity"] == "Info"
        assert data[0]["row"] == 1

    def test_severity_counts(self, exposure):
        assert severity_counts(validate(exposure)) == {"Error": 0, "Warning": 1, "Info": 0}
