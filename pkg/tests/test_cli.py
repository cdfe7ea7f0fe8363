import json

import pytest

from src.main import run
from src.tsv.reader import parse_embedded
from src.tsv.writer import serialize_canonical

from tests.conftest import DEFECTS, FIXTURES


EXPOSURE = str(FIXTURES / "exposure.sssom.tsv")
CROSSWALK = str(FIXTURES / "crosswalk.sssom.tsv")


def _table_rows(text: str):
    return [line for line in text.splitlines() if line and not line.startswith("#")][1:]


class TestValidate:
    def test_clean_file(self, capsys):
        assert run(["validate", EXPOSURE]) == 0
        out = capsys.readouterr().out
        assert "ERROR" not in out
        assert out.startswith("WARNING E011 row=set")

    def test_errors_exit_one(self, capsys):
        assert run(["validate", str(DEFECTS / "E001_missing_match_type.sssom.tsv")]) == 1
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("ERROR E001 ")

    def test_no_fail(self, capsys):
        assert run(["validate", "--no-fail", str(DEFECTS / "E003_confidence_out_of_range.sssom.tsv")]) == 0

    def test_severity_override(self, capsys):
        path = str(DEFECTS / "E004_unrecommended_predicate.sssom.tsv")
        assert run(["validate", path]) == 0
        assert run(["validate", path, "--severity", "E004=Error"]) == 1

    def test_cardinality_and_json(self, capsys):
        path = str(DEFECTS / "E020_many_to_one.sssom.tsv")
        assert run(["validate", path, "--cardinality", "object-unique", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert [d["code"] for d in data] == ["E020"]

    def test_external_header(self, capsys):
        args = ["validate", str(FIXTURES / "exposure.body.tsv"), "--header", str(FIXTURES / "exposure.header.yaml")]
        assert run(args) == 0

    def test_strict_mode_rejects_lexical_stemming(self, capsys):
        assert run(["validate", "--strict", EXPOSURE]) == 2
        assert "E005" in capsys.readouterr().err


class TestUsage:
    @pytest.mark.parametrize("argv", [
        [],
        ["frobnicate"],
        ["walk", CROSSWALK],
        ["walk", CROSSWALK, "--start", "FMA:24875", "--tier", "sideways"],
        ["validate", EXPOSURE, "--severity", "E999=Error"],
    ])
    def test_usage_errors_exit_two(self, argv, capsys):
        assert run(argv) == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(["parse", str(tmp_path / "absent.tsv")]) == 2
        assert capsys.readouterr().err.startswith("error: ")

    def test_fatal_parse(self, tmp_path, capsys):
        path = tmp_path / "broken.sssom.tsv"
        path.write_bytes(b"subject_id\tobject_id\n")
        assert run(["parse", str(path)]) == 2

    def test_walk_distance_limit(self, capsys):
        assert run(["walk", CROSSWALK, "--start", "FMA:24875", "--max-distance", "0"]) == 2


class TestTransforms:
    def test_parse_writes_canonical_form(self, capsys, exposure):
        assert run(["parse", EXPOSURE]) == 0
        assert capsys.readouterr().out.encode("utf-8") == serialize_canonical(exposure)

    def test_convert_json(self, capsys):
        assert run(["convert", EXPOSURE, "--to", "json"]) == 0
        assert len(json.loads(capsys.readouterr().out)["mappings"]) == 6

    def test_convert_ntriples(self, capsys):
        assert run(["convert", CROSSWALK, "--to", "ntriples", "--emit-direct"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert all(line.endswith(" .") for line in lines)

    def test_filter(self, capsys):
        assert run(["filter", EXPOSURE, "--min-confidence", "0.50005"]) == 0
        assert len(_table_rows(capsys.readouterr().out)) == 4

    def test_merge_prefix_conflict(self, tmp_path, capsys):
        other = tmp_path / "other.sssom.tsv"
        other.write_bytes(
            b'#curie_map:\n#  MA: "http://example.org/ma/"\n'
            b"subject_id\tpredicate_id\tobject_id\tmatch_type\n"
            b"MA:1\tskos:exactMatch\tMA:2\tHumanCurated\n"
        )
        assert run(["merge", CROSSWALK, str(other)]) == 2
        capsys.readouterr()
        assert run(["merge", CROSSWALK, str(other), "--on-prefix-conflict", "first-wins",
                    "--set-id", "https://example.org/sets/merged"]) == 0
        merged = parse_embedded(capsys.readouterr().out.encode("utf-8")).mapping_set
        assert len(merged.mappings) == 6
        assert merged.mapping_set_id == "https://example.org/sets/merged"
        assert merged.curie_map.get("MA") == "http://purl.obolibrary.org/obo/MA_"

    def test_diff(self, capsys):
        assert run(["diff", CROSSWALK, CROSSWALK]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 5
        assert all(line.startswith("= ") for line in lines)

    def test_invert(self, capsys):
        assert run(["invert", CROSSWALK]) == 0
        inverted = parse_embedded(capsys.readouterr().out.encode("utf-8")).mapping_set
        assert {str(m.object_id) for m in inverted.mappings} >= {"FMA:24875", "UMLS:C0015385"}

    def test_embed(self, capsys, exposure):
        args = ["embed", "--tsv", str(FIXTURES / "exposure.body.tsv"), "--header", str(FIXTURES / "exposure.header.yaml")]
        assert run(args) == 0
        assert parse_embedded(capsys.readouterr().out.encode("utf-8")).mapping_set == exposure

    def test_stats(self, capsys):
        assert run(["stats", CROSSWALK]) == 0
        assert capsys.readouterr().out.startswith("rows\t5\n")


class TestWalk:
    def test_exact_walk_from_fma(self, capsys):
        args = ["walk", CROSSWALK, "--start", "FMA:24875", "--max-distance", "2", "--tier", "exact"]
        assert run(args) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [line.split("\t")[0] for line in lines] == ["MA:0000007", "UBERON:0002101"]
        assert lines[0].split("\t")[1:4] == ["Exact", "2", "0.72"]

    def test_json(self, capsys):
        assert run(["walk", CROSSWALK, "--start", "FMA:24875", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert {d["target"] for d in data} == {"MA:0000007", "UBERON:0002101", "UMLS:C0015385"}

    def test_closure(self, capsys):
        assert run(["closure", CROSSWALK, "--tier", "exact", "--tool-name", "walker"]) == 0
        derived = parse_embedded(capsys.readouterr().out.encode("utf-8")).mapping_set
        assert len(derived.mappings) == 2
        assert derived.mapping_tool == "walker"


def test_match(capsys):
    args = [
        "match",
        "--left", str(FIXTURES / "left.terms.tsv"),
        "--right", str(FIXTURES / "right.terms.tsv"),
        "--preprocess", "CaseFold",
        "--preprocess", "Stemming",
        "--mapping-date", "2024-05-01",
    ]
    assert run(args) == 0
    produced = parse_embedded(capsys.readouterr().out.encode("utf-8")).mapping_set
    assert [(str(m.subject_id), str(m.object_id)) for m in produced.mappings] == [("X:1", "Y:1"), ("X:2", "Y:3")]
    assert {str(m.mapping_date) for m in produced.mappings} == {"2024-05-01"}
