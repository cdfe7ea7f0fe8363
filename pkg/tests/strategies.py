"""
Hypothesis strategies over the slot registry.
"""
from __future__ import annotations

from datetime import date
from decimal import Decimal

from hypothesis import strategies as st

from src.schema.curie import Curie, PrefixMap
from src.schema.enums import MatchType, PreprocessingToken
from src.schema.mapping import Mapping, MappingSet
from src.schema.predicates import RECOMMENDED_PREDICATES
from src.schema.slots import StoredDecimal


PREFIXES = {
    "X": "http://example.org/x/",
    "Y": "http://example.org/y/",
    "Z": "http://example.org/z/",
}

_PREDICATES = sorted(RECOMMENDED_PREDICATES, key=str)

# printable text without control, surrogate or line/paragraph separator characters
_TEXT = st.text(
    alphabet=st.characters(blacklist_categories=("Cc", "Cs", "Zl", "Zp")),
    min_size=1,
    max_size=12,
)
_LIST_ITEM = _TEXT.filter(lambda s: "|" not in s)

# header values, including scalars YAML would otherwise read as numbers, booleans or maps
_HEADER_TEXT = st.sampled_from(["1.0", "yes", "null", "a: b", "v2", "curated by hand", "ça va"])

_EXTENSION_COLUMNS = ["alignment_note", "ext_rank", "zz_reviewed"]
_SET_EXTENSION_KEYS = ["ext_note", "ext_tags", "see_also"]


def curies(prefixes=tuple(PREFIXES)) -> st.SearchStrategy[Curie]:
    return st.builds(
        lambda prefix, local: Curie(prefix=prefix, local_id=local),
        st.sampled_from(list(prefixes)),
        st.from_regex(r"[0-9]{1,4}", fullmatch=True),
    )


def confidences() -> st.SearchStrategy[Decimal]:
    return st.decimals(min_value=0, max_value=1, places=4, allow_nan=False, allow_infinity=False)


def decimal_texts() -> st.SearchStrategy[Decimal]:
    """Values in [0,1] written in every notation a cell may use, keeping their digits."""
    texts = st.one_of(
        st.from_regex(r"0?\.[0-9]{1,12}", fullmatch=True),
        st.from_regex(r"[0-9]{1,9}[eE]-(?:9|1[0-2])", fullmatch=True),
        st.sampled_from(["0", "1", "0.", "1.", "1.0", "1.000", "+0.5", "0E-7", "0.0000001", "1e-1", "5E-1"]),
    )
    return texts.map(StoredDecimal) | st.decimals(min_value=0, max_value=1, places=9)


def dates() -> st.SearchStrategy[date]:
    return st.dates(min_value=date(1990, 1, 1), max_value=date(2099, 12, 31))


def _optional(strategy):
    return st.none() | strategy


def _tuple_of(strategy, max_size=2):
    return st.lists(strategy, max_size=max_size).map(tuple)


@st.composite
def mappings(draw, subjects=None, objects=None, scores=None) -> Mapping:
    subjects = subjects or curies()
    objects = objects or curies()
    scores = scores or decimal_texts()
    score = draw(_optional(scores))
    return Mapping(
        subject_id=draw(subjects),
        predicate_id=draw(st.sampled_from(_PREDICATES)),
        object_id=draw(objects),
        match_type=draw(st.sampled_from(list(MatchType))),
        subject_label=draw(_optional(_TEXT)),
        subject_source=draw(_optional(_TEXT)),
        subject_source_version=draw(_optional(_TEXT)),
        subject_match_field=draw(_tuple_of(curies())),
        predicate_modifier=draw(st.sampled_from([None, None, None, "Not"])),
        object_label=draw(_optional(_TEXT)),
        object_source=draw(_optional(_TEXT)),
        object_source_version=draw(_optional(_TEXT)),
        object_match_field=draw(_tuple_of(curies())),
        match_string=draw(_tuple_of(_LIST_ITEM)),
        preprocessing=draw(_tuple_of(st.sampled_from([t.value for t in PreprocessingToken]))),
        confidence=draw(_optional(scores)),
        semantic_similarity_score=score,
        semantic_similarity_measure=draw(_TEXT) if score is not None else draw(_optional(_TEXT)),
        mapping_tool=draw(_optional(_TEXT)),
        mapping_tool_version=draw(_optional(_TEXT)),
        author_id=draw(_tuple_of(curies(("orcid",)))),
        creator_id=draw(_tuple_of(curies(("orcid",)))),
        reviewer_id=draw(_tuple_of(curies(("orcid",)))),
        mapping_date=draw(_optional(dates())),
        publication_date=draw(_optional(dates())),
        mapping_provider=draw(_optional(_TEXT)),
        comment=draw(_optional(_TEXT)),
        extensions=draw(st.dictionaries(st.sampled_from(_EXTENSION_COLUMNS), _TEXT, max_size=2)),
    )


@st.composite
def mapping_sets(draw, min_size=0, max_size=6) -> MappingSet:
    rows = draw(st.lists(mappings(), min_size=min_size, max_size=max_size))
    return MappingSet(
        mapping_set_id=draw(_optional(st.sampled_from([
            "https://example.org/sets/a",
            "https://example.org/sets/b",
        ]))),
        mapping_set_version=draw(_optional(_HEADER_TEXT)),
        license=draw(_optional(st.just("https://creativecommons.org/publicdomain/zero/1.0/"))),
        creator_id=draw(_tuple_of(curies(("orcid",)))),
        mapping_provider=draw(_optional(_HEADER_TEXT)),
        mapping_tool=draw(_optional(st.sampled_from(["rdf_matcher", "hand curation"]))),
        mapping_date=draw(_optional(dates())),
        publication_date=draw(_optional(dates())),
        comment=draw(_optional(_HEADER_TEXT)),
        curie_map=PrefixMap(entries=PREFIXES),
        mappings=tuple(rows),
        set_extensions=draw(st.dictionaries(
            st.sampled_from(_SET_EXTENSION_KEYS),
            _HEADER_TEXT | st.lists(_HEADER_TEXT, min_size=1, max_size=3),
            max_size=2,
        )),
    )


@st.composite
def assertion_sets(draw, max_size=8) -> MappingSet:
    """Sets whose rows are distinct assertions, for the set-algebra laws."""
    rows = draw(st.lists(mappings(), max_size=max_size, unique_by=lambda m: m.key))
    return MappingSet(curie_map=PrefixMap(entries=PREFIXES), mappings=tuple(rows))


@st.composite
def assertion_families(draw, count=3, max_size=10):
    """
    `count` assertion sets drawn from one pool of distinct assertions, so a
    key shared by two sets always carries the same row.
    """
    pool = draw(st.lists(mappings(), max_size=max_size, unique_by=lambda m: m.key))
    family = []
    for _ in range(count):
        chosen = draw(st.lists(st.sampled_from(pool), unique_by=lambda m: m.key) if pool else st.just([]))
        family.append(MappingSet(curie_map=PrefixMap(entries=PREFIXES), mappings=tuple(chosen)))
    return family
