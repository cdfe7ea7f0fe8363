from __future__ import annotations

from pathlib import Path

import pytest

from src.schema.curie import Curie
from src.schema.mapping import Mapping, MappingSet
from src.tsv.reader import ParsedDocument, parse_embedded


FIXTURES = Path(__file__).parent / "fixtures"
DEFECTS = FIXTURES / "defects"


def fixture_bytes(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


def c(text: str) -> Curie:
    return Curie.parse(text)


def row(subject: str, predicate: str, obj: str, match_type: str = "Lexical", **slots) -> Mapping:
    """Compact Mapping builder; subject, predicate and object are given as CURIE text."""
    return Mapping(
        subject_id=c(subject),
        predicate_id=c(predicate),
        object_id=c(obj),
        match_type=match_type,
        **slots,
    )


@pytest.fixture
def exposure_bytes() -> bytes:
    return fixture_bytes("exposure.sssom.tsv")


@pytest.fixture
def exposure_document(exposure_bytes) -> ParsedDocument:
    return parse_embedded(exposure_bytes)


@pytest.fixture
def exposure(exposure_document) -> MappingSet:
    return exposure_document.mapping_set


@pytest.fixture
def crosswalk() -> MappingSet:
    return parse_embedded(fixture_bytes("crosswalk.sssom.tsv")).mapping_set


@pytest.fixture(autouse=True)
def builtin_prefixes_on(monkeypatch):
    from src.config.settings import settings

    monkeypatch.setattr(settings, "BUILTIN_PREFIXES_ENABLED", True)
