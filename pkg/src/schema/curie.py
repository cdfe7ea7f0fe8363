from __future__ import annotations

import re
import logging
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping as MappingType, Optional, Tuple

from curies import Converter, Record
from pydantic import BaseModel, ConfigDict, field_validator

from src.config.settings import settings
from src.schema.enums import PrefixConflictPolicy
from src.schema.errors import MalformedCurie, NoMatchingPrefix, PrefixConflict, UnresolvablePrefix
from src.utils.iri import is_plausible_iri_prefix


logger = logging.getLogger(__name__)


PREFIX_PATTERN = re.compile(r"^[A-Za-z0-9_.\-]+$")
_WHITESPACE = re.compile(r"\s")


class Curie(BaseModel):
    """A compact identifier `prefix:local_id`."""

    model_config = ConfigDict(frozen=True)

    prefix: str
    local_id: str

    @field_validator("prefix")
    @classmethod
    def validate_prefix(cls, v: str) -> str:
        if not PREFIX_PATTERN.match(v):
            raise ValueError("prefix must be non-empty and use only letters, digits, '_', '.', '-'")
        return v

    @field_validator("local_id")
    @classmethod
    def validate_local_id(cls, v: str) -> str:
        if not v:
            raise ValueError("local_id must be non-empty")
        if _WHITESPACE.search(v):
            raise ValueError("local_id must not contain whitespace")
        return v

    @classmethod
    def parse(cls, text: str) -> "Curie":
        """Split `text` on its first colon; raises MalformedCurie."""
        prefix, sep, local_id = text.partition(":")
        if not sep:
            raise MalformedCurie(text, "missing ':' separator")
        if not PREFIX_PATTERN.match(prefix):
            raise MalformedCurie(text, "prefix must use only letters, digits, '_', '.', '-'")
        if not local_id:
            raise MalformedCurie(text, "empty local identifier")
        if _WHITESPACE.search(local_id):
            raise MalformedCurie(text, "local identifier contains whitespace")
        # already checked above
        return cls.model_construct(prefix=prefix, local_id=local_id)

    def __str__(self) -> str:
        return f"{self.prefix}:{self.local_id}"


def check_prefix_entry(prefix: str, iri: str) -> Optional[str]:
    """Return why a curie_map entry is unusable, or None when it is fine."""
    if not PREFIX_PATTERN.match(prefix):
        return f"prefix '{prefix}' must use only letters, digits, '_', '.', '-'"
    valid, error = is_plausible_iri_prefix(iri)
    if not valid:
        return f"prefix '{prefix}': {error}"
    return None


class PrefixMap(BaseModel):
    """Association prefix → IRI prefix (the `curie_map` header block)."""

    model_config = ConfigDict(frozen=True)

    entries: Dict[str, str] = {}

    @field_validator("entries")
    @classmethod
    def validate_entries(cls, v: Dict[str, str]) -> Dict[str, str]:
        for prefix, iri in v.items():
            error = check_prefix_entry(prefix, iri)
            if error:
                raise ValueError(error)
        return v

    def get(self, prefix: str) -> Optional[str]:
        return self.entries.get(prefix)

    def items(self) -> Iterator[Tuple[str, str]]:
        return iter(self.entries.items())

    def __contains__(self, prefix: object) -> bool:
        return prefix in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def shared_iri_prefixes(self) -> Dict[str, list[str]]:
        """IRI prefixes bound to more than one prefix, each with its sorted prefixes."""
        by_iri: Dict[str, List[str]] = {}
        for prefix, iri in self.entries.items():
            by_iri.setdefault(iri, []).append(prefix)
        return {iri: sorted(p) for iri, p in by_iri.items() if len(p) > 1}


BUILTIN_PREFIXES: MappingType[str, str] = MappingProxyType({
    "dc": "http://purl.org/dc/terms/",
    "oio": "http://www.geneontology.org/formats/oboInOwl#",
    "orcid": "https://orcid.org/",
    "owl": "http://www.w3.org/2002/07/owl#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "ror": "https://ror.org/",
    "skos": "http://www.w3.org/2004/02/skos/core#",
    "sssom": "https://w3id.org/sssom/",
    "wikidata": "http://www.wikidata.org/entity/",
})


_BUILTIN_MAP = PrefixMap.model_construct(entries=dict(BUILTIN_PREFIXES))
_EMPTY_MAP = PrefixMap.model_construct(entries={})


def builtin_prefix_map() -> PrefixMap:
    """The built-in prefixes, or an empty map when SSSOM_BUILTIN_PREFIXES=off."""
    if not settings.BUILTIN_PREFIXES_ENABLED:
        return _EMPTY_MAP
    return _BUILTIN_MAP


def resolves(prefix: str, pm: PrefixMap) -> bool:
    return prefix in pm or prefix in builtin_prefix_map()


@lru_cache(maxsize=256)
def _converter(entries: Tuple[Tuple[str, str], ...]) -> Converter:
    # prefixes sharing an IRI prefix become synonyms of the alphabetically first one
    by_iri: Dict[str, List[str]] = {}
    for prefix, iri in sorted(entries):
        by_iri.setdefault(iri, []).append(prefix)
    records = [
        Record(prefix=prefixes[0], uri_prefix=iri, prefix_synonyms=prefixes[1:])
        for iri, prefixes in by_iri.items()
    ]
    return Converter(records)


def converter_for(pm: PrefixMap) -> Converter:
    """A `curies.Converter` over the entries of `pm`."""
    return _converter(tuple(sorted(pm.items())))


def expand(curie: Curie, pm: PrefixMap) -> str:
    """Expand a CURIE to an IRI; the set's map is consulted before the built-ins."""
    text = str(curie)
    for source in (pm, builtin_prefix_map()):
        iri = converter_for(source).expand(text)
        if iri is not None:
            return iri
    raise UnresolvablePrefix(curie.prefix)


def _compress(iri: str, pm: PrefixMap) -> Optional[Curie]:
    compressed = converter_for(pm).compress(iri)
    if compressed is None:
        return None
    try:
        return Curie.parse(compressed)
    except MalformedCurie:
        # the IRI is the bare IRI prefix, or its remainder holds whitespace
        return None


def contract(iri: str, pm: PrefixMap) -> Curie:
    """Contract an IRI with the longest matching IRI prefix of `pm`, then of the built-ins."""
    curie = _compress(iri, pm)
    if curie is None:
        curie = _compress(iri, builtin_prefix_map())
    if curie is None:
        raise NoMatchingPrefix(iri)
    return curie


def merge_prefix_maps(
    a: PrefixMap,
    b: PrefixMap,
    on_conflict: PrefixConflictPolicy = PrefixConflictPolicy.error,
) -> PrefixMap:
    """Union of two prefix maps; identical duplicates collapse."""
    merged = dict(a.entries)
    for prefix, iri in b.items():
        existing = merged.get(prefix)
        if existing is None:
            merged[prefix] = iri
        elif existing != iri:
            if on_conflict == PrefixConflictPolicy.error:
                raise PrefixConflict(prefix, existing, iri)
            logger.warning(f"Prefix conflict resolved by first-wins: prefix={prefix}, kept={existing}, dropped={iri}")
    return PrefixMap.model_construct(entries=merged)
