from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from src.schema.curie import Curie
from src.schema.enums import MatchType, ParseMode, PredicateTier, PreprocessingToken
from src.schema.errors import UnknownMatchType


def _c(text: str) -> Curie:
    return Curie.parse(text)


OWL_SAME_AS = _c("owl:sameAs")
OWL_EQUIVALENT_CLASS = _c("owl:equivalentClass")
OWL_EQUIVALENT_PROPERTY = _c("owl:equivalentProperty")
RDFS_SUBCLASS_OF = _c("rdfs:subClassOf")
RDFS_SUBPROPERTY_OF = _c("rdfs:subPropertyOf")
SKOS_EXACT_MATCH = _c("skos:exactMatch")
SKOS_CLOSE_MATCH = _c("skos:closeMatch")
SKOS_RELATED_MATCH = _c("skos:relatedMatch")
SKOS_BROAD_MATCH = _c("skos:broadMatch")
SKOS_NARROW_MATCH = _c("skos:narrowMatch")

# Match-field properties
RDFS_LABEL = _c("rdfs:label")
OIO_HAS_EXACT_SYNONYM = _c("oio:hasExactSynonym")
OIO_HAS_DB_XREF = _c("oio:hasDbXref")
DC_IDENTIFIER = _c("dc:identifier")


# Recommended predicate vocabulary and the composition class of each predicate
PREDICATE_TIERS: Dict[Curie, PredicateTier] = {
    OWL_SAME_AS: PredicateTier.Exact,
    OWL_EQUIVALENT_CLASS: PredicateTier.Exact,
    OWL_EQUIVALENT_PROPERTY: PredicateTier.Exact,
    SKOS_EXACT_MATCH: PredicateTier.Exact,
    SKOS_CLOSE_MATCH: PredicateTier.Close,
    SKOS_RELATED_MATCH: PredicateTier.Related,
    SKOS_BROAD_MATCH: PredicateTier.Broad,
    SKOS_NARROW_MATCH: PredicateTier.Narrow,
    # the subject is the narrower concept, as with skos:broadMatch
    RDFS_SUBCLASS_OF: PredicateTier.Broad,
    RDFS_SUBPROPERTY_OF: PredicateTier.Broad,
}

RECOMMENDED_PREDICATES = frozenset(PREDICATE_TIERS)

_INVERSES: Dict[Curie, Curie] = {
    OWL_SAME_AS: OWL_SAME_AS,
    OWL_EQUIVALENT_CLASS: OWL_EQUIVALENT_CLASS,
    OWL_EQUIVALENT_PROPERTY: OWL_EQUIVALENT_PROPERTY,
    SKOS_EXACT_MATCH: SKOS_EXACT_MATCH,
    SKOS_CLOSE_MATCH: SKOS_CLOSE_MATCH,
    SKOS_RELATED_MATCH: SKOS_RELATED_MATCH,
    SKOS_BROAD_MATCH: SKOS_NARROW_MATCH,
    SKOS_NARROW_MATCH: SKOS_BROAD_MATCH,
}

# SKOS predicate written for a derived mapping of each tier
TIER_PREDICATES: Dict[PredicateTier, Curie] = {
    PredicateTier.Exact: SKOS_EXACT_MATCH,
    PredicateTier.Close: SKOS_CLOSE_MATCH,
    PredicateTier.Related: SKOS_RELATED_MATCH,
    PredicateTier.Broad: SKOS_BROAD_MATCH,
    PredicateTier.Narrow: SKOS_NARROW_MATCH,
}

# match_type spellings accepted in lenient mode, with the preprocessing they imply
_LENIENT_MATCH_TYPES: Dict[str, Tuple[MatchType, Tuple[str, ...]]] = {
    "LexicalStemming": (MatchType.Lexical, (PreprocessingToken.Stemming.value,)),
}

_CANONICAL_MATCH_TYPES = {m.value: m for m in MatchType}


def predicate_tier(predicate: Curie) -> PredicateTier:
    return PREDICATE_TIERS.get(predicate, PredicateTier.Unknown)


def invert_predicate(predicate: Curie) -> Optional[Curie]:
    """Inverse predicate, or None when the predicate has no inverse in the vocabulary."""
    return _INVERSES.get(predicate)


def normalize_match_type(raw: str, mode: ParseMode = ParseMode.lenient) -> Tuple[MatchType, List[str]]:
    """
    Map a match_type cell to a MatchType plus the preprocessing tokens it implies.

    Raises:
        UnknownMatchType: for anything but the five canonical names in strict
            mode, or anything not known to the lenient table in lenient mode.
    """
    canonical = _CANONICAL_MATCH_TYPES.get(raw)
    if canonical is not None:
        return canonical, []
    if mode == ParseMode.lenient and raw in _LENIENT_MATCH_TYPES:
        match_type, extra = _LENIENT_MATCH_TYPES[raw]
        return match_type, list(extra)
    raise UnknownMatchType(raw)
