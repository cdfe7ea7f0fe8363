from __future__ import annotations

import re
import logging
from urllib.parse import urlparse


logger = logging.getLogger(__name__)


IRI_SCHEMES = ("http", "https", "urn")

# Characters N-Triples forbids inside an IRIREF
_FORBIDDEN_IRI_CHARS = re.compile(r'[\s<>"{}|^`\\]')


def is_plausible_iri_prefix(iri: str) -> tuple[bool, str]:
    """
    Check that a curie_map value looks like the start of an IRI.

    Returns:
        (is_valid, error_message)
    """
    # Check 1: not empty
    if not iri or not iri.strip():
        return False, "IRI prefix is empty"

    # Check 2: no characters that cannot appear in an IRI
    if _FORBIDDEN_IRI_CHARS.search(iri):
        return False, "IRI prefix contains whitespace or a character not allowed in IRIs"

    # Check 3: parseable with a known scheme
    try:
        parsed = urlparse(iri)
    except ValueError:
        return False, "Could not parse IRI prefix"

    if parsed.scheme.lower() not in IRI_SCHEMES:
        return False, f"Invalid scheme: '{parsed.scheme}' (expected one of {', '.join(IRI_SCHEMES)})"

    # Check 4: http(s) needs an authority
    if parsed.scheme.lower() in ("http", "https") and not parsed.netloc:
        return False, "IRI prefix has no host"

    # Check 5: urn needs a namespace identifier
    if parsed.scheme.lower() == "urn" and not parsed.path:
        return False, "URN prefix has no namespace identifier"

    return True, ""


def is_plausible_iri(value: str) -> bool:
    """Whether a full IRI (mapping_set_id, license, ...) can be written as an N-Triples term."""
    valid, _ = is_plausible_iri_prefix(value)
    return valid
