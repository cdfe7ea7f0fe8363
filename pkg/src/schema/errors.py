from __future__ import annotations

from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from src.schema.diagnostic import Diagnostic


class SSSOMError(Exception):
    """Base class for every error raised by the toolkit."""


class MalformedCurie(SSSOMError, ValueError):
    def __init__(self, text: str, reason: str):
        super().__init__(f"Malformed CURIE '{text}': {reason}")
        self.text = text
        self.reason = reason


class UnresolvablePrefix(SSSOMError, KeyError):
    def __init__(self, prefix: str):
        super().__init__(prefix)
        self.prefix = prefix

    def __str__(self) -> str:
        return f"Prefix '{self.prefix}' is not declared in the curie_map or the built-in prefixes"


class NoMatchingPrefix(SSSOMError, ValueError):
    def __init__(self, iri: str):
        super().__init__(f"No prefix in the map matches IRI '{iri}'")
        self.iri = iri


class PrefixConflict(SSSOMError, ValueError):
    def __init__(self, prefix: str, iri_a: str, iri_b: str):
        super().__init__(f"Prefix '{prefix}' is bound to both '{iri_a}' and '{iri_b}'")
        self.prefix = prefix
        self.iri_a = iri_a
        self.iri_b = iri_b


class UnknownMatchType(SSSOMError, ValueError):
    def __init__(self, raw: str):
        super().__init__(f"Unknown match_type '{raw}'")
        self.raw = raw


class FatalParse(SSSOMError):
    def __init__(self, message: str, diagnostic: Optional["Diagnostic"] = None):
        super().__init__(message)
        self.diagnostic = diagnostic


class SerializationError(SSSOMError):
    pass


class ConfigError(SSSOMError, ValueError):
    pass
