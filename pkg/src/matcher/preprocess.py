from __future__ import annotations

from typing import Callable, Dict, Sequence

from src.schema.enums import PreprocessingToken


MIN_STEM_LENGTH = 3

# longest suffix first
_SUFFIXES = ("ies", "ing", "es", "ed", "s")

_ES_CONTEXTS = ("s", "x", "z", "ch", "sh")


def _stem_word(word: str) -> str:
    for suffix in _SUFFIXES:
        if not word.endswith(suffix):
            continue
        stem = word[: -len(suffix)]
        if suffix == "es" and not stem.endswith(_ES_CONTEXTS):
            # "exposures" keeps its "e": fall through to the "-s" rule
            continue
        if suffix == "s" and stem.endswith("s"):
            return word
        if suffix == "ies":
            stem += "y"
        if len(stem) < MIN_STEM_LENGTH:
            return word
        return stem
    return word


def stem(text: str) -> str:
    """Strip one inflectional suffix from every space-separated word."""
    return " ".join(_stem_word(word) for word in text.split(" "))


def _strip_punctuation(text: str) -> str:
    return "".join(ch for ch in text if ch.isalpha() or ch.isdigit() or ch.isspace())


_STEPS: Dict[PreprocessingToken, Callable[[str], str]] = {
    PreprocessingToken.CaseFold: str.casefold,
    PreprocessingToken.WhitespaceNormalize: lambda text: " ".join(text.split()),
    PreprocessingToken.StripPunctuationNonDigit: _strip_punctuation,
    PreprocessingToken.Stemming: stem,
}


def preprocess(text: str, tokens: Sequence[PreprocessingToken]) -> str:
    """Apply the normalizations in the given order."""
    for token in tokens:
        text = _STEPS[token](text)
    return text
