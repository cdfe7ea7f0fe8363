from enum import Enum


class MatchType(str, Enum):
    Lexical = "Lexical"
    Logical = "Logical"
    HumanCurated = "HumanCurated"
    SemanticSimilarity = "SemanticSimilarity"
    Complex = "Complex"


class PredicateModifier(str, Enum):
    Not = "Not"


class PredicateTier(str, Enum):
    Exact = "Exact"
    Close = "Close"
    Related = "Related"
    Broad = "Broad"
    Narrow = "Narrow"
    Unknown = "Unknown"


class PreprocessingToken(str, Enum):
    CaseFold = "CaseFold"
    WhitespaceNormalize = "WhitespaceNormalize"
    StripPunctuationNonDigit = "StripPunctuationNonDigit"
    Stemming = "Stemming"


class ParseMode(str, Enum):
    strict = "strict"
    lenient = "lenient"


class Severity(str, Enum):
    Error = "Error"
    Warning = "Warning"
    Info = "Info"


class CardinalityPolicy(str, Enum):
    subject_unique = "subject-unique"
    object_unique = "object-unique"
    one_to_one = "one-to-one"


class PrefixConflictPolicy(str, Enum):
    error = "error-on-prefix-conflict"
    first_wins = "first-wins"


class FieldPair(str, Enum):
    label_label = "label/label"
    label_exact_synonym = "label/exactSynonym"
    exact_synonym_label = "exactSynonym/label"
    exact_synonym_exact_synonym = "exactSynonym/exactSynonym"
    identifier_identifier = "identifier/identifier"


class ExportFormat(str, Enum):
    tsv = "tsv"
    json = "json"
    ntriples = "ntriples"
