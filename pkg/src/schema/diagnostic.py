from __future__ import annotations

from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from src.schema.enums import CardinalityPolicy, ParseMode, Severity


# code -> (default severity, short title)
DIAGNOSTIC_CATALOG: Dict[str, Tuple[Severity, str]] = {
    "E001": (Severity.Error, "required slot missing or empty"),
    "E002": (Severity.Error, "CURIE prefix cannot be resolved"),
    "E003": (Severity.Error, "score outside [0,1]"),
    "E004": (Severity.Warning, "predicate outside the recommended vocabulary"),
    "E005": (Severity.Error, "unknown match_type"),
    "E006": (Severity.Error, "malformed date"),
    "E007": (Severity.Warning, "duplicate mapping"),
    "E008": (Severity.Error, "malformed CURIE"),
    "E009": (Severity.Warning, "semantic_similarity_score without semantic_similarity_measure"),
    "E010": (Severity.Error, "invalid predicate_modifier"),
    "E011": (Severity.Warning, "missing set-level license or mapping_set_id"),
    "E012": (Severity.Error, "unparseable number"),
    "E013": (Severity.Warning, "identifier outside the recommended schemes"),
    "E014": (Severity.Warning, "unknown preprocessing token"),
    "E015": (Severity.Info, "subject equals object"),
    "E016": (Severity.Error, "row cell count differs from the column header"),
    "E017": (Severity.Warning, "header notice"),
    "E018": (Severity.Error, "unusable curie_map entry"),
    "E019": (Severity.Warning, "IRI prefix bound to several prefixes"),
    "E020": (Severity.Warning, "cardinality policy violated"),
    "E021": (Severity.Info, "mapping set has no mappings"),
    "E022": (Severity.Info, "header block is empty"),
}

SET_LOCATION = "set"


class Diagnostic(BaseModel):
    """One validation finding."""

    model_config = ConfigDict(frozen=True)

    code: str
    severity: Severity
    row: Optional[int] = None  # 1-based data row; None for set-level findings
    slot: Optional[str] = None
    message: str

    @field_validator("code")
    @classmethod
    def validate_code(cls, v: str) -> str:
        if v not in DIAGNOSTIC_CATALOG:
            raise ValueError(f"unknown diagnostic code '{v}'")
        return v

    @property
    def location(self) -> str:
        return SET_LOCATION if self.row is None else str(self.row)

    def sort_key(self) -> Tuple[int, str, str, str]:
        return (self.row or 0, self.code, self.slot or "", self.message)

    def identity(self) -> Tuple[Optional[int], Optional[str], str]:
        return (self.row, self.slot, self.code)


class RuleConfig(BaseModel):
    """Validator configuration."""

    model_config = ConfigDict(frozen=True)

    severity_overrides: Dict[str, Severity] = {}
    cardinality: Optional[CardinalityPolicy] = None
    mode: ParseMode = ParseMode.lenient

    @field_validator("severity_overrides")
    @classmethod
    def validate_overrides(cls, v: Dict[str, Severity]) -> Dict[str, Severity]:
        unknown = sorted(code for code in v if code not in DIAGNOSTIC_CATALOG)
        if unknown:
            raise ValueError(f"unknown diagnostic codes: {', '.join(unknown)}")
        return v


def default_severity(code: str, mode: ParseMode = ParseMode.lenient) -> Severity:
    if code == "E005":
        return Severity.Error if mode == ParseMode.strict else Severity.Warning
    return DIAGNOSTIC_CATALOG[code][0]


def make_diagnostic(
    code: str,
    message: str,
    row: Optional[int] = None,
    slot: Optional[str] = None,
    config: Optional[RuleConfig] = None,
    mode: ParseMode = ParseMode.lenient,
) -> Diagnostic:
    """Build a diagnostic with the severity implied by the catalog, mode and overrides."""
    if config is not None:
        mode = config.mode
        severity = config.severity_overrides.get(code, default_severity(code, mode))
    else:
        severity = default_severity(code, mode)
    return Diagnostic(code=code, severity=severity, row=row, slot=slot, message=message)


def merge_diagnostics(*groups: list[Diagnostic]) -> list[Diagnostic]:
    """
    Union of diagnostic lists in report order.

    A finding of a later list is dropped when an earlier list already reports
    the same (row, slot, code).
    """
    seen: set = set()
    merged = []
    for group in groups:
        merged.extend(d for d in group if d.identity() not in seen)
        seen.update(d.identity() for d in group)
    return sorted(merged, key=Diagnostic.sort_key)
