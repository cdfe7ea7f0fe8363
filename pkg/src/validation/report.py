from __future__ import annotations

import json
from collections import Counter
from typing import Dict, List

from src.schema.diagnostic import Diagnostic
from src.schema.enums import Severity


def render_text(diagnostics: List[Diagnostic]) -> str:
    """One line per finding: `SEVERITY CODE row=N slot=S message`."""
    lines = []
    for d in diagnostics:
        lines.append(f"{d.severity.value.upper()} {d.code} row={d.location} slot={d.slot or '-'} {d.message}")
    return "\n".join(lines) + ("\n" if lines else "")


def render_json(diagnostics: List[Diagnostic]) -> str:
    return json.dumps([d.model_dump(mode="json") for d in diagnostics], indent=2, ensure_ascii=False) + "\n"


def has_errors(diagnostics: List[Diagnostic]) -> bool:
    return any(d.severity == Severity.Error for d in diagnostics)


def severity_counts(diagnostics: List[Diagnostic]) -> Dict[str, int]:
    counts = Counter(d.severity.value for d in diagnostics)
    return {s.value: counts.get(s.value, 0) for s in Severity}
