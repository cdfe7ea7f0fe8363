from __future__ import annotations

import logging
import time
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from src.loader.file_loader import FileLoader
from src.schema.diagnostic import Diagnostic, RuleConfig, make_diagnostic, merge_diagnostics
from src.schema.enums import Severity
from src.tsv.reader import ParsedDocument, parse_embedded, parse_external
from src.validation.validator import validate


logger = logging.getLogger(__name__)


class TimingBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    parse_ms: int = 0
    validate_ms: int = 0
    total_ms: int = 0


class ValidationOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    document: ParsedDocument
    diagnostics: List[Diagnostic]
    timing: TimingBreakdown

    @property
    def valid(self) -> bool:
        return not any(d.severity == Severity.Error for d in self.diagnostics)


class MappingSetProcessor:
    def __init__(self, file_loader: FileLoader, config: Optional[RuleConfig] = None):
        self.file_loader = file_loader
        self.config = config or RuleConfig()

    def parse(self, data: bytes, header: Optional[bytes] = None) -> ParsedDocument:
        """Parse in the configured mode; external mode when a header is given."""
        if header is not None:
            return parse_external(data, header, self.config.mode)
        return parse_embedded(data, self.config.mode)

    def load(self, path: str, header_path: Optional[str] = None) -> ParsedDocument:
        header = self.file_loader.load(header_path) if header_path else None
        return self.parse(self.file_loader.load(path), header)

    def _with_overrides(self, diagnostics: List[Diagnostic]) -> List[Diagnostic]:
        return [
            make_diagnostic(d.code, d.message, row=d.row, slot=d.slot, config=self.config)
            for d in diagnostics
        ]

    def process_bytes(self, data: bytes, header: Optional[bytes] = None, source: str = "<bytes>") -> ValidationOutcome:
        """
        Parse and validate one document.

        The report is the union of validator and parser findings; a parser
        finding repeating a validator one on the same row, slot and code is
        dropped.

        Raises:
            FatalParse: the document cannot be parsed at all.
        """
        start_time = time.perf_counter()

        document = self.parse(data, header)
        parse_ms = int((time.perf_counter() - start_time) * 1000)

        validate_start = time.perf_counter()
        findings = validate(document.mapping_set, self.config, document.row_numbers or None)
        validate_ms = int((time.perf_counter() - validate_start) * 1000)

        diagnostics = merge_diagnostics(findings, self._with_overrides(document.diagnostics))
        timing = TimingBreakdown(
            parse_ms=parse_ms,
            validate_ms=validate_ms,
            total_ms=int((time.perf_counter() - start_time) * 1000),
        )
        errors = sum(1 for d in diagnostics if d.severity == Severity.Error)
        logger.info(
            f"Processed mapping set: source={source}, rows={document.rows_read}, "
            f"diagnostics={len(diagnostics)}, errors={errors}, time_ms={timing.total_ms}"
        )
        return ValidationOutcome(document=document, diagnostics=diagnostics, timing=timing)

    def process(self, path: str, header_path: Optional[str] = None) -> ValidationOutcome:
        header = self.file_loader.load(header_path) if header_path else None
        return self.process_bytes(self.file_loader.load(path), header, source=path)
