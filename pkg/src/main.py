from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date
from decimal import Decimal, InvalidOperation
from typing import List, Optional, Sequence

from src.aggregation.stats import StatsAggregator, render_stats_json, render_stats_text
from src.config.settings import settings
from src.loader.file_loader import FileLoader
from src.loader.term_loader import TermTableLoader
from src.matcher.lexical import MatchConfig, match
from src.pipeline.processor import MappingSetProcessor
from src.schema.curie import Curie
from src.schema.diagnostic import DIAGNOSTIC_CATALOG, RuleConfig
from src.schema.enums import (
    CardinalityPolicy,
    ExportFormat,
    FieldPair,
    MatchType,
    ParseMode,
    PredicateTier,
    PrefixConflictPolicy,
    PreprocessingToken,
    Severity,
)
from src.schema.errors import ConfigError, SSSOMError
from src.schema.mapping import MappingSet
from src.transforms.export import to_json, to_ntriples
from src.transforms.setops import FilterCriteria, diff, filter_set, invert, merge
from src.tsv.reader import ParsedDocument, embed
from src.tsv.writer import serialize_canonical
from src.validation.report import has_errors, render_json, render_text
from src.walker.graph import build_graph, closure, neighbors, render_path


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2

_TIERS = {t.value.lower(): t for t in PredicateTier if t != PredicateTier.Unknown}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_ERROR)


def _decimal(text: str) -> Decimal:
    try:
        return Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"'{text}' is not a number")


def _tier(text: str) -> PredicateTier:
    tier = _TIERS.get(text.lower())
    if tier is None:
        raise argparse.ArgumentTypeError(f"'{text}' is not one of {', '.join(_TIERS)}")
    return tier


def _date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a YYYY-MM-DD date")


def _severity_override(text: str) -> tuple[str, Severity]:
    code, _, severity = text.partition("=")
    if code not in DIAGNOSTIC_CATALOG or severity not in {s.value for s in Severity}:
        raise argparse.ArgumentTypeError(f"'{text}' is not CODE=Error|Warning|Info with a known code")
    return code, Severity(severity)


def _add_input_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--strict", action="store_true", help="Reject non-canonical match types and bad cells")
    parser.add_argument("--header", default=None, help="External metadata header (YAML)")


def _add_set_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--set-id", default=None, help="mapping_set_id of the output")
    parser.add_argument("--license", default=None, help="license of the output")


def _add_walk_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-distance", type=int, default=2, help="Maximum number of hops")
    parser.add_argument("--tier", type=_tier, action="append", default=None, help="Admitted tier (repeatable)")
    parser.add_argument("--min-confidence", type=_decimal, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="sssom", description="SSSOM mapping set toolkit")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = subparsers.add_parser("parse", help="Parse a file and write it in canonical form")
    p.add_argument("path")
    _add_input_options(p)

    p = subparsers.add_parser("validate", help="Validate a mapping set")
    p.add_argument("path")
    _add_input_options(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--no-fail", action="store_true", help="Exit 0 even when errors are found")
    p.add_argument("--cardinality", choices=[c.value for c in CardinalityPolicy], default=None)
    p.add_argument("--severity", type=_severity_override, action="append", default=[],
                   help="Override a code's severity, e.g. E004=Error (repeatable)")

    p = subparsers.add_parser("convert", help="Export to TSV, JSON or N-Triples")
    p.add_argument("path")
    _add_input_options(p)
    p.add_argument("--to", choices=[f.value for f in ExportFormat], default=ExportFormat.tsv.value)
    p.add_argument("--emit-direct", action="store_true", help="Also write subject-predicate-object triples")

    p = subparsers.add_parser("merge", help="Merge mapping sets")
    p.add_argument("paths", nargs="+")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--on-prefix-conflict", choices=["error", "first-wins"], default="error")
    _add_set_options(p)

    p = subparsers.add_parser("diff", help="Compare two mapping sets by assertion")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = subparsers.add_parser("invert", help="Swap subject and object of invertible mappings")
    p.add_argument("path")
    _add_input_options(p)

    p = subparsers.add_parser("filter", help="Keep mappings satisfying every clause")
    p.add_argument("path")
    _add_input_options(p)
    p.add_argument("--min-confidence", type=_decimal, default=None)
    p.add_argument("--predicate", action="append", default=None)
    p.add_argument("--tier", type=_tier, action="append", default=None)
    p.add_argument("--match-type", choices=[m.value for m in MatchType], action="append", default=None)
    p.add_argument("--subject-prefix", action="append", default=None)
    p.add_argument("--object-prefix", action="append", default=None)
    p.add_argument("--exclude-negated", action="store_true")

    p = subparsers.add_parser("walk", help="Crosswalk from one term")
    p.add_argument("paths", nargs="+")
    p.add_argument("--start", required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_walk_options(p)

    p = subparsers.add_parser("closure", help="Derive mappings from walks of two or more hops")
    p.add_argument("paths", nargs="+")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--tool-name", default=None)
    _add_walk_options(p)
    _add_set_options(p)

    p = subparsers.add_parser("match", help="Lexically match two term tables")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--preprocess", choices=[t.value for t in PreprocessingToken], action="append", default=[])
    p.add_argument("--pair", choices=[f.value for f in FieldPair], action="append", default=None)
    p.add_argument("--predicate", default="skos:exactMatch")
    p.add_argument("--mapping-date", type=_date, default=None)
    p.add_argument("--tool-name", default=None)
    _add_set_options(p)

    p = subparsers.add_parser("embed", help="Turn a TSV plus external header into one embedded-mode file")
    p.add_argument("--tsv", required=True)
    p.add_argument("--header", required=True)

    p = subparsers.add_parser("stats", help="Row counts by predicate, tier, match type and source pair")
    p.add_argument("path")
    _add_input_options(p)
    p.add_argument("--format", choices=["text", "json"], default="text")

    return parser


class _Runner:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.loader = FileLoader()
        strict = getattr(args, "strict", False) or settings.PARSE_MODE == ParseMode.strict.value
        self.mode = ParseMode.strict if strict else ParseMode.lenient

    def _processor(self, config: Optional[RuleConfig] = None) -> MappingSetProcessor:
        return MappingSetProcessor(self.loader, config or RuleConfig(mode=self.mode))

    def _load(self, path: str, header_path: Optional[str] = None) -> ParsedDocument:
        document = self._processor().load(path, header_path)
        for d in document.diagnostics:
            logger.warning(f"{path}: {d.code} row={d.location} slot={d.slot or '-'} {d.message}")
        return document

    def _load_set(self, path: str) -> MappingSet:
        return self._load(path, getattr(self.args, "header", None)).mapping_set

    def _load_sets(self, paths: Sequence[str]) -> List[MappingSet]:
        return [self._load(path).mapping_set for path in paths]

    def _max_distance(self) -> int:
        distance = self.args.max_distance
        if not 1 <= distance <= settings.MAX_WALK_DISTANCE:
            raise ConfigError(f"--max-distance must be between 1 and {settings.MAX_WALK_DISTANCE}")
        return distance

    def _tiers(self):
        return frozenset(self.args.tier) if self.args.tier else None

    def parse(self) -> int:
        _emit(serialize_canonical(self._load_set(self.args.path)))
        return EXIT_OK

    def validate(self) -> int:
        config = RuleConfig(
            mode=self.mode,
            cardinality=CardinalityPolicy(self.args.cardinality) if self.args.cardinality else None,
            severity_overrides=dict(self.args.severity),
        )
        outcome = self._processor(config).process(self.args.path, self.args.header)
        render = render_json if self.args.format == "json" else render_text
        _emit(render(outcome.diagnostics).encode("utf-8"))
        if has_errors(outcome.diagnostics) and not self.args.no_fail:
            return EXIT_FINDINGS
        return EXIT_OK

    def convert(self) -> int:
        mapping_set = self._load_set(self.args.path)
        target = ExportFormat(self.args.to)
        if target == ExportFormat.json:
            _emit(to_json(mapping_set))
        elif target == ExportFormat.ntriples:
            _emit(to_ntriples(mapping_set, emit_direct=self.args.emit_direct))
        else:
            _emit(serialize_canonical(mapping_set))
        return EXIT_OK

    def merge(self) -> int:
        policy = PrefixConflictPolicy.error if self.args.on_prefix_conflict == "error" else PrefixConflictPolicy.first_wins
        merged = merge(self._load_sets(self.args.paths), policy, self.args.set_id, self.args.license)
        _emit(serialize_canonical(merged))
        return EXIT_OK

    def diff(self) -> int:
        report = diff(self._load(self.args.left).mapping_set, self._load(self.args.right).mapping_set)
        if self.args.format == "json":
            _emit((report.model_dump_json(indent=2) + "\n").encode("utf-8"))
            return EXIT_OK
        lines = [f"= {key}" for key in report.common]
        lines += [f"< {key}" for key in report.only_left]
        lines += [f"> {key}" for key in report.only_right]
        lines += [
            f"! {c.subject_id} {c.object_id} {c.predicate_left} {c.predicate_right}"
            for c in report.predicate_conflicts
        ]
        _emit("".join(line + "\n" for line in lines).encode("utf-8"))
        return EXIT_OK

    def invert(self) -> int:
        inverted, dropped = invert(self._load_set(self.args.path))
        for key in dropped:
            logger.warning(f"Not invertible, dropped: {key}")
        _emit(serialize_canonical(inverted))
        return EXIT_OK

    def filter(self) -> int:
        args = self.args
        criteria = FilterCriteria(
            min_confidence=args.min_confidence,
            predicates=frozenset(Curie.parse(p) for p in args.predicate) if args.predicate else None,
            tiers=self._tiers(),
            match_types=frozenset(MatchType(m) for m in args.match_type) if args.match_type else None,
            subject_prefixes=frozenset(args.subject_prefix) if args.subject_prefix else None,
            object_prefixes=frozenset(args.object_prefix) if args.object_prefix else None,
            exclude_negated=args.exclude_negated,
        )
        kept, report = filter_set(self._load_set(args.path), criteria)
        if report.missing_confidence:
            logger.warning(f"Rows without confidence dropped by --min-confidence: count={report.missing_confidence}")
        _emit(serialize_canonical(kept))
        return EXIT_OK

    def walk(self) -> int:
        start = Curie.parse(self.args.start)
        graph = build_graph(self._load_sets(self.args.paths))
        results = neighbors(graph, start, self._max_distance(), self._tiers(), self.args.min_confidence)
        if self.args.format == "json":
            payload = [
                {
                    "target": str(r.target),
                    "tier": r.tier.value,
                    "distance": r.distance,
                    "confidence": str(r.confidence),
                    "path": render_path(start, r),
                }
                for r in results
            ]
            _emit((json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8"))
            return EXIT_OK
        lines = [
            f"{r.target}\t{r.tier.value}\t{r.distance}\t{r.confidence}\t{render_path(start, r)}"
            for r in results
        ]
        _emit("".join(line + "\n" for line in lines).encode("utf-8"))
        return EXIT_OK

    def closure(self) -> int:
        graph = build_graph(self._load_sets(self.args.paths))
        derived = closure(
            graph,
            self._max_distance(),
            self._tiers(),
            self.args.min_confidence,
            tool_name=self.args.tool_name,
            mapping_set_id=self.args.set_id,
            license=self.args.license,
        )
        _emit(serialize_canonical(derived))
        return EXIT_OK

    def match(self) -> int:
        args = self.args
        term_loader = TermTableLoader()
        config = MatchConfig(
            preprocessing=tuple(PreprocessingToken(t) for t in args.preprocess),
            field_pairs=frozenset(FieldPair(p) for p in (args.pair or [FieldPair.label_label.value])),
            predicate=Curie.parse(args.predicate),
            tool_name=args.tool_name or settings.TOOL_NAME,
        )
        result = match(
            term_loader.load(self.loader.load(args.left)),
            term_loader.load(self.loader.load(args.right)),
            config,
            mapping_date=args.mapping_date,
            mapping_set_id=args.set_id,
            license=args.license,
        )
        _emit(serialize_canonical(result))
        return EXIT_OK

    def embed(self) -> int:
        _emit(embed(self.loader.load(self.args.tsv), self.loader.load(self.args.header)))
        return EXIT_OK

    def stats(self) -> int:
        stats = StatsAggregator().aggregate(self._load_set(self.args.path))
        render = render_stats_json if self.args.format == "json" else render_stats_text
        _emit(render(stats).encode("utf-8"))
        return EXIT_OK


def _emit(data: bytes) -> None:
    sys.stdout.flush()
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 when `validate` finds Error-severity diagnostics,
        2 on usage, input or fatal parse errors.
    """
    logging.basicConfig(level=settings.LOG_LEVEL, format=settings.LOG_FORMAT, stream=sys.stderr)

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    runner = _Runner(args)
    try:
        return getattr(runner, args.command)()
    except (SSSOMError, OSError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
