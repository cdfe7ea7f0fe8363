"""
Header grammar: the YAML subset carried in `#`-prefixed lines (embedded mode)
or in a sidecar file (external mode).

Only plain or quoted scalars, block lists of scalars and one-level maps of
scalars are accepted. Every scalar stays a string; typing is left to the slot
registry.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Tuple

import yaml

from src.schema.diagnostic import Diagnostic, make_diagnostic
from src.schema.errors import FatalParse, SerializationError
from src.schema.mapping import HeaderValue


logger = logging.getLogger(__name__)


HeaderBlock = Dict[str, HeaderValue]

COMMENT = "#"


def _check_events(text: str) -> None:
    """Reject YAML features outside the supported subset."""
    depth = 0
    documents = 0
    for event in yaml.parse(text, Loader=yaml.BaseLoader):
        if isinstance(event, yaml.DocumentStartEvent):
            documents += 1
            if documents > 1:
                raise FatalParse("header: multiple YAML documents are not supported")
        if isinstance(event, yaml.AliasEvent):
            raise FatalParse(f"header: alias '*{event.anchor}' is not supported")
        if isinstance(event, (yaml.ScalarEvent, yaml.SequenceStartEvent, yaml.MappingStartEvent)):
            if event.anchor is not None:
                raise FatalParse(f"header: anchor '&{event.anchor}' is not supported")
            if event.tag is not None:
                raise FatalParse(f"header: tag '{event.tag}' is not supported")
        if isinstance(event, (yaml.SequenceStartEvent, yaml.MappingStartEvent)):
            if event.flow_style:
                raise FatalParse("header: flow collections ([...] or {...}) are not supported")
            depth += 1
            if depth > 2:
                raise FatalParse("header: nesting deeper than one level is not supported")
        elif isinstance(event, (yaml.SequenceEndEvent, yaml.MappingEndEvent)):
            depth -= 1


def _scalar(node: yaml.Node, where: str) -> str:
    if not isinstance(node, yaml.ScalarNode):
        raise FatalParse(f"header: {where} must be a plain value")
    return node.value


def parse_header_text(text: str) -> Tuple[HeaderBlock, List[Diagnostic]]:
    """
    Parse header YAML (already stripped of leading `#`) into an ordered block.

    Duplicate keys keep the last value and are reported as E017 warnings.

    Raises:
        FatalParse: malformed YAML or a construct outside the subset.
    """
    diagnostics: List[Diagnostic] = []
    if not text.strip():
        return {}, diagnostics

    try:
        _check_events(text)
        root = yaml.compose(text, Loader=yaml.BaseLoader)
    except yaml.YAMLError as e:
        raise FatalParse(f"header: invalid YAML: {e}") from e

    if root is None:
        return {}, diagnostics
    if not isinstance(root, yaml.MappingNode):
        raise FatalParse("header: top level must be a key/value block")

    block: HeaderBlock = {}
    for key_node, value_node in root.value:
        key = _scalar(key_node, "a key")
        if key in block:
            diagnostics.append(make_diagnostic(
                "E017", f"duplicate header key '{key}': the last value wins", slot=key,
            ))
            del block[key]
        if isinstance(value_node, yaml.ScalarNode):
            block[key] = value_node.value
        elif isinstance(value_node, yaml.SequenceNode):
            block[key] = [_scalar(item, f"an item of '{key}'") for item in value_node.value]
        else:
            entries: Dict[str, str] = {}
            for sub_key, sub_value in value_node.value:
                entries[_scalar(sub_key, f"a key of '{key}'")] = _scalar(sub_value, f"a value of '{key}'")
            block[key] = entries
    return block, diagnostics


def strip_comment_lines(lines: List[str]) -> str:
    """Drop the leading `#` of each header line and join them into YAML text."""
    # spreadsheet editors may leave trailing tabs on header lines
    return "\n".join(line[len(COMMENT):].rstrip("\t") for line in lines) + "\n"


def render_header(block: HeaderBlock) -> List[str]:
    """Render a header block as `#`-prefixed lines, in the block's order."""
    if not block:
        return []
    for key, value in block.items():
        values = value.values() if isinstance(value, dict) else value if isinstance(value, list) else [value]
        for item in values:
            if any(ch in item for ch in "\t\r\n"):
                raise SerializationError(f"header value of '{key}' contains a tab or line break")
    text = yaml.safe_dump(
        block,
        sort_keys=False,
        allow_unicode=True,
        default_flow_style=False,
        width=float("inf"),
    )
    return [COMMENT + line for line in text.splitlines()]
