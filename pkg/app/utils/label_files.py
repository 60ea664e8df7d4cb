"""
Parsers for the plain-text label and edge-list formats.

Label file: one token per line, line i holds the label of object i. A line may
instead hold two tokens ``node_id label`` (keyed form, used for network ground
truths). Blank lines and lines starting with ``#`` are ignored everywhere.
"""
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import NamedTuple, Optional, TextIO

from app.core.exceptions import ParseError
from app.schemas.partition import Labeling
from app.services.partition import make_labeling

logger = logging.getLogger(__name__)


class LabelFile(NamedTuple):
    labels: list[str]
    keys: Optional[list[str]]


class EdgeList(NamedTuple):
    nodes: list[str]
    pairs: list[tuple[str, str]]
    self_loops: int


def _content_lines(lines: Iterable[str]) -> Iterable[tuple[int, list[str]]]:
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line.split()


def parse_label_lines(lines: Iterable[str]) -> LabelFile:
    labels: list[str] = []
    keys: list[str] = []
    width: Optional[int] = None
    for number, tokens in _content_lines(lines):
        if len(tokens) not in (1, 2):
            raise ParseError(f"expected 'label' or 'node_id label', got {len(tokens)} tokens", number)
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise ParseError("mixed positional and keyed label lines", number)
        if width == 2:
            keys.append(tokens[0])
        labels.append(tokens[-1])
    if not labels:
        raise ParseError("label file has no labels")
    if width == 2 and len(set(keys)) != len(keys):
        raise ParseError("duplicate node id in keyed label file")
    return LabelFile(labels=labels, keys=keys if width == 2 else None)


def read_label_file(path: Path) -> LabelFile:
    with open(path, encoding="utf-8") as handle:
        parsed = parse_label_lines(handle)
    logger.info(f"[read_label_file] {path}: {len(parsed.labels)} labels")
    return parsed


def labeling_from_file(parsed: LabelFile, order: Optional[Sequence[str]] = None) -> Labeling:
    """Positional labels, or keyed labels rearranged to ``order`` when it is given."""
    if order is None or parsed.keys is None:
        return make_labeling(parsed.labels)
    by_key = dict(zip(parsed.keys, parsed.labels))
    missing = [key for key in order if key not in by_key]
    if missing:
        raise ParseError(f"{len(missing)} ids have no label (first: {missing[0]!r})")
    return make_labeling([by_key[key] for key in order])


def paired_labelings(parsed_f: LabelFile, parsed_g: LabelFile) -> tuple[Labeling, Labeling]:
    """Labelings of two files; keyed files are matched on the first file's node ids."""
    return labeling_from_file(parsed_f), labeling_from_file(parsed_g, parsed_f.keys)


def parse_edge_lines(stream: TextIO | Iterable[str]) -> EdgeList:
    """Read ``u v [extra]`` lines; extra tokens (timestamps, weights) are ignored."""
    nodes: dict[str, None] = {}
    pairs: list[tuple[str, str]] = []
    self_loops = 0
    for number, tokens in _content_lines(stream):
        if len(tokens) < 2:
            raise ParseError("expected two node tokens", number)
        u, v = tokens[0], tokens[1]
        nodes.setdefault(u)
        nodes.setdefault(v)
        if u == v:
            self_loops += 1
            continue
        pairs.append((u, v))
    return EdgeList(nodes=list(nodes), pairs=pairs, self_loops=self_loops)
