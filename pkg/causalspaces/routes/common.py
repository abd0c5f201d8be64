"""
Argument helpers shared by the subcommands
"""
import argparse
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from ..core.errors import BAD_ARGUMENT, NOT_FOUND
from ..core.pfun import InputFamily
from ..core.preorder import Preorder, construct
from ..core.settings import settings
from ..core.space import HistorySpace, induce
from ..models import PreorderDocument, SpaceDocument
from ..services.export import to_json, write_text

DEFAULT_LABELS = {
    "diamond": "A,B,C,D",
    "fork": "A,B,C",
    "wedge": "A,B,C",
    "total": "A,B,C",
    "discrete": "A,B,C",
    "indiscrete": "A,B,C",
}


def output_flags() -> argparse.ArgumentParser:
    """Parent parser for flags every subcommand accepts"""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--json", action="store_true", help="print structured output as JSON")
    return parent


def resolve_output(path: str) -> Path:
    """Bare file names land in OUTPUT_DIR"""
    target = Path(path)
    if target.parent == Path("."):
        return Path(settings.OUTPUT_DIR) / target
    return target


def _split(labels: str) -> list[str]:
    return [label.strip() for label in labels.split(",") if label.strip()]


def _read_document(path: Path, model: type[BaseModel]) -> Any:
    if not path.exists():
        raise NOT_FOUND(f"no such file: {path}")
    try:
        return model.model_validate_json(path.read_text("utf-8"))
    except ValidationError as e:
        raise BAD_ARGUMENT(f"{path} is not a valid {model.__name__}: {e.errors()[0]['msg']}") from e


def parse_order(source: str) -> Preorder:
    """An order from a JSON file or a built-in shorthand like ``total:A,B+C,D``.

    ``+`` joins labels into one indefinite block of a total order; ``fork``
    takes the root first and ``wedge`` the sink last.
    """
    path = Path(source)
    if source.endswith(".json") or path.is_file():
        return _read_document(path, PreorderDocument).to_order()

    kind, _, labels = source.partition(":")
    if kind not in DEFAULT_LABELS:
        raise BAD_ARGUMENT(
            f"unknown order {source!r}; expected a JSON file or one of {sorted(DEFAULT_LABELS)}"
        )
    parts = _split(labels or DEFAULT_LABELS[kind])
    if kind == "total":
        return Preorder.total(*(set(part.split("+")) if "+" in part else part for part in parts))
    if "+" in labels:
        raise BAD_ARGUMENT(f"only total orders take '+' blocks, got {source!r}")
    if kind == "diamond":
        if len(parts) != 4:
            raise BAD_ARGUMENT(f"diamond needs exactly 4 labels, got {parts}")
        return Preorder.diamond(*parts)
    if kind == "fork":
        return Preorder.fork(*parts)
    if kind == "wedge":
        return Preorder.wedge(*parts)
    return construct(kind, parts)


def parse_relation(data: str) -> list[tuple[str, str]]:
    """``A<B,B<C`` as a list of pairs"""
    pairs = []
    for item in _split(data):
        left, sep, right = item.partition("<")
        if not sep or not left or not right:
            raise BAD_ARGUMENT(f"relation pairs look like A<B, got {item!r}")
        pairs.append((left.strip(), right.strip()))
    return pairs


def add_space_source(parser: argparse.ArgumentParser, flag: str = "--in") -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(flag, dest="space", metavar="PATH", help="space JSON document")
    group.add_argument("--order", help="induce the space of an order (JSON file or built-in shorthand)")
    parser.add_argument("--inputs", type=int, default=2, help="inputs per event with --order")


def load_space(args: argparse.Namespace) -> HistorySpace:
    if getattr(args, "space", None):
        return _read_document(Path(args.space), SpaceDocument).to_space()
    order = parse_order(args.order)
    return induce(order, InputFamily.uniform(order.events, args.inputs))


def load_space_path(source: str, inputs: int) -> HistorySpace:
    """A space JSON file, or ``hist:ORDER`` for the induced space"""
    if source.startswith("hist:"):
        order = parse_order(source[len("hist:") :])
        return induce(order, InputFamily.uniform(order.events, inputs))
    return _read_document(Path(source), SpaceDocument).to_space()


def emit(args: argparse.Namespace, text_lines: list[str], document: Any = None) -> None:
    if args.json and document is not None:
        print(to_json(document))
        return
    for line in text_lines:
        print(line)


def save_json(path: str, document: Any) -> Path:
    return write_text(resolve_output(path), to_json(document))


def documents(models: list[BaseModel]) -> list[dict]:
    return [m.model_dump(mode="json") for m in models]
