# siplb/io/instance_file.py
"""
Reading and writing SIP instance files.

The format is line based; ``#`` starts a comment and blank lines are ignored.
Every other line is a key followed by its arguments:

    name cex
    xvars 1
    yvars 1
    xdom 1 -1 1
    ydom 1 -1 1
    objective -x1
    constraint 2*x1 - y1

See docs/instance_format.md for the grammar.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from siplb.core.exceptions import InstanceFormatError, ParseError
from siplb.models.expression import Expression, variables
from siplb.models.parser import parse
from siplb.schemas.domain import BoxRegion
from siplb.schemas.instance import SipInstance

logger = logging.getLogger(__name__)

SINGLE_KEYS = ("name", "xvars", "yvars", "objective", "constraint")
REQUIRED_KEYS = ("xvars", "yvars", "objective", "constraint")
DOMAIN_KEYS = {"xdom": "xvars", "ydom": "yvars"}


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _count(value: str, key: str, line: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise InstanceFormatError(f"'{key}' needs a positive integer, got {value!r}", line) from None
    if n < 1:
        raise InstanceFormatError(f"'{key}' needs a positive integer, got {n}", line)
    return n


def _bounds(args: List[str], key: str, line: int) -> Tuple[int, float, float]:
    if len(args) != 3:
        raise InstanceFormatError(f"'{key}' expects '<index> <lo> <hi>', got {' '.join(args)!r}", line)
    try:
        index, lo, hi = int(args[0]), float(args[1]), float(args[2])
    except ValueError:
        raise InstanceFormatError(f"'{key}' expects '<index> <lo> <hi>', got {' '.join(args)!r}", line) from None
    if lo > hi:
        raise InstanceFormatError(f"empty interval [{lo}, {hi}] for {key} {index}", line)
    return index, lo, hi


def _expression(text: str, key: str, line: int) -> Expression:
    try:
        return parse(text)
    except ParseError as exc:
        raise InstanceFormatError(f"{key}: {exc}", line) from exc


def load_instance(text: str) -> SipInstance:
    """
    Parse instance file text into a SipInstance.

    Raises:
        InstanceFormatError: For missing or repeated keys, malformed numbers,
            empty intervals, undeclared variables, and expression syntax
            errors, with the offending line number where there is one
    """
    values: Dict[str, Tuple[str, int]] = {}
    domains: Dict[str, Dict[int, Tuple[float, float, int]]] = {"xdom": {}, "ydom": {}}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        key, *rest = line.split(None, 1)
        rest = rest[0] if rest else ""
        if key in SINGLE_KEYS:
            if key in values:
                raise InstanceFormatError(f"duplicate key '{key}' (first on line {values[key][1]})", number)
            if not rest:
                raise InstanceFormatError(f"'{key}' needs a value", number)
            values[key] = (rest, number)
        elif key in DOMAIN_KEYS:
            index, lo, hi = _bounds(rest.split(), key, number)
            if index in domains[key]:
                raise InstanceFormatError(f"duplicate '{key} {index}'", number)
            domains[key][index] = (lo, hi, number)
        else:
            raise InstanceFormatError(f"unknown key '{key}'", number)

    for key in REQUIRED_KEYS:
        if key not in values:
            raise InstanceFormatError(f"missing key '{key}'")

    dims = {}
    for dom_key, count_key in DOMAIN_KEYS.items():
        text_value, line = values[count_key]
        n = _count(text_value, count_key, line)
        declared = domains[dom_key]
        for index, (_, _, dom_line) in declared.items():
            if not 1 <= index <= n:
                raise InstanceFormatError(f"'{dom_key} {index}' is outside 1..{n}", dom_line)
        for index in range(1, n + 1):
            if index not in declared:
                raise InstanceFormatError(f"missing key '{dom_key} {index}'")
        dims[dom_key] = [declared[i][:2] for i in range(1, n + 1)]

    expressions = {}
    for key in ("objective", "constraint"):
        text_value, line = values[key]
        e = _expression(text_value, key, line)
        for family, index in sorted(variables(e)):
            limit = len(dims["xdom"] if family == "x" else dims["ydom"])
            if index >= limit:
                raise InstanceFormatError(f"{key} uses undeclared variable {family}{index + 1}", line)
            if key == "objective" and family == "y":
                raise InstanceFormatError(f"objective must not use {family}{index + 1}", line)
        expressions[key] = e

    name = values["name"][0] if "name" in values else "unnamed"
    try:
        inst = SipInstance(
            name=name,
            objective=expressions["objective"],
            constraint=expressions["constraint"],
            x_box=BoxRegion.from_bounds(dims["xdom"]),
            y_box=BoxRegion.from_bounds(dims["ydom"]),
        )
    except ValidationError as exc:
        raise InstanceFormatError(exc.errors()[0]["msg"]) from exc
    logger.debug("Loaded instance %s (dim x = %d, dim y = %d)", inst.name, inst.x_box.dim, inst.y_box.dim)
    return inst


def read_instance(path: Union[str, Path]) -> SipInstance:
    """Load an instance file from disk; format errors name the file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        return load_instance(text)
    except InstanceFormatError as exc:
        raise InstanceFormatError(f"{path}: {exc.message}", exc.line) from exc


def to_file_text(inst: SipInstance, comment: Optional[str] = None) -> str:
    """Canonical instance file text; ``load_instance`` reads it back to an equal instance."""
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(f"name {inst.name}")
    lines.append(f"xvars {inst.x_box.dim}")
    lines.append(f"yvars {inst.y_box.dim}")
    for key, box in (("xdom", inst.x_box), ("ydom", inst.y_box)):
        for i, d in enumerate(box.dims, start=1):
            lines.append(f"{key} {i} {d.lo!r} {d.hi!r}")
    lines.append(f"objective {inst.objective.to_text()}")
    lines.append(f"constraint {inst.constraint.to_text()}")
    return "\n".join(lines) + "\n"
