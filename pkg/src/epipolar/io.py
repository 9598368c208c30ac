"""Reading and writing correspondence files (CSV ``x1,x2,y1,y2`` rows or JSON)."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, TextIO, Union

from .common import CorrespondenceSet
from .errors import InputParseError

CSV_HEADER = ["x1", "x2", "y1", "y2"]


@dataclass(frozen=True)
class InputDocument:
    correspondences: tuple  # (((x1, x2), (y1, y2)), ...) of Fractions
    name: Optional[str] = None
    source: Optional[str] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def to_correspondences(self) -> CorrespondenceSet:
        return CorrespondenceSet.from_affine(self.correspondences)


def parse_rational(token, line=None) -> Fraction:
    if isinstance(token, bool):
        raise InputParseError(f"not a number: {token!r}", line)
    if isinstance(token, (int, Fraction)):
        return Fraction(token)
    if isinstance(token, float):
        # json floats are intercepted as strings; a real float here is lossy
        raise InputParseError(f"binary float {token!r} is not exact; quote it", line)
    if not isinstance(token, str):
        raise InputParseError(f"not a number: {token!r}", line)
    text = token.strip().replace("−", "-")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputParseError(f"not an exact rational: {token!r}", line) from None


def _parse_csv(text: str) -> list:
    pairs = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or all(not c for c in cells) or cells[0].startswith("#"):
            continue
        if [c.lower() for c in cells] == CSV_HEADER and not pairs:
            continue
        if len(cells) != 4:
            raise InputParseError(f"expected 4 fields x1,x2,y1,y2, got {len(cells)}", lineno)
        v = [parse_rational(c, lineno) for c in cells]
        pairs.append(((v[0], v[1]), (v[2], v[3])))
    return pairs


def _parse_json(text: str) -> tuple:
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InputParseError(exc.msg, exc.lineno) from None
    if isinstance(data, list):
        data = {"correspondences": data}
    if not isinstance(data, dict) or "correspondences" not in data:
        raise InputParseError("expected an object with a 'correspondences' list")
    pairs = []
    for k, item in enumerate(data["correspondences"]):
        try:
            x, y = item["x"], item["y"]
        except (TypeError, KeyError):
            raise InputParseError(f"correspondence {k}: needs 'x' and 'y'") from None
        if len(x) != 2 or len(y) != 2:
            raise InputParseError(f"correspondence {k}: points must have two coordinates")
        try:
            pairs.append((tuple(parse_rational(v) for v in x), tuple(parse_rational(v) for v in y)))
        except InputParseError as exc:
            raise InputParseError(f"correspondence {k}: {exc}") from None
    meta = {k: v for k, v in data.items() if k not in ("correspondences", "name", "source")}
    return pairs, data.get("name"), data.get("source"), meta


def detect_format(path: str) -> str:
    return "json" if str(path).lower().endswith(".json") else "csv"


def parse_input(src: Union[str, os.PathLike, TextIO], fmt: Optional[str] = None) -> InputDocument:
    """Read correspondences from a path or an open text stream.

    ``fmt`` is ``"csv"`` or ``"json"``; for paths it defaults to the file
    extension, for streams to CSV.
    """
    if hasattr(src, "read"):
        text = src.read()
        fmt = fmt or "csv"
        name = getattr(src, "name", None)
    else:
        with open(src, encoding="utf-8") as fh:
            text = fh.read()
        fmt = fmt or detect_format(str(src))
        name = os.path.splitext(os.path.basename(str(src)))[0]
    if fmt == "csv":
        pairs, meta = _parse_csv(text), {}
        source = None
    elif fmt == "json":
        pairs, jname, source, meta = _parse_json(text)
        name = jname if jname is not None else name
    else:
        raise ValueError(f"unknown input format {fmt!r}")
    if not pairs:
        raise InputParseError("no correspondences found")
    return InputDocument(tuple(pairs), name if isinstance(name, str) else None, source, meta)


def serialize_input(doc: InputDocument, fmt: str = "json") -> str:
    if fmt == "csv":
        lines = [",".join(CSV_HEADER)]
        lines += [",".join(str(v) for v in (*x, *y)) for x, y in doc.correspondences]
        return "\n".join(lines) + "\n"
    data: dict = {}
    if doc.name is not None:
        data["name"] = doc.name
    if doc.source is not None:
        data["source"] = doc.source
    data.update(doc.metadata)
    data["correspondences"] = [
        {"x": [str(v) for v in x], "y": [str(v) for v in y]} for x, y in doc.correspondences
    ]
    return json.dumps(data, indent=2) + "\n"
