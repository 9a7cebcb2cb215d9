"""Reading and writing point sets as CSV or JSON lines.

CSV: header ``z,x1,...,xd`` then one point per row.
JSONL: one object per line, ``{"z": 1.0, "x": [0.0, ...]}``.

Floats are written with ``repr``, the shortest string that round-trips.
"""

from __future__ import annotations

import csv
import json
import math
import os

import numpy as np

from hyperjl.geometry import PointSet

FORMATS = ("csv", "jsonl")


class FormatError(ValueError):
    """A dataset file that does not parse or breaks a point-set invariant."""


def guess_format(path) -> str:
    return "jsonl" if os.fspath(path).lower().endswith((".jsonl", ".json", ".ndjson")) else "csv"


def _number(text, where):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise FormatError(f"{where}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise FormatError(f"{where}: non-finite value {text!r}")
    return value


def _read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        expected = ["z"] + [f"x{i}" for i in range(1, len(header))]
        if len(header) < 2 or header != expected:
            raise FormatError(f"{path}: line 1: header must be z,x1,...,xd, got {','.join(header)!r}")
        width = len(header)
        z, x = [], []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            line = reader.line_num
            where = f"{path}: line {line} (row {len(z) + 1})"
            if len(row) != width:
                raise FormatError(f"{where}: expected {width} columns, got {len(row)}")
            values = [_number(c.strip(), where) for c in row]
            if values[0] <= 0:
                raise FormatError(f"{where}: height z must be positive, got {values[0]!r}")
            z.append(values[0])
            x.append(values[1:])
    if not z:
        raise FormatError(f"{path}: no points")
    return PointSet(z, np.array(x))


def _read_jsonl(path):
    z, x = [], []
    dim = None
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}: line {line_no} (row {len(z) + 1})"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise FormatError(f"{where}: invalid JSON: {err.msg}") from None
            if not isinstance(obj, dict) or "z" not in obj or "x" not in obj:
                raise FormatError(f"{where}: expected an object with fields 'z' and 'x'")
            if isinstance(obj["z"], bool) or not isinstance(obj["z"], (int, float)):
                raise FormatError(f"{where}: 'z' must be a number")
            coords = obj["x"]
            if not isinstance(coords, list) or not coords:
                raise FormatError(f"{where}: 'x' must be a nonempty array of numbers")
            if any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in coords):
                raise FormatError(f"{where}: 'x' must be a nonempty array of numbers")
            zv = _number(obj["z"], where)
            if zv <= 0:
                raise FormatError(f"{where}: height z must be positive, got {zv!r}")
            if dim is None:
                dim = len(coords)
            elif len(coords) != dim:
                raise FormatError(f"{where}: expected {dim} coordinates, got {len(coords)}")
            z.append(zv)
            x.append([_number(c, where) for c in coords])
    if not z:
        raise FormatError(f"{path}: no points")
    return PointSet(z, np.array(x))


def read_pointset(path, format: str | None = None) -> PointSet:
    """Load a point set; raises :class:`FormatError` naming the offending line."""
    fmt = format or guess_format(path)
    if fmt == "csv":
        return _read_csv(path)
    if fmt == "jsonl":
        return _read_jsonl(path)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def write_pointset(ps: PointSet, path, format: str | None = None) -> None:
    fmt = format or guess_format(path)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(",".join(["z"] + [f"x{i}" for i in range(1, ps.dim + 1)]) + "\n")
            for zi, xi in zip(ps.z.tolist(), ps.x.tolist()):
                fh.write(",".join(repr(v) for v in [zi] + xi) + "\n")
    elif fmt == "jsonl":
        with open(path, "w") as fh:
            for zi, xi in zip(ps.z.tolist(), ps.x.tolist()):
                fh.write(json.dumps({"z": zi, "x": xi}) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
