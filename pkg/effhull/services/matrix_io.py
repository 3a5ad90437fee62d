"""
Matrix / vector file I/O.

Matrices are read from CSV (one row per line) or JSON (``{"rows": [...]}`` or
a bare list of rows), chosen by suffix.  Entries may be written as fractions
such as ``1/6``.  Every emitted number goes through `format_number`.
"""

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, TextIO, Union

import numpy as np
from pydantic import BaseModel

from effhull.config import ToleranceConfig, settings
from effhull.errors import MatrixFormatError
from effhull.models import PositiveVector, ReciprocalMatrix
from effhull.services.matrix_core import validate_reciprocal
from effhull.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def format_number(x: float, digits: Optional[int] = None) -> str:
    digits = digits or settings.significant_digits
    return f"{float(x):.{digits}g}"


def _parse_entry(token: str, where: str) -> float:
    token = token.strip()
    try:
        return float(Fraction(token)) if "/" in token else float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise MatrixFormatError(f"{where}: cannot parse {token!r}") from exc


def _csv_rows(text: str, source: str) -> list[list[float]]:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        rows.append([_parse_entry(tok, f"{source}:{lineno}") for tok in row if tok.strip()])
    if not rows:
        raise MatrixFormatError(f"{source}: no numeric rows")
    return rows


def _json_rows(text: str, source: str) -> list[list[float]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{source}: invalid JSON ({exc.msg})") from exc
    rows = data.get("rows") if isinstance(data, dict) else data
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MatrixFormatError(f'{source}: expected a list of rows or {{"rows": [...]}}')
    return [[_parse_entry(str(v), source) for v in row] for row in rows]


def _read_text(path: PathLike) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def read_matrix(path: PathLike, cfg: Optional[ToleranceConfig] = None) -> ReciprocalMatrix:
    """Load and validate a reciprocal matrix."""
    text = _read_text(path)
    source = str(path)
    rows = _json_rows(text, source) if source.endswith(".json") else _csv_rows(text, source)
    if len({len(r) for r in rows}) != 1:
        raise MatrixFormatError(f"{source}: rows have different lengths")
    A = validate_reciprocal(np.array(rows), cfg)
    logger.debug("Read %dx%d matrix from %s.", A.n, A.n, source)
    return A


def read_vector(path: PathLike) -> PositiveVector:
    """A vector stored as a single CSV row or a single CSV column."""
    source = str(path)
    text = _read_text(path)
    if source.endswith(".json"):
        rows = _json_rows(text, source)
    else:
        rows = _csv_rows(text, source)
    if len(rows) == 1:
        values = rows[0]
    elif all(len(r) == 1 for r in rows):
        values = [r[0] for r in rows]
    else:
        raise MatrixFormatError(f"{source}: expected a single row or a single column")
    return PositiveVector(values)


def parse_floats(text: str, where: str = "value list") -> list[float]:
    """``"4,8.2,1/2"`` → [4.0, 8.2, 0.5]."""
    return [_parse_entry(tok, where) for tok in text.split(",") if tok.strip()]


# ── Emitters ─────────────────────────────────────────────────────────────────

def _open(out: Optional[PathLike]) -> TextIO:
    if out is None or str(out) == "-":
        return sys.stdout
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    return open(out, "w", newline="", encoding="utf-8")


def write_rows(out: Optional[PathLike], header: Optional[list[str]], rows: Iterable[Iterable[Any]]) -> None:
    stream = _open(out)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        if header:
            writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) if isinstance(v, (float, np.floating)) else v for v in row])
    finally:
        if stream is not sys.stdout:
            stream.close()


def write_vector(w, out: Optional[PathLike] = None) -> None:
    """One CSV row."""
    values = w.tolist() if hasattr(w, "tolist") else list(w)
    write_rows(out, None, [[float(v) for v in values]])


def write_matrix(A: ReciprocalMatrix, out: Optional[PathLike] = None) -> None:
    write_rows(out, None, ([float(v) for v in row] for row in A.entries))


def round_floats(obj: Any, digits: Optional[int] = None) -> Any:
    """Recursively round floats to the configured significant digits."""
    if isinstance(obj, (float, np.floating)):
        return float(format_number(obj, digits))
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


def dump_json(obj: Any, out: Optional[PathLike] = None) -> str:
    """Serialise a model (or plain data) as indented JSON; returns the text."""
    text = json.dumps(round_floats(to_jsonable(obj)), indent=2)
    stream = _open(out)
    try:
        stream.write(text + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return text
