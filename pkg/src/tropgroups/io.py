"""Reading matrix files and serializing exact values for reports."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .core import TropMatrix, fmt, to_scalar
from .errors import DimensionError


class ParseError(DimensionError):
    pass


def parse_matrix_text(text: str, allow_inf=False, source="<input>") -> TropMatrix:
    """Parse whitespace-separated rows; blank lines and ``#`` comments are skipped.

    Entries may be integers, decimals (converted exactly) or ``p/q``;
    ``-inf`` only when ``allow_inf`` is set.
    """
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        row = []
        for col, token in enumerate(line.split(), 1):
            try:
                row.append(to_scalar(token, allow_inf=allow_inf))
            except (ValueError, TypeError) as exc:
                raise ParseError(f"{source}: line {lineno}, entry {col}: {token!r}: {exc}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                f"{source}: line {lineno} has {len(row)} entries, expected {width}"
            )
        rows.append(row)
    if not rows:
        raise ParseError(f"{source}: no matrix rows found")
    return TropMatrix(rows, allow_inf=allow_inf)


def parse_vector_text(text: str, source="<input>") -> tuple:
    """A vector file is a matrix file with a single row or a single column."""
    m = parse_matrix_text(text, source=source)
    if m.n_rows == 1:
        return m.row(0)
    if m.n_cols == 1:
        return m.column(0)
    raise ParseError(f"{source}: expected a single row or column, got {m.n_rows}x{m.n_cols}")


def read_matrix(path, allow_inf=False) -> TropMatrix:
    return parse_matrix_text(Path(path).read_text(), allow_inf=allow_inf, source=str(path))


def read_vector(path) -> tuple:
    return parse_vector_text(Path(path).read_text(), source=str(path))


def scalar_json(x) -> str:
    return fmt(x)


def vector_json(x) -> list:
    return [fmt(v) for v in x]


def matrix_json(A: TropMatrix) -> list:
    return [[fmt(v) for v in r] for r in A.rows]


def perm_json(sigma) -> list:
    """One-line (image) form, 1-based."""
    return [s + 1 for s in sigma]


def indices_json(idx) -> list:
    return [i + 1 for i in idx]


def matrix_text(A: TropMatrix) -> str:
    return "\n".join(" ".join(fmt(v) for v in r) for r in A.rows)


def input_hash(*inputs) -> str:
    """SHA-256 over the canonical text of the parsed inputs."""
    h = hashlib.sha256()
    for item in inputs:
        if isinstance(item, TropMatrix):
            h.update(matrix_text(item).encode())
        else:
            h.update(" ".join(fmt(v) for v in item).encode())
        h.update(b"\n--\n")
    return h.hexdigest()


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
