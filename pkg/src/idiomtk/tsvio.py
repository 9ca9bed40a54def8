"""Shared TSV reading/writing: comment headers, atomic writes, field hygiene.

All toolkit files are UTF-8 TSV.  Lines starting with ``#`` are provenance
comments emitted by the CLI; readers skip them.  Fields must not contain
tabs or newlines.
"""

from __future__ import annotations

import hashlib
import os
from collections.abc import Iterable, Iterator, Mapping, Sequence
from pathlib import Path

from .errors import DataError


def sha256_of(path: str | Path) -> str:
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return f"sha256:{digest}"


def provenance_lines(
    inputs: Mapping[str, str | Path] | None = None,
    params: Mapping[str, object] | None = None,
) -> list[str]:
    """Comment lines recording input content hashes and run parameters."""
    lines = []
    for name in sorted(inputs or {}):
        lines.append(f"# input:{name}={sha256_of(Path(inputs[name]))}")
    for name in sorted(params or {}):
        lines.append(f"# param:{name}={params[name]}")
    return lines


def check_field(value: str, *, context: str = "field") -> str:
    if "\t" in value or "\n" in value or "\r" in value:
        raise DataError(f"{context} contains a tab or newline: {value!r}")
    return value


def write_rows(
    path: str | Path,
    rows: Iterable[Sequence[str]],
    *,
    header: Sequence[str] | None = None,
    provenance: Iterable[str] | None = None,
) -> None:
    """Write TSV rows atomically (temp file + rename)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as out:
            for line in provenance or ():
                if not line.startswith("#"):
                    raise DataError(f"provenance line must start with '#': {line!r}")
                check_field(line, context="provenance line")
                out.write(line + "\n")
            if header is not None:
                out.write("\t".join(header) + "\n")
            for row in rows:
                fields = [check_field(str(f)) for f in row]
                out.write("\t".join(fields) + "\n")
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def read_rows(
    path: str | Path,
    n_fields: int,
    *,
    header: Sequence[str] | None = None,
) -> Iterator[tuple[int, list[str]]]:
    """Yield ``(line_number, fields)`` for every data row.

    Comment lines are skipped.  When ``header`` is given, the first
    non-comment line must match it exactly.  Rows with the wrong column
    count raise DataError naming the offending line.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    header_seen = header is None
    with open(path, encoding="utf-8", newline="") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if line.startswith("#"):
                continue
            if not header_seen:
                if line.split("\t") != list(header):
                    raise DataError(
                        f"{path}:{lineno}: expected header {list(header)!r}, got {line!r}"
                    )
                header_seen = True
                continue
            if line == "":
                continue
            fields = line.split("\t")
            if len(fields) != n_fields:
                raise DataError(
                    f"{path}:{lineno}: expected {n_fields} tab-separated fields, got {len(fields)}"
                )
            yield lineno, fields
    if not header_seen:
        raise DataError(f"{path}: missing header line")
