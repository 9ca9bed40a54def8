"""Reading exported sequence files and writing prediction files.

Both formats are shared with the exporting package: UTF-8 TSV, lines starting
with '#' are provenance comments, no header row. The text field of a sequence
is used exactly as it appears in the file; nothing is re-tokenized, stripped,
or case-folded here.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError

LABELS = ("idiomatic", "literal")
VARIANTS = ("baseline", "gloss-en", "gloss-src")


@dataclass(frozen=True)
class SequenceRow:
    instance_id: str
    variant: str
    label: str
    text: str


def read_sequences(path: str | Path) -> list[SequenceRow]:
    """Parse a sequences file; label may be empty for unlabeled rows."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise DataError(
                    f"{path}:{lineno}: expected 4 tab-separated fields, got {len(fields)}"
                )
            instance_id, variant, label, text = fields
            if not instance_id:
                raise DataError(f"{path}:{lineno}: empty instance id")
            if variant not in VARIANTS:
                raise DataError(f"{path}:{lineno}: unknown variant {variant!r}")
            if label and label not in LABELS:
                raise DataError(f"{path}:{lineno}: unknown label {label!r}")
            rows.append(SequenceRow(instance_id, variant, label, text))
    return rows


# ---- prediction output ----


@dataclass(frozen=True)
class PredictionRow:
    instance_id: str
    label: str
    method: str
    rationale: str


def provenance_lines(
    inputs: Mapping[str, str | Path] | None = None,
    params: Mapping[str, object] | None = None,
) -> list[str]:
    """Hash-based provenance comments; deliberately timestamp-free."""
    lines = []
    for name in sorted(inputs or {}):
        digest = hashlib.sha256(Path(inputs[name]).read_bytes()).hexdigest()
        lines.append(f"# input:{name}=sha256:{digest}")
    for name in sorted(params or {}):
        lines.append(f"# param:{name}={params[name]}")
    return lines


def write_predictions(
    path: str | Path,
    rows: Iterable[PredictionRow],
    *,
    provenance: Sequence[str] | None = None,
) -> None:
    """Atomically write a predictions file in the shared 4-column schema."""
    path = Path(path)
    for line in provenance or ():
        if not line.startswith("#"):
            raise DataError(f"provenance line must start with '#': {line!r}")
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as out:
            for line in provenance or ():
                out.write(line + "\n")
            for row in rows:
                for field in (row.instance_id, row.label, row.method, row.rationale):
                    if "\t" in field or "\n" in field:
                        raise DataError(f"field contains tab or newline: {field!r}")
                out.write(
                    f"{row.instance_id}\t{row.label}\t{row.method}\t{row.rationale}\n"
                )
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
