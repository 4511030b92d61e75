"""Deterministic CSV/JSON persistence for spectra, curves, matrices and run manifests.

CSV files are UTF-8, comma separated, LF terminated, with floats written to
17 significant digits so every value survives a text round trip.  Manifests
are canonical JSON (sorted keys, compact separators).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .spectral import IntensitySpectrum, make_grid


class CsvFormatError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _write_rows(path, header: Sequence[str] | None, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header is not None:
        writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_float(v) for v in row])
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def curve_csv_text(columns: Sequence[Sequence[float]], names: Sequence[str]) -> str:
    cols = [np.asarray(c) for c in columns]
    if len(cols) != len(names):
        raise ValueError("one name per column is required")
    if len({len(c) for c in cols}) > 1:
        raise ValueError("curve columns must have equal length")
    rows = zip(*cols) if cols else []
    return _write_rows(None, list(names), rows)


def write_curve_csv(path, columns: Sequence[Sequence[float]], names: Sequence[str]) -> None:
    """Write equal-length columns under a header row."""
    text = curve_csv_text(columns, names)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_records_csv(path, records: Sequence[Any], names: Sequence[str]) -> None:
    columns = [[getattr(r, n) for r in records] for n in names]
    write_curve_csv(path, columns, names)


def write_matrix_csv(path, matrix: np.ndarray) -> None:
    """One CSV row per signal index, no header."""
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise ValueError("matrix must be 2-D")
    _write_rows(path, None, m.tolist())


def read_matrix_csv(path) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh)])


def read_curve_csv(path) -> dict[str, np.ndarray]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    arr = np.array(data, dtype=float).reshape(-1, len(header))
    return {name: arr[:, k] for k, name in enumerate(header)}


def _next_pow2_plus_one(n: int) -> int:
    k = max(1, math.ceil(math.log2(max(n - 1, 1))))
    return 2 ** k + 1


def read_spectrum_csv(path) -> IntensitySpectrum:
    """Read a (frequency, intensity) CSV and resample it onto a uniform grid.

    The first row is treated as a header when it is not numeric.  The uniform
    grid spans the input range with ``2**k + 1`` samples, the smallest such
    count not below the number of rows.
    """
    freqs: list[float] = []
    vals: list[float] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise CsvFormatError(path, lineno, f"expected 2 fields, got {len(row)}")
            try:
                f, v = float(row[0]), float(row[1])
            except ValueError:
                if lineno == 1:
                    continue
                raise CsvFormatError(path, lineno, "non-numeric field") from None
            if not (math.isfinite(f) and math.isfinite(v)):
                raise CsvFormatError(path, lineno, "non-finite value")
            if freqs and f <= freqs[-1]:
                raise CsvFormatError(path, lineno, "frequencies must be strictly increasing")
            if v < 0:
                raise CsvFormatError(path, lineno, "negative intensity")
            freqs.append(f)
            vals.append(v)
    if len(freqs) < 2:
        raise CsvFormatError(path, 0, "need at least two data rows")
    count = _next_pow2_plus_one(len(freqs))
    grid = make_grid(0.5 * (freqs[0] + freqs[-1]), freqs[-1] - freqs[0], count)
    w = grid.samples
    # keep the end nodes exact despite rounding in the grid construction
    w[0], w[-1] = freqs[0], freqs[-1]
    return IntensitySpectrum(grid, np.interp(w, freqs, vals))


def write_spectrum_csv(path, spectrum, value_name: str = "intensity") -> None:
    write_curve_csv(path, [spectrum.grid.samples, np.asarray(spectrum.values).real],
                    ["frequency", value_name])


# -- manifests -------------------------------------------------------------------

def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False,
                      allow_nan=False)


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    scenario: str
    command: str
    parameters: dict[str, Any]
    tool_version: str
    files: dict[str, str] = field(default_factory=dict)
    complete: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "command": self.command,
            "parameters": self.parameters,
            "tool_version": self.tool_version,
            "files": self.files,
            "complete": self.complete,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> RunManifest:
        return cls(scenario=d["scenario"], command=d["command"],
                   parameters=dict(d["parameters"]), tool_version=d["tool_version"],
                   files=dict(d.get("files", {})), complete=bool(d.get("complete", False)))


def write_manifest(path, manifest: RunManifest) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(canonical_json(manifest.to_dict()) + "\n")


def read_manifest(path) -> RunManifest:
    with open(path, encoding="utf-8") as fh:
        return RunManifest.from_dict(json.load(fh))
