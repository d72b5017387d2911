"""Embedding and transport-plan file formats used by the command line.

Embeddings travel as labeled CSV (header ``label,v0,...,v{d-1}``) or JSON
(array of ``{"label": ..., "vector": [...]}``). Plans are written as a
self-describing JSON document that re-validates on load.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import EmbeddingSet, MarginalWeights, TransportPlan


class EmbeddingFileError(ValueError):
    """An embedding file failed to parse or violated the format invariants."""


def load_embeddings(path, fmt: str) -> tuple[EmbeddingSet, list[str]]:
    """Order-preserving load of a labeled embedding file.

    Returns the embedding set and the labels in file order. Errors name the
    offending row or record.
    """
    if fmt == "csv":
        labels, rows = _read_csv(Path(path))
    elif fmt == "json":
        labels, rows = _read_json(Path(path))
    else:
        raise EmbeddingFileError(f"unknown format {fmt!r}; expected csv or json")
    if not rows:
        raise EmbeddingFileError(f"{path}: no records")
    dim = len(rows[0])
    for idx, row in enumerate(rows):
        if len(row) != dim:
            raise EmbeddingFileError(
                f"{path}: record {idx + 1} ({labels[idx]!r}) has dimension {len(row)}, expected {dim}"
            )
    seen = {}
    for idx, label in enumerate(labels):
        if label in seen:
            raise EmbeddingFileError(
                f"{path}: duplicate label {label!r} at records {seen[label] + 1} and {idx + 1}"
            )
        seen[label] = idx
    try:
        embeddings = EmbeddingSet(np.array(rows, dtype=float))
    except ValueError as exc:
        raise EmbeddingFileError(f"{path}: {exc}") from exc
    return embeddings, labels


def _read_csv(path: Path) -> tuple[list[str], list[list[float]]]:
    labels: list[str] = []
    rows: list[list[float]] = []
    try:
        text = path.read_text()
    except OSError as exc:
        raise EmbeddingFileError(f"{path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if not header or header[0] != "label":
        raise EmbeddingFileError(f"{path}: line 1: expected header starting with 'label'")
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < 2:
            raise EmbeddingFileError(f"{path}: line {lineno}: expected a label and at least one value")
        try:
            values = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise EmbeddingFileError(f"{path}: line {lineno}: {exc}") from exc
        labels.append(row[0])
        rows.append(values)
    return labels, rows


def _read_json(path: Path) -> tuple[list[str], list[list[float]]]:
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise EmbeddingFileError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise EmbeddingFileError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise EmbeddingFileError(f"{path}: top level must be an array of records")
    labels: list[str] = []
    rows: list[list[float]] = []
    for idx, record in enumerate(data):
        where = f"{path}: record {idx + 1}"
        if not isinstance(record, dict) or "label" not in record or "vector" not in record:
            raise EmbeddingFileError(f"{where}: expected an object with 'label' and 'vector'")
        vector = record["vector"]
        if not isinstance(vector, list) or not all(isinstance(v, (int, float)) for v in vector):
            raise EmbeddingFileError(f"{where}: 'vector' must be a list of numbers")
        labels.append(str(record["label"]))
        rows.append([float(v) for v in vector])
    return labels, rows


def save_embeddings_csv(path, embeddings: EmbeddingSet, labels) -> None:
    lines = ["label," + ",".join(f"v{i}" for i in range(embeddings.dim))]
    for label, vec in zip(labels, embeddings.vectors):
        lines.append(label + "," + ",".join(repr(float(v)) for v in vec))
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass(frozen=True, eq=False)
class PlanFile:
    """Serializable transport plan with labels and solver metadata."""

    row_labels: list[str]
    col_labels: list[str]
    entries: np.ndarray
    metadata: dict

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError(
                f"entries shape {e.shape} does not match labels "
                f"({len(self.row_labels)}, {len(self.col_labels)})"
            )
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def validate_plan(self) -> TransportPlan:
        """Re-check the TransportPlan invariants at the recorded tolerance."""
        return TransportPlan(
            self.entries,
            MarginalWeights(np.asarray(self.metadata["row_marginal"], dtype=float)),
            MarginalWeights(np.asarray(self.metadata["col_marginal"], dtype=float)),
            marginal_tol=float(self.metadata["marginal_tol"]),
        )


def save_plan(path, plan_file: PlanFile) -> None:
    doc = {
        "row_labels": plan_file.row_labels,
        "col_labels": plan_file.col_labels,
        "entries": [[float(v) for v in row] for row in plan_file.entries],
        "metadata": plan_file.metadata,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_plan(path) -> PlanFile:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    plan_file = PlanFile(
        row_labels=list(doc["row_labels"]),
        col_labels=list(doc["col_labels"]),
        entries=np.array(doc["entries"], dtype=float),
        metadata=dict(doc["metadata"]),
    )
    plan_file.validate_plan()
    return plan_file
