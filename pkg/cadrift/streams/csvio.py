"""
Stream files: a header row, then one row per instance with the features
followed by an integer class label. Features are written with 17
significant digits so reading a file back reproduces the exact floats.
"""
import csv
import math
from pathlib import Path
from typing import List, Literal, Optional, Union

import numpy as np
from pydantic import Field, FilePath

from .stream import Stream
from cadrift import settings
from cadrift.exceptions import StreamFormatError
from cadrift.pydantic.models import BaseModel

PathLike = Union[str, Path]


def header(n_features: int) -> List[str]:
    return [f"att_{i}" for i in range(n_features)] + ["class"]


def format_row(x: np.ndarray, y: int) -> List[str]:
    return [f"{float(v):.17g}" for v in x] + [str(int(y))]


def export_csv(stream: Stream, path: PathLike) -> Path:
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header(stream.n_features))
        for x, y in zip(stream.X, stream.y):
            writer.writerow(format_row(x, y))
    return path


def import_csv(path: PathLike, **metadata) -> Stream:
    """
    Read a stream file. ``metadata`` (name, drift positions, ...) is passed to
    the resulting ``Stream``; the file itself only carries the instances.
    """
    path = Path(path)
    features: List[List[float]] = []
    labels: List[int] = []
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            columns = next(reader)
        except StopIteration:
            raise StreamFormatError(path, 1, "empty file, expected a header row")
        if len(columns) < 2:
            raise StreamFormatError(path, 1, "need at least one feature and a label column")
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(columns):
                raise StreamFormatError(
                    path, line, f"expected {len(columns)} columns, found {len(row)}"
                )
            try:
                values = [float(v) for v in row[:-1]]
                label = float(row[-1])
            except ValueError as exc:
                raise StreamFormatError(path, line, str(exc)) from exc
            if any(math.isnan(v) for v in values):
                raise StreamFormatError(path, line, "NaN feature value")
            if not label.is_integer():
                raise StreamFormatError(path, line, f"class label {row[-1]!r} is not an integer")
            features.append(values)
            labels.append(int(label))
    if not labels:
        raise StreamFormatError(path, 2, "no instances")
    metadata.setdefault("name", path.stem)
    return Stream(
        X=np.asarray(features, dtype=float),
        y=np.asarray(labels, dtype=np.int64),
        **metadata,
    )


class CsvStreamSource(BaseModel):
    """A stream read from a file instead of generated; drift metadata is declared."""

    source: Literal["csv"] = "csv"
    path: FilePath
    name: Optional[str] = None
    drift_positions: List[int] = []
    drift_kind: Literal["abrupt", "gradual"] = "abrupt"
    concept_size: int = Field(default=settings.DEFAULT_CONCEPT_SIZE, ge=1)
    bins: int = Field(default=10, ge=2)
    levels: Optional[List[Optional[int]]] = None

    @property
    def label(self) -> str:
        return self.name or self.path.stem

    def load(self, seed: Optional[int] = None) -> Stream:
        return import_csv(
            self.path,
            name=self.label,
            drift_positions=tuple(self.drift_positions),
            drift_kind=self.drift_kind,
            concept_size=self.concept_size,
            bins=self.bins,
            levels=None if self.levels is None else tuple(self.levels),
            seed=seed,
        )
