"""External reference datasets (e.g. Monte Carlo equations of state) for overlay columns."""

import logging
import math
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ReferenceDataError

logger = logging.getLogger(__name__)


class ReferenceDataset(BaseModel):
    """(x, y) rows already multiplied by their declared scales."""

    model_config = ConfigDict(frozen=True)

    x: list[float] = Field(default_factory=list)
    y: list[float] = Field(default_factory=list)
    x_scale: float = 1.0
    y_scale: float = 1.0
    source: str = ""

    @model_validator(mode="after")
    def _check_rows(self) -> "ReferenceDataset":
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have the same number of rows")
        for a, b in zip(self.x, self.x[1:], strict=False):
            if b <= a:
                raise ValueError(f"x must be strictly increasing, got {a} then {b}")
        return self

    def __len__(self) -> int:
        return len(self.x)

    @property
    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.x, self.y, strict=True))

    def rescaled(self, x_scale: float, y_scale: float) -> "ReferenceDataset":
        """Multiply every row by further scales."""
        _check_scales(x_scale, y_scale)
        return ReferenceDataset(
            x=[v * x_scale for v in self.x],
            y=[v * y_scale for v in self.y],
            x_scale=self.x_scale * x_scale,
            y_scale=self.y_scale * y_scale,
            source=self.source,
        )

    def overlay(self, at: np.ndarray) -> np.ndarray:
        """Linear interpolation at the given abscissae, NaN outside the data range."""
        at = np.asarray(at, dtype=float)
        if not self.x:
            return np.full(at.shape, np.nan)
        values = np.interp(at, self.x, self.y)
        return np.where((at >= self.x[0]) & (at <= self.x[-1]), values, np.nan)


def _check_scales(x_scale: float, y_scale: float) -> None:
    if not (math.isfinite(x_scale) and x_scale > 0):
        raise ReferenceDataError(f"x scale must be positive and finite, got {x_scale}")
    if not (math.isfinite(y_scale) and y_scale != 0):
        raise ReferenceDataError(f"y scale must be non-zero and finite, got {y_scale}")


def _load(lines: list[str]) -> np.ndarray:
    return np.loadtxt(lines, comments="#", ndmin=2, dtype=float)


def _first_bad_line(lines: list[str], data_lines: list[int]) -> int:
    for line_number in data_lines:
        try:
            row = _load([lines[line_number - 1]])
        except ValueError:
            return line_number
        if row.shape[1] != 2:
            return line_number
    return data_lines[0]


def parse_reference(text: str, source: str = "") -> tuple[list[float], list[float]]:
    """Two numeric columns, comma- or whitespace-separated; `#` starts a comment."""
    label = source or "reference data"
    lines = [line.replace(",", " ") for line in text.splitlines()]
    data_lines = [i for i, line in enumerate(lines, start=1) if line.split("#", 1)[0].strip()]
    if not data_lines:
        return [], []

    try:
        data = _load(lines)
    except ValueError as e:
        line_number = _first_bad_line(lines, data_lines)
        raise ReferenceDataError(f"{label} line {line_number}: {e}", line_number=line_number) from e

    if data.shape[1] != 2:
        raise ReferenceDataError(
            f"{label} line {data_lines[0]}: expected 2 columns, got {data.shape[1]}", line_number=data_lines[0]
        )

    finite = np.isfinite(data).all(axis=1)
    if not finite.all():
        line_number = data_lines[int(np.argmin(finite))]
        raise ReferenceDataError(f"{label} line {line_number}: non-finite value", line_number=line_number)

    steps = np.diff(data[:, 0])
    if (steps <= 0).any():
        line_number = data_lines[int(np.argmax(steps <= 0)) + 1]
        raise ReferenceDataError(f"{label} line {line_number}: x must be strictly increasing", line_number=line_number)

    return data[:, 0].tolist(), data[:, 1].tolist()


def ingest_reference(path: str | Path, x_scale: float = 1.0, y_scale: float = 1.0) -> ReferenceDataset:
    """Read a reference file and multiply its columns by the declared scales."""
    path = Path(path)
    _check_scales(x_scale, y_scale)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReferenceDataError(f"cannot read reference data {path}: {e}") from e

    xs, ys = parse_reference(text, source=str(path))
    dataset = ReferenceDataset(
        x=[v * x_scale for v in xs],
        y=[v * y_scale for v in ys],
        x_scale=x_scale,
        y_scale=y_scale,
        source=str(path),
    )
    logger.info("Loaded %d reference rows from %s", len(dataset), path)
    return dataset
