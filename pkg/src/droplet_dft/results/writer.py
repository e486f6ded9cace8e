"""Deterministic CSV output and run metadata sidecars.

Data files hold only numbers: 12 significant digits in scientific notation,
LF line endings, one header row naming each column with its unit. Anything
that changes between identical runs (timestamps) goes to `<out>.meta.json`.
"""

import logging
import math
import os
import tempfile
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import __version__
from ..units import UnitSystem, UnitTag

logger = logging.getLogger(__name__)

META_SUFFIX = ".meta.json"

# base-unit exponents of each tagged quantity
_INTERNAL_BASES: dict[UnitTag, dict[str, int]] = {
    UnitTag.LENGTH: {"L": 1},
    UnitTag.DENSITY: {"L": -3},
    UnitTag.ENERGY: {"E": 1},
    UnitTag.WAVENUMBER: {"L": -1},
    UnitTag.SPEED: {"L": 1, "T": -1},
}
_SI_BASES: dict[UnitTag, dict[str, int]] = {
    UnitTag.LENGTH: {"m": 1},
    UnitTag.DENSITY: {"m": -3},
    UnitTag.ENERGY: {"J": 1},
    UnitTag.WAVENUMBER: {"m": -1},
    UnitTag.SPEED: {"m": 1, "s": -1},
}
_BASE_ORDER = ("E", "J", "L", "m", "T", "s")


def unit_label(dimension: dict[UnitTag, int], si: bool = False) -> str:
    """Header unit for a product of tagged quantities, `1` if dimensionless."""
    bases = _SI_BASES if si else _INTERNAL_BASES
    exponents: dict[str, int] = {}
    for tag, power in dimension.items():
        for base, exp in bases[UnitTag(tag)].items():
            exponents[base] = exponents.get(base, 0) + exp * power
    parts = [
        base if exponents[base] == 1 else f"{base}^{exponents[base]}"
        for base in _BASE_ORDER
        if exponents.get(base, 0) != 0
    ]
    return " ".join(parts) or "1"


def format_value(value: Any) -> str:
    if isinstance(value, bool | np.bool_):
        return "1" if value else "0"
    return f"{float(value):.11e}"


class Column(BaseModel):
    """One named output column with its physical dimension."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    values: np.ndarray
    dimension: dict[UnitTag, int] = Field(default_factory=dict)
    boolean: bool = False

    def header(self, si: bool = False) -> str:
        return f"{self.name} [{unit_label(self.dimension, si)}]"

    def to_si(self, units: UnitSystem) -> "Column":
        if self.boolean or not self.dimension:
            return self
        factor = math.prod(units.scale(tag) ** power for tag, power in self.dimension.items())
        return self.model_copy(update={"values": self.values * factor})


class ResultTable(BaseModel):
    """Equal-length columns plus optional trailing `#` comment lines."""

    model_config = ConfigDict(frozen=True)

    columns: list[Column]
    footer: list[str] = Field(default_factory=list)
    si: bool = False

    @model_validator(mode="after")
    def _same_length(self) -> "ResultTable":
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError(f"columns have different lengths: {sorted(lengths)}")
        return self

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].values) if self.columns else 0

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def with_column(self, column: Column) -> "ResultTable":
        return self.model_copy(update={"columns": [*self.columns, column]})

    def to_si(self, units: UnitSystem) -> "ResultTable":
        """Every dimensional column converted to SI."""
        return ResultTable(columns=[c.to_si(units) for c in self.columns], footer=self.footer, si=True)

    def to_csv(self) -> str:
        lines = [",".join(c.header(self.si) for c in self.columns)]
        for i in range(self.n_rows):
            lines.append(",".join(format_value(c.values[i]) for c in self.columns))
        lines.extend(f"# {line}" for line in self.footer)
        return "\n".join(lines) + "\n"


class RunMetadata(BaseModel):
    """Contents of the `.meta.json` sidecar."""

    command: str
    version: str = __version__
    config: dict[str, Any]
    diagnostics: dict[str, Any] = Field(default_factory=dict)
    created_at: datetime = Field(default_factory=lambda: datetime.now(UTC))


def meta_path(path: Path) -> Path:
    return path.with_name(path.name + META_SUFFIX)


def _atomic_write(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def write_result(table: ResultTable, path: str | Path, metadata: RunMetadata | None = None) -> Path:
    """Write the CSV and, when given, its metadata sidecar."""
    path = Path(path)
    _atomic_write(path, table.to_csv())
    if metadata is not None:
        _atomic_write(meta_path(path), metadata.model_dump_json(indent=2) + "\n")
    logger.info("Wrote %d rows x %d columns to %s", table.n_rows, len(table.columns), path)
    return path
