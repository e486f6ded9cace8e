"""Shared types for command handlers."""

from collections.abc import Awaitable, Callable
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from ..results import ResultTable
from ..units import UnitSystem, UnitTag

DENSITY = {UnitTag.DENSITY: 1}
ENERGY = {UnitTag.ENERGY: 1}
ENERGY_DENSITY = {UnitTag.ENERGY: 1, UnitTag.DENSITY: 1}
COUPLING = {UnitTag.ENERGY: 1, UnitTag.DENSITY: -1}
LENGTH = {UnitTag.LENGTH: 1}
SPEED = {UnitTag.SPEED: 1}
WAVENUMBER = {UnitTag.WAVENUMBER: 1}


class RunContext(BaseModel):
    """What a handler needs besides its parameters."""

    model_config = ConfigDict(frozen=True)

    units: UnitSystem
    max_concurrent: int = Field(default=1, ge=1)
    si: bool = False


class CommandResult(BaseModel):
    """Output table in internal units plus diagnostics for the metadata sidecar."""

    model_config = ConfigDict(frozen=True)

    table: ResultTable
    diagnostics: dict[str, Any] = Field(default_factory=dict)
    # first column is a 1-D sweep axis that reference data can be overlaid on
    overlayable: bool = True


Handler = Callable[[Any, RunContext], Awaitable[CommandResult]]
