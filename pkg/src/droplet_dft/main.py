"""Main entry point for droplet-dft."""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from . import __version__
from .commands import COMMANDS, RunContext
from .config import Command, RunConfig, Settings
from .errors import (
    ConfigError,
    DomainError,
    IterationLimitError,
    NoDropletError,
    NoStableSolution,
    ReferenceDataError,
)
from .results import Column, ResultTable, RunMetadata, ingest_reference, write_result

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NOT_CONVERGED = 3
EXIT_UNSTABLE = 4

VALIDATION_ERRORS = (ConfigError, DomainError, NoDropletError, ReferenceDataError, ValidationError)


def setup_logging(level: str = "INFO") -> None:
    """Configure logging on stderr; stdout stays free for data."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="droplet-dft",
        description="Density-functional toolkit for quantum droplets: correlation energies, spectra and profiles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=[c.value for c in Command], help="computation to run")
    parser.add_argument("--config", required=True, type=Path, help="run configuration (.json, .yaml or .yml)")
    parser.add_argument("--out", type=Path, help="CSV output path (overrides output_path)")
    parser.add_argument("--ref", type=Path, help="reference dataset to overlay (overrides reference_data_path)")
    parser.add_argument("--ref-xscale", type=float, help="multiplier taking reference x values to internal units")
    parser.add_argument("--ref-yscale", type=float, help="multiplier taking reference y values to internal units")
    return parser


def apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Merge command-line options into the loaded configuration."""
    if config.command.value != args.command:
        raise ConfigError(
            f"command {args.command!r} does not match the config's command {config.command.value!r}", key="command"
        )
    updates: dict[str, Any] = {}
    if args.out is not None:
        updates["output_path"] = args.out
    if args.ref is not None:
        updates["reference_data_path"] = args.ref
    if args.ref_xscale is not None:
        updates["reference_x_scale"] = args.ref_xscale
    if args.ref_yscale is not None:
        updates["reference_y_scale"] = args.ref_yscale
    if not updates:
        return config
    return RunConfig.model_validate({**config.model_dump(), **updates})


async def execute(config: RunConfig, settings: Settings) -> tuple[ResultTable, dict[str, Any]]:
    """Run the configured command and return its table (in output units) with diagnostics."""
    units = config.params.unit_system()
    ctx = RunContext(units=units, max_concurrent=settings.threads, si=config.units == "si")
    logger.info("Running %s with up to %d threads", config.command.value, ctx.max_concurrent)

    result = await COMMANDS[config.command](config.params, ctx)
    table = result.table

    if config.reference_data_path is not None:
        if not result.overlayable:
            raise ConfigError(
                f"reference overlay is not available for {config.command.value!r}", key="reference_data_path"
            )
        dataset = ingest_reference(config.reference_data_path, config.reference_x_scale, config.reference_y_scale)
        axis, first = table.columns[0], table.columns[1]
        table = table.with_column(
            Column(name="reference", values=dataset.overlay(axis.values), dimension=first.dimension)
        )

    if ctx.si:
        table = table.to_si(units)
    return table, result.diagnostics


def run(config: RunConfig, settings: Settings | None = None) -> int:
    """Execute one command and write its CSV; returns the exit status.

    Nothing is written unless the command succeeds.
    """
    settings = settings or Settings()
    try:
        if config.output_path is None:
            raise ConfigError("no output path; set output_path or pass --out", key="output_path")
        table, diagnostics = asyncio.run(execute(config, settings))
        metadata = RunMetadata(
            command=config.command.value, config=config.model_dump(mode="json"), diagnostics=diagnostics
        )
        write_result(table, config.output_path, metadata)
    except VALIDATION_ERRORS as e:
        logger.error("Invalid input: %s", e)
        return EXIT_VALIDATION
    except IterationLimitError as e:
        logger.error("Solver did not converge: %s", e)
        return EXIT_NOT_CONVERGED
    except NoStableSolution as e:
        logger.error("No stable solution: %s", e)
        return EXIT_UNSTABLE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)

    try:
        settings = Settings()
    except ValidationError as e:
        print(f"Error: invalid DROPLET_DFT_* environment settings: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    setup_logging(settings.log_level)

    try:
        config = apply_overrides(RunConfig.from_file(args.config), args)
    except (ConfigError, ValidationError) as e:
        logger.error("Invalid configuration %s: %s", args.config, e)
        return EXIT_VALIDATION

    if config.logging.level:
        setup_logging(config.logging.level)
    logger.info("Loaded configuration from %s", args.config)
    return run(config, settings)


if __name__ == "__main__":
    sys.exit(main())
