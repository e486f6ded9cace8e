"""Command handlers keyed by command name."""

from ..config import Command
from .base import CommandResult, Handler, RunContext
from .dipolar import run_depletion, run_gprime, run_spectrum, run_stability
from .mixture import run_eos, run_profile, run_selfconsistent, run_speeds

COMMANDS: dict[Command, Handler] = {
    Command.EOS: run_eos,
    Command.SPEEDS: run_speeds,
    Command.SELFCONSISTENT: run_selfconsistent,
    Command.PROFILE: run_profile,
    Command.GPRIME: run_gprime,
    Command.DEPLETION: run_depletion,
    Command.SPECTRUM: run_spectrum,
    Command.STABILITY: run_stability,
}

__all__ = ["COMMANDS", "CommandResult", "Handler", "RunContext"]
