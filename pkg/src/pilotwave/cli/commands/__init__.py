from pilotwave.cli.commands.base_command import BaseCommand
from pilotwave.cli.commands.check import CheckCommand
from pilotwave.cli.commands.ensemble import EnsembleCommand
from pilotwave.cli.commands.rate import RateCommand
from pilotwave.cli.commands.trajectories import Layout, TrajectoriesCommand
from pilotwave.cli.commands.validate import ValidateCommand

__all__ = [
    "BaseCommand",
    "CheckCommand",
    "EnsembleCommand",
    "Layout",
    "RateCommand",
    "TrajectoriesCommand",
    "ValidateCommand",
]
