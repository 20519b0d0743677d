"""
bphaven.cli

Command-line entry point and the pipeline commands behind it.
"""

from .commands import RunConfig, cmd_fit, cmd_report, cmd_simulate, cmd_validate, run

__all__ = ["RunConfig", "cmd_fit", "cmd_report", "cmd_simulate", "cmd_validate", "run"]
