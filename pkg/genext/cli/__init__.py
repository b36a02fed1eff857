"""Command-line front end: run configurations, commands and reports."""

from genext.cli.config import Command, RunConfig, defaults_text, load_config, parse_config, serialize_config
from genext.cli.reports import Gate, RunReport, read_table, write_report, write_table
from genext.cli.runner import main, run

__all__ = [
    "Command",
    "Gate",
    "RunConfig",
    "RunReport",
    "defaults_text",
    "load_config",
    "main",
    "parse_config",
    "read_table",
    "run",
    "serialize_config",
    "write_report",
    "write_table",
]
