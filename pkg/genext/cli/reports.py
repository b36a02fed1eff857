"""Write run outputs: `report.json` and tab-separated `.table` files."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from genext.core.residuals import ResidualReport

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"
TABLE_SUFFIX = ".table"
FLOAT_FORMAT = "%.12e"


@dataclass(slots=True, frozen=True)
class Gate:
    """A measured quantity and the tolerance it must stay within.

    Attributes:
        name: what is measured
        value: the measurement, infinite when it could not be made
        tolerance: the bound it must not exceed
    """

    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        """Whether the measurement is within tolerance."""
        return self.value <= self.tolerance

    def to_record(self) -> dict[str, Any]:
        """Convert to a plain record."""
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance, "passed": self.passed}


@dataclass(slots=True)
class RunReport:
    """What a command computed and which gates it checked.

    Attributes:
        command: the executed command
        config: the resolved configuration
        results: per-command records
        gates: the checked gates
        tables: tables to write, by file stem
    """

    command: str
    config: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    gates: list[Gate] = field(default_factory=list)
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)

    def gate(self, name: str, value: float, tolerance: float) -> None:
        """Record a gate."""
        self.gates.append(Gate(name=name, value=float(value), tolerance=tolerance))

    def gate_residual(self, name: str, report: ResidualReport, tolerance: float) -> None:
        """Record a residual report and gate its maximum."""
        self.results[name] = report.to_record()
        self.gate(name, report.max_abs, tolerance)

    @property
    def failures(self) -> list[Gate]:
        """Gates out of tolerance."""
        return [gate for gate in self.gates if not gate.passed]

    def to_record(self) -> dict[str, Any]:
        """Convert to the content of `report.json`, tables excluded."""
        return {
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "gates": [gate.to_record() for gate in self.gates],
            "passed": not self.failures,
        }


def write_table(table: pd.DataFrame, path: Path) -> None:
    """Write a table as tab-separated text under a '#'-prefixed header line."""
    with path.open("w", encoding="utf-8") as file:
        file.write("# " + "\t".join(str(column) for column in table.columns) + "\n")
        table.to_csv(file, sep="\t", header=False, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def read_table(path: Path) -> pd.DataFrame:
    """Read a table written by `write_table`."""
    with path.open(encoding="utf-8") as file:
        columns = file.readline().removeprefix("#").split()
    return pd.read_csv(path, sep="\t", comment="#", header=None, names=columns)


def write_report(report: RunReport, output_dir: Path) -> Path:
    """Write `report.json` and every table of a run.

    Returns:
        the path of `report.json`
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    for stem, table in report.tables.items():
        write_table(table, output_dir / f"{stem}{TABLE_SUFFIX}")
    path = output_dir / REPORT_NAME
    path.write_text(json.dumps(report.to_record(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("Wrote %s and %d tables.", path, len(report.tables))
    return path
