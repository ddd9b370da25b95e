"""Evaluation results.

This module contains the report type and its CSV/JSON renderings.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

from fpsp_py.evaluation.utils import REPORT_COLUMNS


@dataclass(frozen=True)
class EvalRow(object):
    """Metrics of one prediction."""

    method: str
    person: str
    image: str
    kldiv: float
    cc: float


@dataclass(frozen=True)
class MethodSummary(object):
    """Aggregate metrics of one method."""

    kldiv: float
    cc: float
    rows: int
    excluded: int


@dataclass(frozen=True)
class EvalReport(object):
    """Per-pair rows and per-method means.

    Rows are ordered by method (in report order), then person, then
    image. notes carries free-text remarks per method.
    """

    rows: tuple[EvalRow, ...]
    summaries: dict[str, MethodSummary]
    notes: dict[str, str] = field(default_factory=dict)

    def method_rows(self, method: str) -> list[EvalRow]:
        """Rows of one method.

        Args:
            method (str): Method name.

        Returns:
            list[EvalRow]: Rows in report order.
        """
        return [row for row in self.rows if row.method == method]

    def to_csv(self) -> str:
        """Render rows as CSV `method,person,image,kldiv,cc`.

        Floats use repr, so equal reports render to equal bytes.

        Returns:
            str: CSV text.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(REPORT_COLUMNS)
        for row in self.rows:
            writer.writerow([
                row.method,
                row.person,
                row.image,
                repr(row.kldiv),
                repr(row.cc),
            ])
        return buffer.getvalue()

    def summary(self) -> dict[str, Any]:
        """Aggregate summary as plain data.

        Returns:
            dict[str, Any]: JSON-ready summary.
        """
        methods = {}
        for method, summary in self.summaries.items():
            methods[method] = {
                'kldiv': summary.kldiv,
                'cc': summary.cc,
                'rows': summary.rows,
                'excluded': summary.excluded,
            }
            if method in self.notes:
                methods[method]['note'] = self.notes[method]
        return {'methods': methods}

    def to_json(self) -> str:
        """Render the summary as JSON.

        Returns:
            str: Indented JSON text ending in a newline.
        """
        return json.dumps(self.summary(), indent=2) + '\n'

    def write(
        self,
        csv_path: Union[str, Path],
        json_path: Union[str, Path],
    ) -> None:
        """Write report.csv and report.json.

        Args:
            csv_path (Union[str, Path]): CSV destination.
            json_path (Union[str, Path]): JSON summary destination.
        """
        Path(csv_path).write_text(self.to_csv())
        Path(json_path).write_text(self.to_json())
