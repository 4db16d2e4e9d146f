"""Export service rendering sweep tables as CSV and reports as JSON."""

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..exceptions import ValidationError
from ..models.report import json_number
from ..models.toy import ToySweepRow
from ..utils import LoggerMixin


def format_number(value: float) -> str:
    """Shortest round-trip representation; infinities as 'inf'."""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


class ExportService(LoggerMixin):
    """Text-only exports: plot-ready CSV and UTF-8 JSON, each carrying a schema string."""

    def __init__(self, sweep_schema: str = "genbound.sweep/1", report_schema: str = "genbound.report/1"):
        self.sweep_schema = sweep_schema
        self.report_schema = report_schema

        self.export_formats = {
            'csv': {
                'extension': 'csv',
                'description': 'Comma-separated sweep table'
            },
            'json': {
                'extension': 'json',
                'description': 'JavaScript Object Notation report'
            }
        }

    @staticmethod
    def sweep_header(alphas: Sequence[float]) -> List[str]:
        labels = [f"{a:.2f}" for a in alphas]
        return (["t", "gen_true", "gen_se", "bound_mi"]
                + [f"bound_js_{label}" for label in labels]
                + [f"bound_renyi_{label}" for label in labels])

    def sweep_csv(self, rows: List[ToySweepRow], alphas: Sequence[float]) -> str:
        """
        Render sweep rows. The first line is a ``# schema`` comment, the second
        the column header.
        """
        if not rows:
            raise ValidationError("No sweep rows to export")

        output = io.StringIO()
        output.write(f"# schema: {self.sweep_schema}\n")
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(self.sweep_header(alphas))
        for row in rows:
            writer.writerow([format_number(v) for v in row.values(list(alphas))])

        self.logger.debug(f"Rendered {len(rows)} sweep rows")
        return output.getvalue()

    def report_json(self, payload: Dict[str, Any], schema: Optional[str] = None) -> str:
        """Deterministic JSON: schema first, then the payload in insertion order."""
        document = {'schema': schema or self.report_schema}
        document.update(json_number(payload))
        return json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    def write(self, content: str, output: Optional[str] = None) -> None:
        """Write to ``output`` or to stdout."""
        if output is None or output == "-":
            sys.stdout.write(content)
            sys.stdout.flush()
            return

        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
        self.logger.info(f"Wrote {len(content)} characters to {path}")
