"""Report Generator - Text, JSON and HTML reports for verification and convergence runs."""

import json
from datetime import datetime
from typing import Any, Dict, List, Optional

from jinja2 import Environment, BaseLoader, select_autoescape
from tabulate import tabulate

from analyzers.accuracy_analyzer import AccuracyReport
from analyzers.error_analyzer import ConvergenceResult


HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>Convergence report: {{ result.case }} / {{ result.order }}</title>
    <style>
        body { font-family: -apple-system, 'Segoe UI', Roboto, sans-serif; max-width: 960px; margin: 0 auto; padding: 20px; }
        table { border-collapse: collapse; width: 100%; }
        th, td { border: 1px solid #ccc; padding: 6px 10px; text-align: right; }
        th { background: #f0f0f0; }
        .exact { color: #2a7a2a; font-weight: bold; }
    </style>
</head>
<body>
    <h1>Convergence report</h1>
    <p>Case <b>{{ result.case }}</b>, operators <b>{{ result.order }}</b>, generated {{ timestamp }}.</p>
    {% if result.exact %}<p class="exact">Numerical and reference fields match on every grid.</p>{% endif %}
    <table>
        <tr><th>Nc</th><th>l2</th><th>l&infin;</th><th>rate l2</th><th>rate l&infin;</th></tr>
        {% for row in result.rows %}
        <tr>
            <td>{{ row.Nc }}</td>
            <td>{{ "%.6e"|format(row.l2) }}</td>
            <td>{{ "%.6e"|format(row.linf) }}</td>
            <td>{{ rate(row.rate_l2) }}</td>
            <td>{{ rate(row.rate_linf) }}</td>
        </tr>
        {% endfor %}
    </table>
    <p>Least-squares rates: l2 {{ rate(result.fitted_l2) }}, l&infin; {{ rate(result.fitted_linf) }}.</p>
    {% if result.metadata %}
    <h2>Run parameters</h2>
    <ul>
    {% for key, value in result.metadata.items() %}<li>{{ key }} = {{ value }}</li>
    {% endfor %}
    </ul>
    {% endif %}
</body>
</html>
"""


def _rate(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.2f}"


class ReportGenerator:
    """Render operator-verification and convergence reports."""

    def __init__(self):
        self.timestamp = datetime.now().isoformat(timespec="seconds")
        self._env = Environment(loader=BaseLoader(), autoescape=select_autoescape(["html"]))

    def verification_lines(self, report: AccuracyReport, residuals: Dict[str, float]) -> List[str]:
        """key=value lines for the operators --verify payload."""
        lines = [f"{key}={value}" for key, value in report.as_key_values().items()]
        lines += [f"{key}={value:.3e}" for key, value in residuals.items()]
        return lines

    def verification_table(self, report: AccuracyReport) -> str:
        return tabulate(
            report.as_rows(), headers=["operator", "interior", "boundary"], tablefmt="simple"
        )

    def generate(self, result: ConvergenceResult) -> str:
        """Plain-text convergence report.

        Args:
            result: Per-grid errors and fitted rates.

        Returns:
            The report as a string.
        """
        rows = [
            (r.Nc, f"{r.l2:.6e}", f"{r.linf:.6e}", _rate(r.rate_l2), _rate(r.rate_linf))
            for r in result.rows
        ]
        report = [
            "=" * 70,
            f"CONVERGENCE REPORT: {result.case} / {result.order}",
            "=" * 70,
            f"Generated: {self.timestamp}",
            "",
            tabulate(rows, headers=["Nc", "l2", "linf", "rate l2", "rate linf"], tablefmt="simple"),
            "",
            f"Fitted rates: l2 {_rate(result.fitted_l2)}, linf {_rate(result.fitted_linf)}",
        ]
        if result.exact:
            report.append("Numerical and reference fields match on every grid.")
        if result.metadata:
            report.append("")
            report.append(tabulate(sorted(result.metadata.items()), tablefmt="plain"))
        return "\n".join(report)

    def generate_json(self, result: ConvergenceResult) -> str:
        data: Dict[str, Any] = {
            "timestamp": self.timestamp,
            "case": result.case,
            "order": result.order,
            "exact": result.exact,
            "rows": [
                {"Nc": r.Nc, "l2": r.l2, "linf": r.linf, "rate_l2": r.rate_l2, "rate_linf": r.rate_linf}
                for r in result.rows
            ],
            "fitted": {"l2": result.fitted_l2, "linf": result.fitted_linf},
            "metadata": result.metadata,
        }
        return json.dumps(data, indent=2, default=str)

    def generate_html(self, result: ConvergenceResult) -> str:
        template = self._env.from_string(HTML_TEMPLATE)
        return template.render(result=result, timestamp=self.timestamp, rate=_rate)
