"""Rich rendering of suite reports and command output.

Nothing here depends on the clock or the environment, so equal inputs print equal bytes.
"""

from __future__ import annotations

from typing import Iterable

from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from .models import SuiteReport

REPORT_WIDTH = 100

console = Console(width=REPORT_WIDTH)


def render_suite_report(report: SuiteReport) -> None:
    """Render a suite run: summary panel, per-sample table, then counterexamples."""
    console.print()
    _render_summary_panel(report)
    console.print()
    _render_sample_table(report)
    for failure in report.failures():
        console.print()
        _render_counterexample(report, failure.index)


def render_status_line(report: SuiteReport) -> None:
    """Render a single-line suite summary."""
    color = "green" if report.all_passed else "red"
    word = "PASS" if report.all_passed else "FAIL"
    console.print(
        f"[bold]{escape(report.config.suite)}[/bold] │ "
        f"[{color}]{word} {report.passed_count}/{len(report.results)}[/{color}] │ "
        f"seed {report.config.seed}"
    )


def _render_summary_panel(report: SuiteReport) -> None:
    cfg = report.config
    color = "green" if report.all_passed else "red"
    lines = [
        f"[bold]Suite:[/bold] {escape(cfg.suite)}",
        f"[bold]Seed:[/bold] {cfg.seed}",
        f"[bold]Ring:[/bold] n={cfg.xvars}, m={cfg.tvars}",
        f"[bold]Bounds:[/bold] degree <= {cfg.degree}, height <= {cfg.height}",
        "",
        f"[bold]Passed:[/bold] [{color}]{report.passed_count}/{len(report.results)}[/{color}]",
        f"[bold]Regenerated draws:[/bold] {report.rejections}",
    ]
    console.print(Panel("\n".join(lines), title="[bold cyan]Property Suite[/bold cyan]",
                        border_style="cyan"))


def _render_sample_table(report: SuiteReport) -> None:
    table = Table(title="Samples", show_lines=False)
    table.add_column("Sample", justify="right", style="cyan")
    table.add_column("Status")
    table.add_column("Regenerated", justify="right")
    for result in report.results:
        style = "green" if result.passed else "bold red"
        table.add_row(str(result.index), f"[{style}]{result.status}[/{style}]", str(result.rejections))
    console.print(table)


def _render_counterexample(report: SuiteReport, index: int) -> None:
    result = report.results[index]
    lines = ["[bold]Inputs[/bold]"]
    lines += [f"  {escape(k)} = {escape(v)}" for k, v in result.inputs.items()]
    lines.append("[bold]Sides[/bold]")
    lines += [f"  {escape(k)} = {escape(v)}" for k, v in result.sides.items()]
    console.print(Panel("\n".join(lines), title=f"[bold red]Counterexample {index}[/bold red]",
                        border_style="red"))


def render_command_output(lines: Iterable[tuple[str, str]]) -> None:
    """Print ``label: value`` lines of a script run without markup interpretation."""
    for label, value in lines:
        console.print(f"[bold]{escape(label)}:[/bold] {escape(value)}", soft_wrap=True, highlight=False)


def render_error(code: str, message: str) -> None:
    console.print(f"[red]{escape(code)}: {escape(message)}[/red]", soft_wrap=True, highlight=False)
