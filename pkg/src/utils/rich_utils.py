from typing import Dict, List, Literal, Optional, Tuple

from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

JustifyType = Literal["left", "center", "right"]

# quietest first
LOGGING_LEVELS: Tuple[str, ...] = ("errors_only", "summary", "verbose", "debug")

console = Console()


def level_at_least(logging_level: str, threshold: str) -> bool:
    """True when logging_level is as chatty as threshold (unknown levels count as summary)."""
    rank = LOGGING_LEVELS.index(logging_level) if logging_level in LOGGING_LEVELS else 1
    return rank >= LOGGING_LEVELS.index(threshold)


def create_table(
    columns: Optional[List[str]] = None,
    padding: Tuple[int, int, int, int] = (0, 1, 0, 1),  # top, right, bottom, left
) -> Table:
    """Rich table with bold headers; every column starts left-justified.

    Args:
        columns: Header names, or None for a table without a header row
        padding: Cell padding (top, right, bottom, left)
    """
    table = Table(show_header=columns is not None, header_style="bold", padding=padding)
    for col in columns or []:
        table.add_column(col, justify="left")
    return table


def align_columns(table: Table, alignments: Dict[str, JustifyType]) -> None:
    """Re-justify the columns named in `alignments`; numeric columns usually go right."""
    for column in table.columns:
        if str(column.header) in alignments:
            column.justify = alignments[str(column.header)]


def status_text(passed: bool) -> str:
    return "[green]PASS[/]" if passed else "[red]FAIL[/]"


def progress_bar(logging_level: str) -> Progress:
    """Shared progress bar for sampling loops; hidden at errors_only."""
    return Progress(
        TextColumn("[bold blue]{task.description}"),
        BarColumn(complete_style="green"),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        console=console,
        expand=False,
        disable=not level_at_least(logging_level, "summary"),
    )
