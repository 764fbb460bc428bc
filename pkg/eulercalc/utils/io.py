"""
Output helpers shared by the subcommands.
"""

import logging
from pathlib import Path
from typing import Optional

from eulercalc.lib.formats import records_to_lines, rows_to_csv
from eulercalc.utils.config import RunConfig

logger = logging.getLogger(__name__)


def write_output(text: str, output: Optional[str]) -> None:
    """Write to the output path, or stdout when none is given."""
    if output is None:
        print(text, end="")
        return
    Path(output).write_text(text, encoding="utf-8")
    logger.info(f"✓ Wrote {output}")


def emit(config: RunConfig, records: list[dict], rows: Optional[list[dict]] = None) -> None:
    """Emit records as JSON lines, or `rows` (defaulting to the records) as CSV / plot-CSV."""
    if config.output_format == "records":
        text = records_to_lines(records)
    else:
        text = rows_to_csv(rows if rows is not None else records, plot=config.output_format == "plot-csv")
    write_output(text, config.output)
