"""
ECT sweep of a constructible function over a direction set.

Directions come from --directions, or are drawn from the seed (lattice and rational sphere points).
"""

import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from eulercalc.lib.ect import ect_sweep
from eulercalc.lib.formats import (
    curve_rows,
    load_function,
    parse_directions,
    point_payload,
    read_text,
    step_function_to_payload,
)
from eulercalc.lib.rational import format_rational
from eulercalc.utils.config import RunConfig
from eulercalc.utils.io import emit
from eulercalc.utils.sampling import random_directions, rng_for

logger = logging.getLogger(__name__)

COMMAND_NAME = 'ect'


def run_ect(config: RunConfig) -> int:
    """
    Sweep ECT(f) over the configured directions and emit one curve per direction.

    Returns:
        int: exit status (0)
    """
    f = load_function(config.require('input'))
    if config.directions:
        directions = parse_directions(read_text(config.directions))
    else:
        directions = random_directions(rng_for(config.seed), f.ambient_dim, config.direction_count)
        logger.info(f"Drew {len(directions)} directions from seed {config.seed}")

    logger.info(f"Sweeping {len(directions)} directions")
    table = ect_sweep(f, directions, workers=config.workers)

    records = []
    rows = []
    for direction, curve in zip(table.directions, table.curves):
        records.append({
            "command": COMMAND_NAME,
            "direction": point_payload(direction.nu),
            "curve": step_function_to_payload(curve),
        })
        label = "(" + ", ".join(format_rational(c) for c in direction.nu) + ")"
        rows.extend(curve_rows(label, curve))
    emit(config, records, rows)
    logger.info(f"✓ Computed {len(table)} ECT curves")
    return 0


if __name__ == "__main__":
    from eulercalc.main import main
    sys.exit(main([COMMAND_NAME] + sys.argv[1:]))
