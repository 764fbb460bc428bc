"""
QECT probe batch.

Functions supported on points and segments are evaluated exactly; anything else goes through the
piecewise-linear estimate up to --refine-max and is flagged as approximate.
"""

import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from eulercalc.lib.formats import load_function, parse_probes, point_payload, read_text
from eulercalc.lib.models import ConstructibleFunction, QuadricProbe
from eulercalc.lib.qect import qect_eval_exact, qect_eval_pl
from eulercalc.lib.rational import format_rational
from eulercalc.utils.config import RunConfig
from eulercalc.utils.io import emit

logger = logging.getLogger(__name__)

COMMAND_NAME = 'qect'


def _evaluate(f: ConstructibleFunction, probe: QuadricProbe, exact: bool, refine_max: int) -> dict:
    if exact:
        return {"value": qect_eval_exact(f, probe), "exactness": "exact", "level": None, "stable": True}
    estimate = qect_eval_pl(f, probe, refine_max)
    return {
        "value": estimate.estimate,
        "exactness": "pl-approximate",
        "level": estimate.level,
        "stable": estimate.stable,
    }


def run_qect(config: RunConfig) -> int:
    """
    Evaluate QECT(f) at every probe in --probes.

    Returns:
        int: exit status (0)
    """
    f = load_function(config.require('input'))
    probes = parse_probes(read_text(config.require('probes')))
    exact = f.max_cell_dimension <= 1
    logger.info(f"Evaluating {len(probes)} probes ({'exact' if exact else 'pl-approximate'})")

    records = []
    evaluated: dict[QuadricProbe, dict] = {}
    for index, probe in enumerate(probes):
        record = {
            "command": COMMAND_NAME,
            "probe": index,
            "A": [point_payload(row) for row in probe.A.entries],
            "v": point_payload(probe.v),
            "t": format_rational(probe.t),
        }
        # positive multiples of one probe share an evaluation
        key = probe.normalized()
        if key not in evaluated:
            evaluated[key] = _evaluate(f, probe, exact, config.refine_max)
        record.update(evaluated[key])
        records.append(record)

    rows = [
        {key: r[key] for key in ("probe", "t", "value", "exactness", "level", "stable")}
        for r in records
    ]
    emit(config, records, rows)
    logger.info(f"✓ Evaluated {len(records)} probes")
    return 0


if __name__ == "__main__":
    from eulercalc.main import main
    sys.exit(main([COMMAND_NAME] + sys.argv[1:]))
