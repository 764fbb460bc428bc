"""
Euler integral of a constructible function.

Reads a function file and reports ∫ f dχ together with the validation report of its complex.
"""

import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from eulercalc.lib.euler_core import euler_integral, validate_complex
from eulercalc.lib.formats import load_function
from eulercalc.utils.config import RunConfig
from eulercalc.utils.io import emit

logger = logging.getLogger(__name__)

COMMAND_NAME = 'chi'


def run_chi(config: RunConfig) -> int:
    """
    Compute ∫ f dχ for the function in --input.

    Returns:
        int: exit status (0)
    """
    logger.info(f"Starting {COMMAND_NAME} on {config.input}")
    f = load_function(config.require('input'))

    report = validate_complex(f.complex)
    if not report.valid:
        for message in report.messages:
            logger.warning(f"Invalid complex: {message}")

    value = euler_integral(f)
    emit(config, [{
        "command": COMMAND_NAME,
        "ambient_dim": f.ambient_dim,
        "euler_integral": value,
        "valid": report.valid,
    }])
    logger.info(f"✓ ∫ f dχ = {value}")
    return 0


if __name__ == "__main__":
    from eulercalc.main import main
    sys.exit(main([COMMAND_NAME] + sys.argv[1:]))
