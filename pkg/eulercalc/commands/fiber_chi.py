"""
Fiber Euler characteristics χ(K_{x,f} ∩ K'_{x',f}) for a kernel and a list of pairs.

Each pair is reported with the closed form and the sphere-mesh oracle.
"""

import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from eulercalc.lib.errors import DimensionMismatchError, EulerCalcError
from eulercalc.lib.formats import parse_matrix, parse_pairs, point_payload, read_text
from eulercalc.lib.models import KernelFamily, KernelKind
from eulercalc.lib.radon import fiber_char_report
from eulercalc.lib.rational import to_rational
from eulercalc.utils.config import RunConfig
from eulercalc.utils.io import emit

logger = logging.getLogger(__name__)

COMMAND_NAME = 'fiber-chi'


def build_kernel(config: RunConfig, n: int) -> KernelKind:
    """KernelKind from --kernel (plus --matrix and --radius for quadric_fixedA)."""
    try:
        family = KernelFamily(config.require('kernel'))
    except ValueError:
        choices = ", ".join(k.value for k in KernelFamily)
        raise EulerCalcError(f"Unknown kernel {config.kernel!r}; expected one of {choices}", exit_code=2)
    if family is KernelFamily.ECT_LINEAR:
        return KernelKind.ect_linear(n)
    if family is KernelFamily.QUADRIC_V0:
        return KernelKind.quadric_v0(n)
    A = parse_matrix(read_text(config.require('matrix')))
    return KernelKind.quadric_fixed_a(A, to_rational(config.require('radius')))


def run_fiber_chi(config: RunConfig) -> int:
    """
    Emit one FiberCharReport record per pair in --pairs.

    Returns:
        int: 0 when every stable oracle value matches the closed form, 1 otherwise
    """
    pairs = parse_pairs(read_text(config.require('pairs')))
    if not pairs:
        emit(config, [])
        return 0
    n = len(pairs[0][0])
    if any(len(x) != n or len(y) != n for x, y in pairs):
        raise DimensionMismatchError("All pairs must live in the same R^n")
    kind = build_kernel(config, n)
    logger.info(f"Checking {len(pairs)} pairs for kernel {kind.family.value} (n={n})")

    records = []
    disagreements = 0
    unstable = 0
    for x, x_prime in pairs:
        report = fiber_char_report(kind, x, x_prime, config.refine_max)
        disagreements += not report.agrees
        unstable += not report.oracle_stable
        records.append({
            "command": COMMAND_NAME,
            "kind": kind.family.value,
            "x": point_payload(x),
            "x_prime": point_payload(x_prime),
            "analytic_chi": report.analytic_chi,
            "oracle_chi": report.oracle_chi,
            "oracle_stable": report.oracle_stable,
            "oracle_level": report.oracle_level,
            "agrees": report.agrees,
        })
    emit(config, records)

    if unstable:
        logger.warning(f"{unstable} pairs did not stabilise within level {config.refine_max}")
    if disagreements:
        logger.error(f"{disagreements} pairs disagree with the closed form")
        return 1
    logger.info(f"✓ {len(pairs)} pairs agree with the closed form")
    return 0


if __name__ == "__main__":
    from eulercalc.main import main
    sys.exit(main([COMMAND_NAME] + sys.argv[1:]))
