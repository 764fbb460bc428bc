"""
Main orchestrator for the eulercalc command line.

Usage:
    python eulercalc/main.py chi --input fixtures/whole_space_r3.json
    python eulercalc/main.py ect --input fixtures/closed_segment.json --directions fixtures/directions_s0.json
    python eulercalc/main.py verify --seed 7 --trials 20
"""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Sequence

# Add the project root to the path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eulercalc.lib.errors import EulerCalcError
from eulercalc.utils.config import (
    OUTPUT_FORMATS,
    RunConfig,
    default_log_level,
    default_refine_max,
    default_seed,
    default_workers,
    load_environment,
)

logger = logging.getLogger(__name__)


def _commands():
    from eulercalc.commands import chi, ect, fiber_chi, invert1d, qect, verify

    return {
        "chi": chi.run_chi,
        "ect": ect.run_ect,
        "qect": qect.run_qect,
        "invert1d": invert1d.run_invert1d,
        "fiber-chi": fiber_chi.run_fiber_chi,
        "verify": verify.run_verify,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Exact Euler characteristic transforms and inversion checks"
    )
    parser.add_argument(
        "subcommand",
        choices=["chi", "ect", "qect", "invert1d", "fiber-chi", "verify"],
        help="Operation to run"
    )
    parser.add_argument("--input", help="Constructible function file (JSON)")
    parser.add_argument("--directions", help="Direction file; random lattice directions when omitted")
    parser.add_argument("--direction-count", type=int, default=16,
                        help="Number of random directions when --directions is omitted")
    parser.add_argument("--probes", help="Quadric probe file (JSON)")
    parser.add_argument("--pairs", help="Point pair file for fiber-chi (JSON)")
    parser.add_argument("--queries", help="Query points for invert1d (JSON)")
    parser.add_argument("--kernel", help="ect_linear | quadric_v0 | quadric_fixedA")
    parser.add_argument("--matrix", help="Matrix file for the quadric_fixedA kernel (JSON)")
    parser.add_argument("--radius", help="Ball radius R for the quadric_fixedA kernel, as p/q")
    parser.add_argument("--trials", type=int, default=20, help="Random trials per verify check")
    parser.add_argument("--seed", type=int, default=None, help="Random seed (EULERCALC_SEED)")
    parser.add_argument("--refine-max", type=int, default=None,
                        help="Refinement cap for PL and mesh oracles (EULERCALC_REFINE_MAX)")
    parser.add_argument("--workers", type=int, default=None,
                        help="Threads for direction sweeps (EULERCALC_WORKERS)")
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default="records",
                        help="Output format")
    parser.add_argument("--output", help="Output file; stdout when omitted")
    parser.add_argument("--log-level", default=None, help="Logging level (EULERCALC_LOG_LEVEL)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        input=args.input,
        directions=args.directions,
        probes=args.probes,
        pairs=args.pairs,
        queries=args.queries,
        kernel=args.kernel,
        matrix=args.matrix,
        radius=args.radius,
        direction_count=args.direction_count,
        trials=args.trials,
        seed=args.seed if args.seed is not None else default_seed(),
        refine_max=args.refine_max if args.refine_max is not None else default_refine_max(),
        workers=args.workers if args.workers is not None else default_workers(),
        output_format=args.output_format,
        output=args.output,
    )


def run(config: RunConfig) -> int:
    """
    Dispatch one subcommand.

    Returns:
        int: exit status from the subcommand
    """
    logger.info(f"Running subcommand: {config.subcommand}")
    return _commands()[config.subcommand](config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main orchestration function.
    """
    load_environment(project_root / '.env.local')
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=(args.log_level or default_log_level()).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr
    )

    start_time = datetime.now()
    try:
        config = config_from_args(args)
        status = run(config)
    except EulerCalcError as e:
        logger.error(e.message)
        return e.exit_code
    except Exception as e:
        logger.error(f"{args.subcommand} failed: {str(e)}")
        raise

    duration = (datetime.now() - start_time).total_seconds()
    logger.info(f"Completed {args.subcommand} in {duration:.2f} seconds (exit {status})")
    return status


if __name__ == "__main__":
    sys.exit(main())
