"""
Shared pytest fixtures.
"""

import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from eulercalc.lib.euler_core import closure_indicator
from eulercalc.lib.models import ConstructibleFunction
from eulercalc.utils.sampling import rng_for


@pytest.fixture
def fixtures_dir() -> Path:
    return project_root / "fixtures"


@pytest.fixture
def rng():
    return rng_for(20240601)


@pytest.fixture
def closed_segment() -> ConstructibleFunction:
    """1 on the closed interval [-1, 1]."""
    return closure_indicator([(-1,), (1,)])


@pytest.fixture
def origin_point() -> ConstructibleFunction:
    """1 on {0} ⊂ R."""
    return ConstructibleFunction.from_cells(1, [(((0,),), 1)])


@pytest.fixture
def open_unit_interval() -> ConstructibleFunction:
    """1 on the open interval (0, 1)."""
    return ConstructibleFunction.from_cells(1, [(((0,), (1,)), 1)])
