from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quivermoduli import GramLattice


@pytest.fixture
def mukai3() -> GramLattice:
    """Rank-3 even lattice with pairing c^2 - 2rs on (r, c, s)."""
    return GramLattice(((0, 0, -1), (0, 2, 0), (-1, 0, 0)), even=True)


@pytest.fixture
def hyperbolic() -> GramLattice:
    return GramLattice(((0, 1), (1, 0)), even=True)
