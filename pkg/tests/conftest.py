import itertools
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tropmorse import (Lagrangian, hom_generators, expected_dimension,
                       one_dim_cells, walk_family, chain_map_check)


QUANTUM_Q = Fraction(4)
QUANTUM_SIGMA = [(1, 2), (3,)]


def quantum_lagrangians():
    """The standard genus-one fixture: two transversal sections and one
    self-paired section on the unit circle, with generic offsets."""
    return [Lagrangian(0, Fraction(0), 1),
            Lagrangian(1, Fraction(1, 16), 1),
            Lagrangian(2, Fraction(1, 10), 1)]


@pytest.fixture(scope="session")
def quantum_report():
    """The full genus-one verification report for the standard fixture,
    together with its wall-clock runtime."""
    t0 = time.perf_counter()
    report = chain_map_check(3, 1, Q=QUANTUM_Q)
    return {"report": report, "elapsed": time.perf_counter() - t0}


@pytest.fixture(scope="session")
def quantum_families():
    """All one-dimensional genus-one families of the standard fixture:
    a list of (point tuple, cells, walked components)."""
    L = quantum_lagrangians()
    homs = [hom_generators(L[0], L[1]), hom_generators(L[1], L[0]),
            hom_generators(L[2], L[2])]
    out = []
    for tup in itertools.product(*homs):
        if expected_dimension(list(tup), 1) != 1:
            continue
        cells = one_dim_cells(list(tup), 1, QUANTUM_SIGMA, QUANTUM_Q)
        comps = walk_family(cells, QUANTUM_Q)
        out.append((tup, cells, comps))
    return out
