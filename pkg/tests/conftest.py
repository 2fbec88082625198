import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from reeshom.parsing import parse_polynomial
from reeshom.poly import GREVLEX, QQ, GradedRing


def ring(*variables, field=QQ, order=GREVLEX):
    """ring('x', ('y', 2)) -> QQ[x:1, y:2]"""
    pairs = []
    for v in variables:
        if isinstance(v, str):
            pairs.append((v, 1))
        else:
            pairs.append(v)
    return GradedRing(field, pairs, order)


def pp(text, the_ring):
    return parse_polynomial(text, the_ring)


@pytest.fixture
def kx():
    return ring("x")


@pytest.fixture
def kxy():
    return ring("x", "y")


@pytest.fixture
def kxy12():
    return ring("x", ("y", 2))
