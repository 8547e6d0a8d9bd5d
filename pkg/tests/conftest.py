from __future__ import annotations

import math

import pytest

from chainstretch import Circle, Point, TerminalPair, make_chain

SQ3_2 = math.sqrt(3.0) / 2.0


@pytest.fixture
def sym_chain():
    """Two unit circles centered (0,0) and (1,0)."""
    return make_chain([Circle(Point(0, 0), 1.0), Circle(Point(1, 0), 1.0)])


@pytest.fixture
def sym_terminals():
    return TerminalPair(Point(-1, 0), Point(2, 0))
