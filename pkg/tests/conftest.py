"""Shared fixtures: the built-in maps plus a few purpose-built ones."""

from fractions import Fraction as F

import pytest

from pmchaos import (AffineBranch, Interval, PMMap, Piece, TableBranch,
                     period_three_map, save_map, tent_map)

UNIT = Interval(F(0), F(1))


@pytest.fixture
def tent():
    return tent_map()


@pytest.fixture
def rot3():
    """Three pieces cycling 1 -> 2 -> 3 -> 1 with f o f o f = identity."""
    return period_three_map()


@pytest.fixture
def tent_file(tmp_path):
    path = tmp_path / "tent.json"
    save_map(tent_map(), path)
    return str(path)


@pytest.fixture
def rot3_file(tmp_path):
    path = tmp_path / "rot3.json"
    save_map(period_three_map(), path)
    return str(path)


@pytest.fixture
def two_tower():
    """Two expanding tents side by side: basic components {1,2} and {3,4}
    that share only the boundary point 1/2."""
    pieces = [
        Piece(1, F(0), F(1, 4)),
        Piece(2, F(1, 4), F(1, 2), left_closed=False),
        Piece(3, F(1, 2), F(3, 4), left_closed=False),
        Piece(4, F(3, 4), F(1), left_closed=False),
    ]
    branches = [
        AffineBranch(F(2), F(0)),           # [0, 1/4]   -> [0, 1/2]
        AffineBranch(F(-2), F(1)),          # (1/4, 1/2] -> [0, 1/2)
        AffineBranch(F(2), F(-1, 2)),       # (1/2, 3/4] -> (1/2, 1]
        AffineBranch(F(-2), F(5, 2)),       # (3/4, 1]   -> [1/2, 1)
    ]
    return PMMap(UNIT, pieces, branches)


@pytest.fixture
def three_branch():
    """Single basic component on three pieces whose covering graph is not
    complete: 1 -> {1,2}, 2 -> {2,3}, 3 -> {1,2,3}."""
    pieces = [
        Piece(1, F(0), F(1, 3)),
        Piece(2, F(1, 3), F(2, 3), left_closed=False),
        Piece(3, F(2, 3), F(1), left_closed=False),
    ]
    branches = [
        AffineBranch(F(2), F(0)),           # [0, 1/3]   -> [0, 2/3]
        AffineBranch(F(2), F(-1, 3)),       # (1/3, 2/3] -> (1/3, 1]
        AffineBranch(F(-3), F(3)),          # (2/3, 1]   -> [0, 1)
    ]
    return PMMap(UNIT, pieces, branches)


@pytest.fixture
def chain():
    """Transient pieces 1 -> 2 -> 3 with a self-loop only on piece 3."""
    pieces = [
        Piece(1, F(0), F(1, 4)),
        Piece(2, F(1, 4), F(1, 2), left_closed=False),
        Piece(3, F(1, 2), F(1), left_closed=False),
    ]
    branches = [
        AffineBranch(F(1), F(1, 4)),        # [0, 1/4]   -> [1/4, 1/2]
        AffineBranch(F(2), F(0)),           # (1/4, 1/2] -> (1/2, 1]
        AffineBranch(F(-1), F(3, 2)),       # (1/2, 1]   -> [1/2, 1)
    ]
    return PMMap(UNIT, pieces, branches)


@pytest.fixture
def non_markov():
    """Endpoint image 3/4 misses the depth-1 critical set {0, 1/2, 1}."""
    pieces = [
        Piece(1, F(0), F(1, 2)),
        Piece(2, F(1, 2), F(1), left_closed=False),
    ]
    branches = [
        AffineBranch(F(3, 2), F(0)),        # [0, 1/2]   -> [0, 3/4]
        AffineBranch(F(-3, 2), F(3, 2)),    # (1/2, 1]   -> [0, 3/4)
    ]
    return PMMap(UNIT, pieces, branches)


@pytest.fixture
def table_tent():
    """Tent map with tabulated branches instead of exact affine ones."""
    pieces = [
        Piece(1, F(0), F(1, 2)),
        Piece(2, F(1, 2), F(1), left_closed=False),
    ]
    branches = [
        TableBranch((0.0, 0.25, 0.5), (0.0, 0.5, 1.0)),
        TableBranch((0.5, 0.75, 1.0), (1.0, 0.5, 0.0)),
    ]
    return PMMap(UNIT, pieces, branches)
