"""Built-in example maps.

tent_map: the full tent map, a Markov generator map with positive entropy.
period_three_map: a three-branch map with unit-slope branches whose third
iterate is the identity on piece interiors. It satisfies the Markov
condition but has no generator, and it carries an infinite antichain of
pairwise incomparable lower distributional functions, exhibited by the
pair family below.
"""

from __future__ import annotations

from fractions import Fraction

from .intervals import Interval
from .map_model import AffineBranch, PMMap, Piece


def tent_map() -> PMMap:
    """x -> 2x on [0, 1/2], x -> 2 - 2x on (1/2, 1]."""
    domain = Interval(Fraction(0), Fraction(1))
    pieces = [
        Piece(1, Fraction(0), Fraction(1, 2), True, True),
        Piece(2, Fraction(1, 2), Fraction(1), False, True),
    ]
    branches = [
        AffineBranch(Fraction(2), Fraction(0)),
        AffineBranch(Fraction(-2), Fraction(2)),
    ]
    return PMMap(domain, pieces, branches)


def period_three_map() -> PMMap:
    """Three pieces cycled by unit-slope branches; f^3 = id on interiors.

    J_1 = [0, 1/3] -> 2/3 - x, J_2 = (1/3, 2/3] -> 4/3 - x,
    J_3 = (2/3, 1] -> x - 2/3. The interval boundary points 1/3 and 2/3
    are fixed points of f.
    """
    third = Fraction(1, 3)
    domain = Interval(Fraction(0), Fraction(1))
    pieces = [
        Piece(1, Fraction(0), third, True, True),
        Piece(2, third, 2 * third, False, True),
        Piece(3, 2 * third, Fraction(1), False, True),
    ]
    branches = [
        AffineBranch(Fraction(-1), 2 * third),
        AffineBranch(Fraction(-1), 4 * third),
        AffineBranch(Fraction(1), -2 * third),
    ]
    return PMMap(domain, pieces, branches)


def antichain_pair(n: int) -> tuple[Fraction, Fraction]:
    """The n-th pair (x_n, y_n) of the period_three_map antichain family.

    x_n = (4n - 1) / 18n and y_n = f(x_n) = (8n + 1) / 18n. The three orbit
    distances are a_n = (2n + 1) / 9n, b_n = (4n - 1) / 9n and 2/3, so the
    lower distributional function of the pair steps through 0, 1/3, 2/3, 1
    at those distances. For n < m the functions of the n-th and m-th pair
    cross and are incomparable.
    """
    if n < 1:
        raise ValueError("pair index must be >= 1")
    return Fraction(4 * n - 1, 18 * n), Fraction(8 * n + 1, 18 * n)


def antichain_family(count: int) -> list[tuple[Fraction, Fraction]]:
    """Pairs (x_n, y_n) for n = 1..count."""
    return [antichain_pair(n) for n in range(1, count + 1)]


def antichain_breakpoints(n: int) -> tuple[Fraction, Fraction]:
    """(a_n, b_n): the first two orbit distances of the n-th pair."""
    return Fraction(2 * n + 1, 9 * n), Fraction(4 * n - 1, 9 * n)
