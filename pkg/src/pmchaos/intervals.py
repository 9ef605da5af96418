"""Intervals with explicit endpoint closure flags.

Everything downstream (pieces, cylinders, branch images) is an interval of
this kind, so closure bookkeeping lives in one place. Endpoints may be
Fraction or float; comparisons between the two are exact in Python.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float, int]


@dataclass(frozen=True)
class Interval:
    left: Number
    right: Number
    left_closed: bool = True
    right_closed: bool = True

    @property
    def is_empty(self) -> bool:
        if self.left > self.right:
            return True
        if self.left == self.right:
            return not (self.left_closed and self.right_closed)
        return False

    @property
    def is_point(self) -> bool:
        return self.left == self.right and self.left_closed and self.right_closed

    def diameter(self) -> Number:
        if self.is_empty:
            return 0
        return self.right - self.left

    def contains(self, x: Number) -> bool:
        if self.is_empty:
            return False
        if x < self.left or x > self.right:
            return False
        if x == self.left and not self.left_closed:
            return False
        if x == self.right and not self.right_closed:
            return False
        return True

    def interior(self) -> "Interval":
        return Interval(self.left, self.right, False, False)

    def intersect(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        if self.left > other.left:
            left, left_closed = self.left, self.left_closed
        elif self.left < other.left:
            left, left_closed = other.left, other.left_closed
        else:
            left, left_closed = self.left, self.left_closed and other.left_closed
        if self.right < other.right:
            right, right_closed = self.right, self.right_closed
        elif self.right > other.right:
            right, right_closed = other.right, other.right_closed
        else:
            right, right_closed = self.right, self.right_closed and other.right_closed
        out = Interval(left, right, left_closed, right_closed)
        return EMPTY if out.is_empty else out

    def intersects(self, other: "Interval") -> bool:
        return not self.intersect(other).is_empty

    def interior_intersects(self, other: "Interval") -> bool:
        """True when the open cores overlap (endpoint touching ignored)."""
        return not self.interior().intersect(other.interior()).is_empty

    def contains_interior_of(self, other: "Interval") -> bool:
        """True when int(other) is a subset of int(self)."""
        if other.is_empty or other.left == other.right:
            return True
        if self.is_empty or self.left == self.right:
            return False
        return self.left <= other.left and other.right <= self.right

    def touches_or_overlaps(self, other: "Interval") -> bool:
        """Union with other is still a single interval."""
        if self.is_empty or other.is_empty:
            return True
        lo, hi = (self, other) if self.left <= other.left else (other, self)
        if lo.right > hi.left:
            return True
        if lo.right == hi.left:
            return lo.right_closed or hi.left_closed
        return False

    def hull(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        if self.left < other.left:
            left, left_closed = self.left, self.left_closed
        elif self.left > other.left:
            left, left_closed = other.left, other.left_closed
        else:
            left, left_closed = self.left, self.left_closed or other.left_closed
        if self.right > other.right:
            right, right_closed = self.right, self.right_closed
        elif self.right < other.right:
            right, right_closed = other.right, other.right_closed
        else:
            right, right_closed = self.right, self.right_closed or other.right_closed
        return Interval(left, right, left_closed, right_closed)

    def __str__(self) -> str:
        if self.is_empty:
            return "()"
        lb = "[" if self.left_closed else "("
        rb = "]" if self.right_closed else ")"
        return f"{lb}{self.left}, {self.right}{rb}"


EMPTY = Interval(1, 0, False, False)


def merge_intervals(intervals: list[Interval]) -> list[Interval]:
    """Union of intervals as a minimal sorted list of disjoint intervals."""
    live = sorted((iv for iv in intervals if not iv.is_empty),
                  key=lambda iv: (iv.left, not iv.left_closed))
    out: list[Interval] = []
    for iv in live:
        if out and out[-1].touches_or_overlaps(iv):
            out[-1] = out[-1].hull(iv)
        else:
            out.append(iv)
    return out


def union_covers(intervals: list[Interval], target: Interval) -> bool:
    """True when the (merged) union contains the target interval."""
    if target.is_empty:
        return True
    for iv in merge_intervals(intervals):
        if iv.left > target.left or (iv.left == target.left
                                     and target.left_closed and not iv.left_closed):
            continue
        if iv.right > target.right:
            return True
        if iv.right == target.right:
            return iv.right_closed or not target.right_closed
        # iv ends inside the target; merged intervals are disjoint, so the
        # remainder of the target sits in a gap
        return False
    return False
