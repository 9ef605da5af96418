"""Symbolic dynamics: itineraries, cylinders, Markov and generator checks.

Cylinder sets are computed exactly by pulling piece intervals back through
branch inverses, closure flags included. Word enumeration runs on the
transition relation; by default a transition i -> j requires the interiors
of f(J_i) and J_j to overlap, so single-point touching at piece boundaries
(which only involves critical points) does not create transitions. Pass
include_touching=True for the closure-intersection relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .intervals import EMPTY, Interval
from .map_model import PMMap, Point, TableBranch

ENUMERATION_CAP = 10 ** 6
STALL_WINDOW = 3
MEMBERSHIP_TOL = 1e-9


class EnumerationLimitError(RuntimeError):
    """Cylinder/word enumeration exceeded the configured cap."""


def itinerary(pmmap: PMMap, x: Point, depth: int) -> list[int]:
    """Piece indices of x, f(x), ..., f^(depth-1)(x)."""
    out = []
    cur = x
    for k in range(depth):
        out.append(pmmap.piece_of(cur).index)
        if k + 1 < depth:
            cur = pmmap.eval(cur)
    return out


@dataclass(frozen=True)
class Cylinder:
    word: tuple
    interval: Interval

    @property
    def is_empty(self) -> bool:
        return self.interval.is_empty

    def diameter(self):
        return self.interval.diameter()


def cylinder(pmmap: PMMap, word: Sequence[int]) -> Cylinder:
    """Exact set of points whose itinerary starts with the given word.

    The result is an interval with closure flags; it can be a single point
    when the word is realized only on a piece boundary, and empty when the
    word is not realized at all.
    """
    word = tuple(word)
    if not word:
        raise ValueError("cylinder word must be nonempty")
    for k in word:
        if not 1 <= k <= pmmap.n_pieces:
            raise ValueError(f"letter {k} outside 1..{pmmap.n_pieces}")
    iv = pmmap.piece_by_index(word[-1]).interval
    for k in reversed(word[:-1]):
        if iv.is_empty:
            break
        iv = pmmap.branch_for(k).preimage_of(iv).intersect(
            pmmap.piece_by_index(k).interval)
    return Cylinder(word, iv if not iv.is_empty else EMPTY)


# ----------------------------------------------------------------------
# Markov condition

@dataclass(frozen=True)
class MarkovWitness:
    point: Point        # piece endpoint where the one-sided limit is taken
    side: str           # "left" or "right": side of the piece
    limit: Point        # offending limit value, not in C_0

    def __str__(self) -> str:
        return f"limit {self.limit} at {self.side} endpoint {self.point}"


@dataclass(frozen=True)
class MarkovResult:
    passed: bool
    witnesses: tuple


def markov_check(pmmap: PMMap, tol: float = MEMBERSHIP_TOL) -> MarkovResult:
    """Do all one-sided limits of f at piece endpoints land on piece endpoints?

    For affine branches the endpoint values/limits are exact rationals and
    membership in C_0 is exact; table-branch values are floats and membership
    is checked within tol.
    """
    c0 = pmmap.critical_points(0).points
    witnesses = []
    for piece, branch in zip(pmmap.pieces, pmmap.branches):
        lo, hi = pmmap.one_sided_limits(piece)
        for side, value in (("left", lo), ("right", hi)):
            if isinstance(value, Fraction):
                ok = value in c0
            else:
                ok = any(abs(value - float(c)) <= tol for c in c0)
            if not ok:
                point = piece.left if side == "left" else piece.right
                witnesses.append(MarkovWitness(point, side, value))
    return MarkovResult(not witnesses, tuple(witnesses))


# ----------------------------------------------------------------------
# transition relation and word enumeration

def transition_relation(pmmap: PMMap,
                        include_touching: bool = False) -> dict[int, tuple]:
    """Successors of each piece index under the admissibility relation."""
    out = {}
    for piece in pmmap.pieces:
        img = pmmap.branch_image(piece.index)
        succ = []
        for q in pmmap.pieces:
            if include_touching:
                hit = img.intersects(q.interval)
            else:
                hit = img.interior_intersects(q.interval)
            if hit:
                succ.append(q.index)
        out[piece.index] = tuple(succ)
    return out


def admissible_words(pmmap: PMMap, letters: Sequence[int], depth: int,
                     include_touching: bool = False,
                     cap: int = ENUMERATION_CAP) -> list[tuple]:
    """All words over the letter subset admissible for the transition relation.

    Admissibility is pairwise: consecutive letters must be related. The
    result is sorted lexicographically.
    """
    letters = sorted(set(letters))
    for k in letters:
        if not 1 <= k <= pmmap.n_pieces:
            raise ValueError(f"letter {k} outside 1..{pmmap.n_pieces}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rel = transition_relation(pmmap, include_touching)
    allowed = {k: tuple(j for j in rel[k] if j in set(letters)) for k in letters}
    words: list[tuple] = []
    stack = [(k,) for k in reversed(letters)]
    while stack:
        w = stack.pop()
        if len(w) == depth:
            words.append(w)
            if len(words) > cap:
                raise EnumerationLimitError(
                    f"more than {cap} admissible words at depth {depth}")
            continue
        for j in reversed(allowed[w[-1]]):
            stack.append(w + (j,))
    return sorted(words)


def count_admissible_words(pmmap: PMMap, letters: Sequence[int], depth: int,
                           include_touching: bool = False) -> int:
    """Number of admissible words, via exact integer matrix powers."""
    letters = sorted(set(letters))
    rel = transition_relation(pmmap, include_touching)
    idx = {k: i for i, k in enumerate(letters)}
    n = len(letters)
    counts = [1] * n       # words of length 1 ending at each letter
    for _ in range(depth - 1):
        nxt = [0] * n
        for k in letters:
            for j in rel[k]:
                if j in idx:
                    nxt[idx[j]] += counts[idx[k]]
        counts = nxt
    return sum(counts)


# ----------------------------------------------------------------------
# cylinder enumeration and the generator diagnostic

def enumerate_cylinders(pmmap: PMMap, depth: int,
                        letters: Optional[Sequence[int]] = None,
                        include_touching: bool = False,
                        cap: int = ENUMERATION_CAP) -> list[Cylinder]:
    """Nonempty cylinders of the given depth, in word order.

    Words are grown with the transition relation and pruned by the exact
    image interval, so only realized words survive.
    """
    if letters is None:
        letters = [p.index for p in pmmap.pieces]
    letters = sorted(set(letters))
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out: list[Cylinder] = []
    # node: (word, image interval T = f^len(word) of the cylinder set)
    stack = []
    for k in reversed(letters):
        piece = pmmap.piece_by_index(k)
        stack.append(((k,), pmmap.branch_for(k).image_of(piece.interval)))
    budget = cap
    while stack:
        word, img = stack.pop()
        if len(word) == depth:
            out.append(cylinder(pmmap, word))
            budget -= 1
            if budget < 0:
                raise EnumerationLimitError(
                    f"more than {cap} cylinders at depth {depth}")
            continue
        for j in reversed(letters):
            piece = pmmap.piece_by_index(j)
            hit = img.intersect(piece.interval)
            if hit.is_empty:
                continue
            if not include_touching and hit.left == hit.right:
                continue
            stack.append((word + (j,), pmmap.branch_for(j).image_of(hit)))
    return out


@dataclass(frozen=True)
class GeneratorDiagnostic:
    depths: tuple
    max_diameters: tuple
    cylinder_counts: tuple
    verdict: str                    # "shrinking" or "stalled"
    first_stall_depth: Optional[int]
    stall_window: int

    @property
    def stalled_diameter(self):
        if self.verdict != "stalled":
            return None
        return self.max_diameters[-1]


def generator_diagnostic(pmmap: PMMap, depth: int,
                         stall_window: int = STALL_WINDOW,
                         cap: int = ENUMERATION_CAP) -> GeneratorDiagnostic:
    """Finite-depth proxy for the generator property.

    Tracks the maximum nonempty-cylinder diameter per depth. The sequence is
    nonincreasing; the verdict is "stalled" once it fails to strictly
    decrease for stall_window consecutive depths, else "shrinking".
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    maxima = []
    counts = []
    for d in range(1, depth + 1):
        cyls = enumerate_cylinders(pmmap, d, cap=cap)
        live = [c for c in cyls if not c.is_empty]
        counts.append(len(live))
        maxima.append(max((c.diameter() for c in live), default=0))
    first_stall = None
    run = 0
    for i in range(1, len(maxima)):
        if maxima[i] >= maxima[i - 1]:
            run += 1
            if run >= stall_window:
                first_stall = i - run + 2   # depth index of the first non-decrease
                break
        else:
            run = 0
    verdict = "stalled" if first_stall is not None else "shrinking"
    return GeneratorDiagnostic(tuple(range(1, depth + 1)), tuple(maxima),
                               tuple(counts), verdict, first_stall, stall_window)


def cylinders_to_csv(cylinders: Sequence[Cylinder]) -> str:
    """Rows word;left;right;diameter (empty cylinders keep empty bounds)."""
    lines = ["word;left;right;diameter"]
    for c in cylinders:
        word = ",".join(str(k) for k in c.word)
        if c.is_empty:
            lines.append(f"{word};;;0")
        else:
            iv = c.interval
            lines.append(f"{word};{iv.left};{iv.right};{c.diameter()}")
    return "\n".join(lines) + "\n"
