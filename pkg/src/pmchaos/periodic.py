"""Periodic points constructed from cyclically admissible words."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .intervals import Interval
from .map_model import AffineBranch, PMMap, BISECT_TOL, ToleranceError
from .symbolic import (Cylinder, cylinder, enumerate_cylinders,
                       transition_relation, ENUMERATION_CAP)
from .graph import CoveringGraph, IrreducibleComponent


@dataclass(frozen=True)
class PeriodicPoint:
    point: object
    period: int              # word length; f^period fixes the point
    prime_period: Optional[int]
    word: tuple
    residual: object         # |f^period(x) - x|, exactly 0 for affine maps


@dataclass(frozen=True)
class FixedIntervalCertificate:
    """Slope-one degeneracy: the whole cylinder is fixed by f^period."""

    word: tuple
    period: int
    interval: Interval

    def midpoint(self):
        return (self.interval.left + self.interval.right) / 2


def _check_cyclic(pmmap: PMMap, word: tuple, include_touching: bool) -> None:
    rel = transition_relation(pmmap, include_touching)
    cyc = word + (word[0],)
    for a, b in zip(cyc, cyc[1:]):
        if b not in rel[a]:
            raise ValueError(f"word {word} is not cyclically admissible "
                             f"(no transition {a} -> {b})")


def periodic_point_from_word(
        pmmap: PMMap, word: Sequence[int],
        include_touching: bool = False,
        tol: float = BISECT_TOL,
) -> Union[PeriodicPoint, FixedIntervalCertificate, None]:
    """Solve f^p(x) = x inside the cylinder of a cyclically admissible word.

    Affine maps are solved exactly. A composed slope of exactly 1 with zero
    shift means every point of the cylinder is periodic; that case returns a
    FixedIntervalCertificate instead of a single point. None means the word
    is admissible but carries no periodic point.
    """
    word = tuple(word)
    if not word:
        raise ValueError("empty word")
    _check_cyclic(pmmap, word, include_touching)
    cyl = cylinder(pmmap, word)
    if cyl.is_empty:
        return None
    if pmmap.is_affine():
        slope, shift = Fraction(1), Fraction(0)
        for k in word:
            b = pmmap.branch_for(k)
            slope, shift = b.slope * slope, b.slope * shift + b.intercept
        if slope == 1:
            if shift == 0:
                return FixedIntervalCertificate(word, len(word), cyl.interval)
            return None
        x = shift / (1 - slope)
        if not cyl.interval.contains(x):
            return None
        return PeriodicPoint(x, len(word), _prime_period(pmmap, x, len(word)),
                             word, Fraction(0))
    return _bisect_periodic(pmmap, word, cyl, tol)


def _prime_period(pmmap: PMMap, x, period: int) -> Optional[int]:
    for d in range(1, period + 1):
        if period % d:
            continue
        cur = x
        for _ in range(d):
            cur = pmmap.eval(cur)
        if cur == x:
            return d
    return None


def _bisect_periodic(pmmap: PMMap, word: tuple, cyl: Cylinder,
                     tol: float) -> Optional[PeriodicPoint]:
    p = len(word)

    def h(x: float) -> float:
        cur = x
        for _ in range(p):
            cur = pmmap.eval(cur)
        return cur - x

    lo = float(cyl.interval.left)
    hi = float(cyl.interval.right)
    # nudge off open endpoints so evaluation stays inside the cylinder
    pad = max((hi - lo) * 1e-9, tol)
    if not cyl.interval.left_closed:
        lo += pad
    if not cyl.interval.right_closed:
        hi -= pad
    if lo > hi:
        return None
    try:
        flo, fhi = h(lo), h(hi)
    except Exception:
        return None
    if flo == 0.0:
        root = lo
    elif fhi == 0.0:
        root = hi
    elif flo * fhi > 0:
        return None
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = h(mid)
            if fm == 0.0 or hi - lo <= tol:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        root = 0.5 * (lo + hi)
    residual = abs(h(root))
    if residual > max(tol * 100, 1e-9):
        raise ToleranceError(
            f"periodic solve for word {word} stuck at residual {residual}")
    return PeriodicPoint(root, p, None, word, residual)


# ----------------------------------------------------------------------
# density audit

@dataclass(frozen=True)
class AuditEntry:
    word: tuple
    point: object
    period: int
    residual: object
    degenerate: bool


@dataclass(frozen=True)
class AuditReport:
    depth: int
    total_cylinders: int
    covered: int
    entries: tuple

    @property
    def coverage(self) -> float:
        if self.total_cylinders == 0:
            return 0.0
        return self.covered / self.total_cylinders


def _closures(graph: CoveringGraph, word: tuple, members: set,
              max_extension: int):
    """Cyclic completions of word through internal edges, shortest first."""
    start, goal = word[-1], word[0]
    queue = deque([(start, ())])
    while queue:
        node, tail = queue.popleft()
        if goal in graph.successors(node):
            yield word + tail
        if len(tail) >= max_extension:
            continue
        for succ in graph.successors(node):
            if succ in members:
                queue.append((succ, tail + (succ,)))


def dense_periodic_audit(pmmap: PMMap, graph: CoveringGraph,
                         component: IrreducibleComponent, depth: int,
                         cap: int = ENUMERATION_CAP) -> AuditReport:
    """Close every depth-d component word into a cycle and solve it.

    Coverage is the fraction of nonempty cylinders receiving a periodic
    point (or a degenerate fixed-interval certificate) inside them.
    """
    if not component.is_basic:
        raise ValueError("density audit requires a basic component")
    members = set(component.nodes)
    cyls = [c for c in enumerate_cylinders(pmmap, depth,
                                           letters=sorted(members), cap=cap)
            if not c.is_empty]
    entries = []
    covered = 0
    for cyl_ in cyls:
        word = cyl_.word
        entry = None
        # a closure can solve to a point on the cylinder's excluded
        # boundary; longer closures through the component then catch a
        # genuine interior point
        for attempt, closure in enumerate(
                _closures(graph, word, members, len(members) + 2)):
            if attempt >= 64:
                break
            result = periodic_point_from_word(pmmap, closure)
            if (isinstance(result, PeriodicPoint)
                    and cyl_.interval.contains(result.point)):
                entry = AuditEntry(word, result.point, result.period,
                                   result.residual, False)
                break
            if isinstance(result, FixedIntervalCertificate):
                entry = AuditEntry(word, result.midpoint(), result.period,
                                   0, True)
                break
        if entry is None:
            entry = AuditEntry(word, None, 0, None, False)
        else:
            covered += 1
        entries.append(entry)
    return AuditReport(depth, len(cyls), covered, tuple(entries))


def audit_to_csv(report: AuditReport) -> str:
    lines = ["word;point;period;residual"]
    for e in report.entries:
        word = ",".join(str(k) for k in e.word)
        point = "" if e.point is None else str(e.point)
        residual = "" if e.residual is None else str(e.residual)
        lines.append(f"{word};{point};{e.period};{residual}")
    return "\n".join(lines) + "\n"
