"""Piecewise monotonic interval maps with exact rational arithmetic.

A map is a finite partition of an interval I into pieces J_1..J_N (half-open
conventions carried by closure flags) together with one strictly monotone
continuous branch per piece. Affine branches with rational coefficients are
evaluated exactly with Fraction; table branches run in floating point.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .intervals import Interval, Number

BISECT_TOL = 1e-12
PERIOD_CAP = 10 ** 6

Point = Union[Fraction, float]


class DomainError(ValueError):
    """Raised when a point is evaluated outside the map's domain."""


class ToleranceError(ArithmeticError):
    """Raised when a floating-point solve cannot reach the tolerance."""


@dataclass(frozen=True)
class PartitionFinding:
    kind: str       # "gap" | "overlap" | "degenerate" | "image" | "branch"
    where: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {self.detail}"


class PartitionError(ValueError):
    """Partition or branch validation failure, with every finding listed."""

    def __init__(self, findings: Sequence[PartitionFinding]):
        self.findings = list(findings)
        lines = "; ".join(str(f) for f in self.findings)
        super().__init__(f"invalid map specification: {lines}")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational 'p/q' string: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class Piece:
    index: int      # 1-based, stable across the map's lifetime
    left: Number
    right: Number
    left_closed: bool = True
    right_closed: bool = True

    @property
    def interval(self) -> Interval:
        return Interval(self.left, self.right, self.left_closed, self.right_closed)

    def contains(self, x: Number) -> bool:
        return self.interval.contains(x)


@dataclass(frozen=True)
class AffineBranch:
    """x -> slope * x + intercept with nonzero rational slope."""

    slope: Fraction
    intercept: Fraction
    kind: str = field(default="affine", init=False)

    @property
    def increasing(self) -> bool:
        return self.slope > 0

    def value(self, x: Point) -> Point:
        if isinstance(x, Fraction):
            return self.slope * x + self.intercept
        return float(self.slope) * x + float(self.intercept)

    def solve(self, y: Point) -> Point:
        if isinstance(y, Fraction):
            return (y - self.intercept) / self.slope
        return (y - float(self.intercept)) / float(self.slope)

    def image_of(self, iv: Interval) -> Interval:
        a = self.value(iv.left)
        b = self.value(iv.right)
        if self.increasing:
            return Interval(a, b, iv.left_closed, iv.right_closed)
        return Interval(b, a, iv.right_closed, iv.left_closed)

    def preimage_of(self, iv: Interval) -> Interval:
        a = self.solve(iv.left)
        b = self.solve(iv.right)
        if self.increasing:
            return Interval(a, b, iv.left_closed, iv.right_closed)
        return Interval(b, a, iv.right_closed, iv.left_closed)


@dataclass(frozen=True)
class TableBranch:
    """Strictly monotone branch given by a sample grid with linear interpolation."""

    xs: tuple
    ys: tuple
    interpolation: str = "linear"
    kind: str = field(default="table", init=False)

    def __post_init__(self):
        if self.interpolation != "linear":
            raise ValueError(f"unsupported interpolation rule: {self.interpolation!r}")
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValueError("table branch needs matching xs/ys with >= 2 samples")
        for u, v in zip(self.xs, self.xs[1:]):
            if not u < v:
                raise ValueError("table branch xs must be strictly increasing")
        inc = self.ys[1] > self.ys[0]
        for u, v in zip(self.ys, self.ys[1:]):
            if (v > u) != inc or v == u:
                raise ValueError("table branch ys must be strictly monotone")

    @property
    def increasing(self) -> bool:
        return self.ys[-1] > self.ys[0]

    def value(self, x: Point) -> float:
        xf = float(x)
        xs = self.xs
        i = bisect.bisect_right(xs, xf) - 1
        i = min(max(i, 0), len(xs) - 2)
        x0, x1 = float(xs[i]), float(xs[i + 1])
        y0, y1 = float(self.ys[i]), float(self.ys[i + 1])
        return y0 + (y1 - y0) * (xf - x0) / (x1 - x0)

    def solve(self, y: Point, tol: float = BISECT_TOL) -> float:
        """Preimage of y by bisection on the interpolant."""
        yf = float(y)
        lo, hi = float(self.xs[0]), float(self.xs[-1])
        flo, fhi = self.value(lo), self.value(hi)
        a, b = (flo, fhi) if flo <= fhi else (fhi, flo)
        if not (a - tol <= yf <= b + tol):
            raise ToleranceError(f"value {yf} outside branch range [{a}, {b}]")
        yf = min(max(yf, a), b)
        inc = self.increasing
        for _ in range(200):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if (self.value(mid) < yf) == inc:
                lo = mid
            else:
                hi = mid
        else:
            raise ToleranceError("bisection failed to reach tolerance")
        return 0.5 * (lo + hi)

    def image_of(self, iv: Interval) -> Interval:
        a = self.value(iv.left)
        b = self.value(iv.right)
        if self.increasing:
            return Interval(a, b, iv.left_closed, iv.right_closed)
        return Interval(b, a, iv.right_closed, iv.left_closed)

    def preimage_of(self, iv: Interval) -> Interval:
        a = self.solve(iv.left)
        b = self.solve(iv.right)
        if self.increasing:
            return Interval(a, b, iv.left_closed, iv.right_closed)
        return Interval(b, a, iv.right_closed, iv.left_closed)


Branch = Union[AffineBranch, TableBranch]


@dataclass(frozen=True)
class CriticalSet:
    depth: int
    points: tuple

    def __contains__(self, x) -> bool:
        return x in self.points


class PMMap:
    """A validated piecewise monotonic map of an interval into itself."""

    def __init__(self, domain: Interval, pieces: Sequence[Piece],
                 branches: Sequence[Branch]):
        self.domain = domain
        self.pieces = tuple(pieces)
        self.branches = tuple(branches)
        findings = self._validate()
        if findings:
            raise PartitionError(findings)
        # fast float path for orbit-heavy callers
        self._f_rights = [float(p.right) for p in self.pieces]
        self._f_right_closed = [p.right_closed for p in self.pieces]
        self._f_affine = [
            (float(b.slope), float(b.intercept)) if isinstance(b, AffineBranch) else None
            for b in self.branches
        ]

    # ------------------------------------------------------------------
    # validation

    def _validate(self) -> list[PartitionFinding]:
        findings: list[PartitionFinding] = []
        if not self.pieces:
            return [PartitionFinding("branch", "partition", "no pieces given")]
        if len(self.pieces) != len(self.branches):
            findings.append(PartitionFinding(
                "branch", "partition",
                f"{len(self.pieces)} pieces vs {len(self.branches)} branches"))
        if self.domain.is_empty or self.domain.left >= self.domain.right:
            findings.append(PartitionFinding("degenerate", "domain",
                                             f"domain {self.domain} is degenerate"))
        ordered = sorted(self.pieces, key=lambda p: (p.left, not p.left_closed))
        if [p.index for p in ordered] != list(range(1, len(ordered) + 1)):
            findings.append(PartitionFinding(
                "branch", "partition",
                "piece indices must be 1..N in spatial order"))
        for p in ordered:
            if p.left >= p.right:
                findings.append(PartitionFinding(
                    "degenerate", f"piece {p.index}", f"{p.interval} is degenerate"))
        first, last = ordered[0], ordered[-1]
        if first.left != self.domain.left or not first.left_closed:
            findings.append(PartitionFinding(
                "gap", str(self.domain.left),
                f"domain left endpoint not covered by piece {first.index}"))
        if last.right != self.domain.right or not last.right_closed:
            findings.append(PartitionFinding(
                "gap", str(self.domain.right),
                f"domain right endpoint not covered by piece {last.index}"))
        for p, q in zip(ordered, ordered[1:]):
            if p.right < q.left:
                findings.append(PartitionFinding(
                    "gap", f"({p.right}, {q.left})",
                    f"between pieces {p.index} and {q.index}"))
            elif p.right > q.left:
                findings.append(PartitionFinding(
                    "overlap", f"({q.left}, {p.right})",
                    f"pieces {p.index} and {q.index} overlap"))
            else:
                both = p.right_closed and q.left_closed
                neither = not p.right_closed and not q.left_closed
                if both:
                    findings.append(PartitionFinding(
                        "overlap", str(p.right),
                        f"point in both pieces {p.index} and {q.index}"))
                if neither:
                    findings.append(PartitionFinding(
                        "gap", str(p.right),
                        f"point in neither piece {p.index} nor {q.index}"))
        for piece, branch in zip(self.pieces, self.branches):
            if isinstance(branch, AffineBranch):
                if branch.slope == 0:
                    findings.append(PartitionFinding(
                        "branch", f"piece {piece.index}", "affine slope is zero"))
                    continue
            else:
                dx0 = abs(float(branch.xs[0]) - float(piece.left))
                dx1 = abs(float(branch.xs[-1]) - float(piece.right))
                if dx0 > BISECT_TOL or dx1 > BISECT_TOL:
                    findings.append(PartitionFinding(
                        "branch", f"piece {piece.index}",
                        "table grid does not span the piece"))
                    continue
            img = branch.image_of(piece.interval)
            lo, hi = self.domain.left, self.domain.right
            if isinstance(branch, TableBranch):
                lo, hi = float(lo) - BISECT_TOL, float(hi) + BISECT_TOL
            if img.left < lo or img.right > hi:
                findings.append(PartitionFinding(
                    "image", f"piece {piece.index}",
                    f"branch image {img} leaves the domain {self.domain}"))
        return findings

    # ------------------------------------------------------------------
    # evaluation

    @property
    def n_pieces(self) -> int:
        return len(self.pieces)

    def size(self) -> Number:
        return self.domain.right - self.domain.left

    def piece_of(self, x: Point) -> Piece:
        for p in self.pieces:
            if p.contains(x):
                return p
        raise DomainError(f"{x} is outside the domain {self.domain}")

    def branch_for(self, index: int) -> Branch:
        return self.branches[index - 1]

    def piece_by_index(self, index: int) -> Piece:
        return self.pieces[index - 1]

    def eval(self, x: Point) -> Point:
        """f(x), exact when x is a Fraction and the branch is affine."""
        if isinstance(x, Fraction):
            p = self.piece_of(x)
            return self.branches[p.index - 1].value(x)
        return self._eval_float(float(x))

    def _eval_float(self, x: float) -> float:
        i = bisect.bisect_left(self._f_rights, x)
        n = len(self.pieces)
        if i >= n:
            i = n - 1
        # half-open bookkeeping: x equal to a right endpoint belongs to the
        # earlier piece only when that endpoint is closed
        if x == self._f_rights[i] and not self._f_right_closed[i] and i + 1 < n:
            i += 1
        p = self.pieces[i]
        if not (float(p.left) <= x <= float(p.right)):
            raise DomainError(f"{x} is outside the domain {self.domain}")
        ab = self._f_affine[i]
        if ab is not None:
            return ab[0] * x + ab[1]
        return self.branches[i].value(x)

    def iterate(self, x: Point, n: int) -> list:
        """Orbit segment [x, f(x), ..., f^n(x)] of length n + 1."""
        out = [x]
        cur = x
        for _ in range(n):
            cur = self.eval(cur)
            out.append(cur)
        return out

    # ------------------------------------------------------------------
    # critical points

    def critical_points(self, depth: int) -> CriticalSet:
        """C_depth: points whose orbit reaches a piece endpoint within depth steps."""
        base = set()
        for p in self.pieces:
            base.add(p.left)
            base.add(p.right)
        known = set(base)
        frontier = set(base)
        for _ in range(depth):
            nxt = set()
            for t in frontier:
                for x in self._point_preimages(t):
                    if x not in known:
                        nxt.add(x)
            known |= nxt
            frontier = nxt
            if not frontier:
                break
        return CriticalSet(depth, tuple(sorted(known)))

    def _point_preimages(self, t) -> list:
        out = []
        for piece, branch in zip(self.pieces, self.branches):
            if isinstance(branch, AffineBranch):
                x = branch.solve(Fraction(t) if not isinstance(t, Fraction) else t)
                if piece.contains(x):
                    out.append(x)
            else:
                try:
                    x = branch.solve(float(t))
                except ToleranceError:
                    continue
                if piece.contains(x) or (
                        float(piece.left) - BISECT_TOL <= x <= float(piece.right) + BISECT_TOL):
                    out.append(x)
        return out

    # ------------------------------------------------------------------
    # eventual periodicity

    def detect_eventual_period(self, x: Point,
                               cap: int = PERIOD_CAP) -> Optional[tuple[int, int]]:
        """(preperiod m, period p) with f^(m+p)(x) = f^m(x), minimal in both.

        Returns None when no repeat shows up within cap steps; that is a
        normal outcome, not an error.
        """
        seen = {x: 0}
        cur = x
        for k in range(1, cap + 1):
            cur = self.eval(cur)
            if cur in seen:
                m = seen[cur]
                return m, k - m
            seen[cur] = k
        return None

    # ------------------------------------------------------------------

    def one_sided_limits(self, piece: Piece) -> tuple[Point, Point]:
        """Branch limits at the piece's endpoints (values when attained)."""
        branch = self.branches[piece.index - 1]
        return branch.value(piece.left), branch.value(piece.right)

    def branch_image(self, index: int) -> Interval:
        piece = self.pieces[index - 1]
        return self.branches[index - 1].image_of(piece.interval)

    def is_affine(self) -> bool:
        return all(isinstance(b, AffineBranch) for b in self.branches)

    def __repr__(self) -> str:
        return f"PMMap({self.n_pieces} pieces on {self.domain})"
