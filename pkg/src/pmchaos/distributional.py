"""Distributional functions of orbit pairs and spectrum estimation.

The lower/upper distributional functions of a pair (x, y) count the time
fraction the orbits spend closer than t (strict inequality). Joint
eventually periodic orbits give exact step functions; everything else is
estimated over a trailing window of the finite horizon. Step functions are
left-continuous and compared pointwise; the spectrum is the set of minimal
elements of the sampled curves.
"""

from __future__ import annotations

import os
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .graph import (CoveringGraph, IrreducibleComponent, build_covering_graph,
                    component_cycle, irreducible_components)
from .map_model import PMMap, PERIOD_CAP, Point
from .periodic import PeriodicPoint, periodic_point_from_word
from .symbolic import (GeneratorDiagnostic, admissible_words,
                       generator_diagnostic, itinerary)


def worker_count() -> int:
    """Parallelism cap: PMCHAOS_THREADS when set, else a small default."""
    env = os.environ.get("PMCHAOS_THREADS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"PMCHAOS_THREADS must be an integer, got {env!r}") from exc
        return max(1, n)
    return min(4, os.cpu_count() or 1)


# ----------------------------------------------------------------------
# step functions

class StepFunction:
    """Left-continuous nondecreasing step function with values in [0, 1].

    levels[i] is the value on (breakpoints[i-1], breakpoints[i]]; the first
    level holds below the first breakpoint and the last one above the last.
    """

    __slots__ = ("breakpoints", "levels")

    def __init__(self, breakpoints: Sequence, levels: Sequence):
        if len(levels) != len(breakpoints) + 1:
            raise ValueError("need exactly one more level than breakpoints")
        bps, lvls = [], [levels[0]]
        for i, b in enumerate(breakpoints):
            if bps and not b > bps[-1]:
                raise ValueError("breakpoints must be strictly increasing")
            if levels[i + 1] == lvls[-1]:
                continue    # zero jump, drop the breakpoint
            bps.append(b)
            lvls.append(levels[i + 1])
        for a, b in zip(lvls, lvls[1:]):
            if b < a:
                raise ValueError("levels must be nondecreasing")
        if lvls[0] < 0 or lvls[-1] > 1:
            raise ValueError("levels must stay within [0, 1]")
        self.breakpoints = tuple(bps)
        self.levels = tuple(lvls)

    @classmethod
    def from_distances(cls, distances: Sequence) -> "StepFunction":
        """Distribution of a finite distance multiset, strict comparison."""
        if not distances:
            raise ValueError("empty distance multiset")
        counts = Counter(distances)
        total = len(distances)
        bps, lvls, cum = [], [Fraction(0)], 0
        for value in sorted(counts):
            cum += counts[value]
            bps.append(value)
            lvls.append(Fraction(cum, total))
        return cls(bps, lvls)

    @classmethod
    def indicator_above_zero(cls) -> "StepFunction":
        return cls([Fraction(0)], [Fraction(0), Fraction(1)])

    @classmethod
    def pointwise_min(cls, funcs: Sequence["StepFunction"]) -> "StepFunction":
        if not funcs:
            raise ValueError("need at least one function")
        merged = sorted({b for f in funcs for b in f.breakpoints})
        if not merged:
            return cls([], [min(f.levels[0] for f in funcs)])
        levels = [min(f.evaluate(merged[0]) for f in funcs)]
        for b in merged:
            levels.append(min(f.value_after(b) for f in funcs))
        return cls(merged, levels)

    def evaluate(self, t):
        """F(t), using the left-continuous convention at breakpoints."""
        import bisect
        return self.levels[bisect.bisect_left(self.breakpoints, t)]

    def value_after(self, t):
        """Right limit F(t+)."""
        import bisect
        return self.levels[bisect.bisect_right(self.breakpoints, t)]

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        if len(self.breakpoints) != len(other.breakpoints):
            return False
        return (all(a == b for a, b in zip(self.breakpoints, other.breakpoints))
                and all(a == b for a, b in zip(self.levels, other.levels)))

    def __hash__(self):
        return hash((tuple(map(float, self.breakpoints)),
                     tuple(map(float, self.levels))))

    def __repr__(self):
        jumps = ", ".join(f"{b}:{l}" for b, l in
                          zip(self.breakpoints, self.levels[1:]))
        return f"StepFunction({self.levels[0]}; {jumps})"


def step_function_to_csv(func: StepFunction) -> str:
    """Rows t;level with both sides of every jump."""
    lines = ["t;level"]
    if func.breakpoints:
        start = min(func.breakpoints[0], 0)
        lines.append(f"{start};{func.levels[0]}")
    else:
        lines.append(f"0;{func.levels[0]}")
    for i, b in enumerate(func.breakpoints):
        lines.append(f"{b};{func.levels[i]}")
        lines.append(f"{b};{func.levels[i + 1]}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# comparison under the pointwise partial order

@dataclass(frozen=True)
class Comparison:
    relation: str                 # "equal" | "le" | "ge" | "incomparable"
    lt_witness: Optional[object]  # t with F(t) < G(t)
    gt_witness: Optional[object]  # t with F(t) > G(t)


def _region_samples(f: StepFunction, g: StepFunction) -> list:
    merged = sorted({*f.breakpoints, *g.breakpoints})
    if not merged:
        return [0]
    samples = [merged[0] - 1]
    for a, b in zip(merged, merged[1:]):
        samples.append((a + b) / 2 if isinstance(a + b, float)
                       else Fraction(a + b, 2))
    samples.append(merged[-1] + 1)
    return samples


def compare(f: StepFunction, g: StepFunction) -> Comparison:
    """Pointwise order of two step functions with explicit witnesses.

    Both functions are constant on the open regions between merged
    breakpoints, so sampling one interior point per region decides the
    order everywhere. Witnesses are region interiors, never breakpoints.
    """
    lt = gt = None
    for t in _region_samples(f, g):
        a, b = f.value_after(t), g.value_after(t)
        if a < b and lt is None:
            lt = t
        elif a > b and gt is None:
            gt = t
        if lt is not None and gt is not None:
            return Comparison("incomparable", lt, gt)
    if lt is not None:
        return Comparison("le", lt, None)
    if gt is not None:
        return Comparison("ge", None, gt)
    return Comparison("equal", None, None)


# ----------------------------------------------------------------------
# distributional functions

@dataclass(frozen=True)
class ExactProvenance:
    preperiod: int
    period: int
    kind: str = field(default="exact", init=False)


@dataclass(frozen=True)
class EmpiricalProvenance:
    horizon: int
    window: int
    grid_size: int
    kind: str = field(default="empirical", init=False)


@dataclass(frozen=True)
class DFPair:
    lower: StepFunction
    upper: StepFunction
    provenance: Union[ExactProvenance, EmpiricalProvenance]


def xi(pmmap: PMMap, x: Point, y: Point, t, n: int) -> int:
    """Number of times 0 <= i < n with |f^i(x) - f^i(y)| < t (strict)."""
    count = 0
    u, v = x, y
    for i in range(n):
        if abs(u - v) < t:
            count += 1
        if i + 1 < n:
            u, v = pmmap.eval(u), pmmap.eval(v)
    return count


def exact_df(pmmap: PMMap, x: Point, y: Point,
             cap: int = PERIOD_CAP) -> Optional[DFPair]:
    """Exact F = F* when the joint orbit (f^i x, f^i y) is eventually periodic.

    The preperiod contributes nothing to the limit; the cycle's distance
    multiset gives the step function. Returns None when no joint repeat is
    found within cap steps.
    """
    seen = {(x, y): 0}
    orbit = [(x, y)]
    cur = (x, y)
    for k in range(1, cap + 1):
        cur = (pmmap.eval(cur[0]), pmmap.eval(cur[1]))
        if cur in seen:
            m = seen[cur]
            cycle = orbit[m:]
            distances = [abs(u - v) for u, v in cycle]
            step = StepFunction.from_distances(distances)
            return DFPair(step, step, ExactProvenance(m, k - m))
        seen[cur] = k
        orbit.append(cur)
    return None


def default_t_grid(pmmap: PMMap, size: int = 512,
                   extra: Sequence = ()) -> list:
    """Uniform grid on [0, |I|] plus any exact breakpoints supplied."""
    width = pmmap.size()
    pts = {Fraction(k) * width / size for k in range(size + 1)}
    pts.update(extra)
    return sorted(pts)


def empirical_df(pmmap: PMMap, x: Point, y: Point,
                 horizon: int = 10 ** 5,
                 window: Optional[int] = None,
                 t_grid: Optional[Sequence] = None,
                 grid_size: int = 512) -> DFPair:
    """Windowed estimate of the lower and upper distributional functions.

    For each grid t the lower value is min over n in [horizon - window,
    horizon] of xi(x, y, t, n) / n and the upper value is the max.
    """
    if window is None:
        window = max(1, horizon // 10)
    if not 1 <= window <= horizon:
        raise ValueError("need horizon >= window >= 1")
    if t_grid is None:
        t_grid = default_t_grid(pmmap, grid_size)
    grid = sorted(set(t_grid))

    u, v = x, y
    dists = np.empty(horizon)
    for i in range(horizon):
        # subtract before rounding so exact inputs give exact tie handling
        dists[i] = float(abs(u - v))
        if i + 1 < horizon:
            u, v = pmmap.eval(u), pmmap.eval(v)

    base_n = horizon - window
    head = np.sort(dists[:base_n]) if base_n else np.empty(0)
    tail = dists[base_n:]
    ns = np.arange(base_n, horizon + 1, dtype=float)
    skip = 1 if base_n == 0 else 0      # n = 0 is not a valid sample length

    lower_vals, upper_vals = [], []
    grid_f = [float(t) for t in grid]
    for tf in grid_f:
        base = int(np.searchsorted(head, tf, side="left")) if base_n else 0
        counts = np.empty(window + 1)
        counts[0] = base
        counts[1:] = base + np.cumsum(tail < tf)
        ratios = counts[skip:] / ns[skip:]
        lower_vals.append(float(ratios.min()))
        upper_vals.append(float(ratios.max()))

    prov = EmpiricalProvenance(horizon, window, len(grid))
    return DFPair(_step_from_samples(grid, lower_vals, pmmap.size()),
                  _step_from_samples(grid, upper_vals, pmmap.size()),
                  prov)


def _step_from_samples(grid: list, values: list, width) -> StepFunction:
    # A jump between consecutive samples lands on the earlier grid point,
    # so the left-continuous step reproduces every sampled value exactly.
    bps = []
    lvls = [values[0]]
    for k in range(1, len(grid)):
        if values[k] != lvls[-1]:
            bps.append(grid[k - 1])
            lvls.append(values[k])
    if lvls[-1] != 1:
        # distances never exceed the domain width, so above it F is 1
        top = width if width > grid[-1] else grid[-1]
        if bps and not top > bps[-1]:
            top = _just_above(bps[-1])
        bps.append(top)
        lvls.append(1)
    return StepFunction(bps, lvls)


def _just_above(width):
    if isinstance(width, Fraction):
        return width + Fraction(1, 10 ** 9)
    return float(width) * (1 + 1e-9)


def chaos_measure(pair: DFPair):
    """Integral of (upper - lower); zero exactly when the pair is not chaotic."""
    f, g = pair.lower, pair.upper
    merged = sorted({*f.breakpoints, *g.breakpoints})
    total = 0
    for a, b in zip(merged, merged[1:]):
        diff = g.evaluate(b) - f.evaluate(b)
        if diff:
            total += diff * (b - a)
    return total


# ----------------------------------------------------------------------
# pair diagnostics

@dataclass(frozen=True)
class WeakPairRecord:
    pair: tuple
    min_distance: object
    exact: bool
    kept: bool


def weak_pair_filter(pmmap: PMMap, pairs: Sequence[tuple], horizon: int,
                     epsilon, tail_window: Optional[int] = None,
                     exact_cap: int = 4096) -> list[WeakPairRecord]:
    """Finite-horizon surrogate for proximality (liminf distance = 0).

    A pair is kept when its minimum orbit distance over the tail window is
    strictly below epsilon. Joint eventually periodic orbits are resolved
    exactly from the cycle's distances, including exact zeros.
    """
    if tail_window is None:
        tail_window = max(1, horizon // 10)
    records = []
    for x, y in pairs:
        exact = None
        if pmmap.is_affine() and isinstance(x, Fraction) and isinstance(y, Fraction):
            exact = exact_df(pmmap, x, y, cap=min(exact_cap, horizon))
        if exact is not None:
            u, v = x, y
            for _ in range(exact.provenance.preperiod):
                u, v = pmmap.eval(u), pmmap.eval(v)
            best = None
            for _ in range(exact.provenance.period):
                d = abs(u - v)
                best = d if best is None or d < best else best
                u, v = pmmap.eval(u), pmmap.eval(v)
            records.append(WeakPairRecord((x, y), best, True, best < epsilon))
            continue
        u, v = x, y
        best = None
        for i in range(horizon):
            if i >= horizon - tail_window:
                d = abs(float(u) - float(v))
                best = d if best is None or d < best else best
            if i + 1 < horizon:
                u, v = pmmap.eval(u), pmmap.eval(v)
        records.append(WeakPairRecord((x, y), best, False, best < epsilon))
    return records


@dataclass(frozen=True)
class ProbeResult:
    verdict: str            # "consistent" | "refuted" | "inconclusive"
    reason: str
    component_x: Optional[tuple] = None
    component_y: Optional[tuple] = None
    phase_offset: Optional[int] = None
    period: Optional[int] = None


def isotectic_probe(pmmap: PMMap, x: Point, y: Point, horizon: int = 256,
                    graph: Optional[CoveringGraph] = None) -> ProbeResult:
    """Are the two orbit tails in the same component with synchronized phase?

    The phase classes come from the minimal cycle of the shared component:
    consistent means the eventual phase offset is zero, refuted means the
    tails live in different components or are permanently out of phase
    (nonzero offset reported), inconclusive means the horizon did not
    settle the question.
    """
    if graph is None:
        graph = build_covering_graph(pmmap)
    comps = irreducible_components(graph)
    comp_of = {}
    for idx, comp in enumerate(comps):
        for node in comp.nodes:
            comp_of[node] = idx

    it_x = itinerary(pmmap, x, horizon)
    it_y = itinerary(pmmap, y, horizon)

    def tail_start(letters):
        cut = 0
        for i in range(1, len(letters)):
            if comp_of[letters[i]] != comp_of[letters[i - 1]]:
                cut = i
        return cut

    sx, sy = tail_start(it_x), tail_start(it_y)
    start = max(sx, sy)
    cx, cy = comp_of[it_x[-1]], comp_of[it_y[-1]]
    if horizon - start < 4:
        return ProbeResult("inconclusive", "component membership did not settle",
                           comps[cx].nodes, comps[cy].nodes)
    if cx != cy:
        return ProbeResult("refuted", "orbit tails in different components",
                           comps[cx].nodes, comps[cy].nodes)
    comp = comps[cx]
    if not comp.has_cycle:
        return ProbeResult("inconclusive", "tail component has no cycle",
                           comp.nodes, comp.nodes)
    cycle = component_cycle(graph, comp)
    cls = {node: t for t, nodes in enumerate(cycle.sets) for node in nodes}
    if horizon - start < max(2 * cycle.period, 4):
        return ProbeResult("inconclusive", "tail too short inside component",
                           comp.nodes, comp.nodes, period=cycle.period)
    offsets = {(cls[it_y[i]] - cls[it_x[i]]) % cycle.period
               for i in range(start, horizon)}
    if len(offsets) != 1:
        return ProbeResult("inconclusive", "phase offset did not settle",
                           comp.nodes, comp.nodes, period=cycle.period)
    offset = offsets.pop()
    if offset == 0:
        return ProbeResult("consistent", "same component, synchronized phase",
                           comp.nodes, comp.nodes, 0, cycle.period)
    return ProbeResult("refuted", "permanently out of phase",
                       comp.nodes, comp.nodes, offset, cycle.period)


# ----------------------------------------------------------------------
# minimal elements

@dataclass(frozen=True)
class MinimalResult:
    kept: tuple                  # indices into the candidate list
    certificates: tuple          # (i, j, t1, t2): F_i(t1) < F_j(t1), F_j(t2) < F_i(t2)


def minimal_elements(funcs: Sequence[StepFunction]) -> MinimalResult:
    """Candidates not strictly dominated from below, duplicates collapsed.

    Equal functions keep their first representative. Every pair of kept
    functions is incomparable; the certificates list the crossing points.
    """
    n = len(funcs)
    relations = {}
    for i in range(n):
        for j in range(i + 1, n):
            relations[(i, j)] = compare(funcs[i], funcs[j])
    kept = []
    for i in range(n):
        dominated = False
        for j in range(n):
            if i == j:
                continue
            rel = relations[(min(i, j), max(i, j))]
            verdict = rel.relation if i < j else _flip(rel.relation)
            if verdict == "ge":
                dominated = True     # some j is strictly below i
                break
            if verdict == "equal" and j < i:
                dominated = True     # duplicate, keep the earlier index
                break
        if not dominated:
            kept.append(i)
    certs = []
    for a in range(len(kept)):
        for b in range(a + 1, len(kept)):
            i, j = kept[a], kept[b]
            rel = relations[(i, j)]
            if rel.relation == "incomparable":
                certs.append((i, j, rel.lt_witness, rel.gt_witness))
    return MinimalResult(tuple(kept), tuple(certs))


def _flip(relation: str) -> str:
    return {"le": "ge", "ge": "le"}.get(relation, relation)


# ----------------------------------------------------------------------
# spectrum estimation

class GeneratorStalledError(RuntimeError):
    """Raised when cylinder diameters stalled and force was not requested."""

    def __init__(self, diagnostic: GeneratorDiagnostic):
        super().__init__(
            "cylinder diameters stalled at depth "
            f"{diagnostic.first_stall_depth}; pass force=True to proceed")
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class InfimumProvenance:
    source_count: int
    kind: str = field(default="infimum", init=False)


@dataclass(frozen=True)
class SamplerConfig:
    pair_count: int = 200
    seed: int = 0
    horizon: int = 10 ** 4
    window: Optional[int] = None     # defaults to horizon // 10
    grid_size: int = 512
    exact_cap: int = 4096
    periodic_depth: int = 3

    def effective_window(self) -> int:
        return self.window if self.window is not None else max(1, self.horizon // 10)


@dataclass
class Candidate:
    id: str
    kind: str                        # "pair" | "self" | "infimum" | "cross"
    pair: Optional[tuple]
    component: Optional[tuple]
    df: DFPair
    probe: Optional[ProbeResult]


@dataclass
class SpectrumReport:
    mode: str                        # "sampled" | "explicit"
    forced: bool
    generator_verdict: str
    sampler: Optional[SamplerConfig]
    candidates: list
    minimal: tuple                   # indices into candidates
    certificates: tuple              # (i, j, t1, t2) over candidate indices
    observed_epsilon: dict           # component nodes -> max of min cycle distances
    notes: list
    weak: bool = False
    epsilon: Optional[object] = None
    weak_records: Optional[list] = None

    def minimal_ids(self) -> list:
        return [self.candidates[i].id for i in self.minimal]

    def to_json(self) -> str:
        import json
        return json.dumps(_report_payload(self), indent=2, sort_keys=True) + "\n"


def _num(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, float)):
        return value
    return str(value)


def _step_payload(func: StepFunction) -> dict:
    return {"breakpoints": [_num(b) for b in func.breakpoints],
            "levels": [_num(l) for l in func.levels]}


def _report_payload(report: SpectrumReport) -> dict:
    cands = []
    for c in report.candidates:
        prov = c.df.provenance
        entry = {
            "id": c.id,
            "kind": c.kind,
            "pair": None if c.pair is None else [_num(c.pair[0]), _num(c.pair[1])],
            "component": None if c.component is None else list(c.component),
            "provenance": {k: getattr(prov, k) for k in
                           ("kind", "preperiod", "period", "horizon",
                            "window", "grid_size", "source_count")
                           if hasattr(prov, k)},
            "lower": _step_payload(c.df.lower),
            "upper": _step_payload(c.df.upper),
        }
        if c.probe is not None:
            entry["probe"] = {"verdict": c.probe.verdict,
                              "reason": c.probe.reason,
                              "phase_offset": c.probe.phase_offset}
        cands.append(entry)
    payload = {
        "mode": report.mode,
        "forced": report.forced,
        "generator_verdict": report.generator_verdict,
        "sampler": None if report.sampler is None else {
            "pair_count": report.sampler.pair_count,
            "seed": report.sampler.seed,
            "horizon": report.sampler.horizon,
            "window": report.sampler.effective_window(),
            "grid_size": report.sampler.grid_size,
            "exact_cap": report.sampler.exact_cap,
            "periodic_depth": report.sampler.periodic_depth,
        },
        "candidates": cands,
        "minimal": report.minimal_ids(),
        "certificates": [
            {"low_id": report.candidates[i].id,
             "high_id": report.candidates[j].id,
             "t_low_below": _num(t1), "t_high_below": _num(t2)}
            for i, j, t1, t2 in report.certificates],
        "observed_epsilon": {
            ",".join(map(str, nodes)): _num(value)
            for nodes, value in sorted(report.observed_epsilon.items())},
        "notes": list(report.notes),
        "weak": report.weak,
    }
    if report.weak:
        payload["epsilon"] = _num(report.epsilon)
        payload["weak_records"] = [
            {"pair": [_num(r.pair[0]), _num(r.pair[1])],
             "min_distance": _num(r.min_distance),
             "exact": r.exact, "kept": r.kept}
            for r in (report.weak_records or [])]
    return payload


@dataclass(frozen=True)
class _PairJob:
    id: str
    kind: str
    pair: tuple
    component: Optional[tuple]


def _periodic_points(pmmap: PMMap, comp: IrreducibleComponent,
                     relation: dict, depth: int) -> list:
    """Exact periodic points from cyclically admissible words in a component."""
    points, seen = [], set()
    for d in range(1, depth + 1):
        for word in admissible_words(pmmap, comp.nodes, d):
            if word[0] not in relation.get(word[-1], ()):
                continue
            try:
                res = periodic_point_from_word(pmmap, word)
            except ValueError:
                continue
            if res is None:
                continue
            pt = res.point if isinstance(res, PeriodicPoint) else res.midpoint()
            if pt in seen:
                continue
            seen.add(pt)
            points.append((pt, word[0]))
    points.sort(key=lambda pc: pc[0])
    return points


def _unit_fraction(rng: random.Random) -> Fraction:
    # odd numerator over 2^32 stays strictly inside (0, 1)
    return Fraction(2 * rng.getrandbits(31) + 1, 2 ** 32)


def _sample_jobs(pmmap: PMMap, graph: CoveringGraph, comps: list,
                 sampler: SamplerConfig) -> list:
    """Deterministic pair list: periodic same-phase pairs, random same-piece
    pairs, and one self pair per component. All randomness is drawn here."""
    from itertools import combinations
    relation = {node: graph.successors(node) for node in graph.nodes}
    targets = [c for c in comps if c.is_basic]
    if not targets:
        targets = [c for c in comps if c.has_cycle]
    if not targets:
        return []
    rng = random.Random(sampler.seed)
    budget = max(1, sampler.pair_count // len(targets))
    jobs = []
    for ci, comp in enumerate(targets):
        cycle = component_cycle(graph, comp)
        phase = {node: t for t, nodes in enumerate(cycle.sets)
                 for node in nodes}
        pts = _periodic_points(pmmap, comp, relation, sampler.periodic_depth)
        by_class = {}
        for pt, start_node in pts:
            by_class.setdefault(phase[start_node], []).append(pt)
        periodic_pairs = []
        for cls in sorted(by_class):
            periodic_pairs.extend(combinations(by_class[cls], 2))
        periodic_pairs = periodic_pairs[:max(1, budget // 2)]
        for k, (x, y) in enumerate(periodic_pairs):
            jobs.append(_PairJob(f"per-{ci}-{k}", "pair", (x, y), comp.nodes))
        need = budget - len(periodic_pairs)
        pieces = sorted(comp.nodes)
        for k in range(max(0, need)):
            piece = pmmap.piece_by_index(pieces[k % len(pieces)])
            span = piece.right - piece.left
            r1 = _unit_fraction(rng)
            r2 = _unit_fraction(rng)
            while r2 == r1:
                r2 = _unit_fraction(rng)
            x, y = piece.left + r1 * span, piece.left + r2 * span
            jobs.append(_PairJob(f"rnd-{ci}-{k}", "pair",
                                 (min(x, y), max(x, y)), comp.nodes))
        piece = pmmap.piece_by_index(min(comp.nodes))
        mid = piece.left + Fraction(1, 2) * (piece.right - piece.left)
        jobs.append(_PairJob(f"self-{ci}", "self", (mid, mid), comp.nodes))
    return jobs


def _pair_df(pmmap: PMMap, x, y, sampler: SamplerConfig, grid) -> DFPair:
    if (pmmap.is_affine() and isinstance(x, Fraction)
            and isinstance(y, Fraction) and sampler.exact_cap > 0):
        exact = exact_df(pmmap, x, y, cap=sampler.exact_cap)
        if exact is not None:
            return exact
    return empirical_df(pmmap, x, y, sampler.horizon,
                        sampler.effective_window(), t_grid=grid)


def _evaluate_jobs(pmmap: PMMap, jobs: list, sampler: SamplerConfig) -> list:
    grid = default_t_grid(pmmap, sampler.grid_size)
    workers = worker_count()

    def run(job):
        if job.kind == "self":
            return DFPair(StepFunction.indicator_above_zero(),
                          StepFunction.indicator_above_zero(),
                          ExactProvenance(0, 1))
        return _pair_df(pmmap, job.pair[0], job.pair[1], sampler, grid)

    if workers <= 1 or len(jobs) <= 1:
        return [run(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, jobs))


def _probe_candidates(pmmap: PMMap, graph: CoveringGraph, jobs: list,
                      dfs: list, sampler: SamplerConfig, notes: list,
                      drop_refuted: bool) -> list:
    probe_horizon = min(256, max(sampler.horizon, 16))
    out = []
    for job, df in zip(jobs, dfs):
        if job.kind == "self":
            probe = ProbeResult("consistent", "identical orbits",
                                job.component, job.component, 0)
        else:
            probe = isotectic_probe(pmmap, job.pair[0], job.pair[1],
                                    probe_horizon, graph=graph)
        if drop_refuted and job.kind == "pair" and probe.verdict == "refuted":
            notes.append(f"dropped {job.id}: probe refuted ({probe.reason})")
            continue
        component = job.component if job.component is not None else probe.component_x
        out.append(Candidate(job.id, job.kind, job.pair, component, df, probe))
    return out


def _infimum_candidates(pair_cands: list) -> list:
    by_comp = {}
    for cand in pair_cands:
        if cand.kind == "pair" and cand.component is not None:
            by_comp.setdefault(cand.component, []).append(cand.df.lower)
    out = []
    for ci, (nodes, curves) in enumerate(sorted(by_comp.items())):
        g = StepFunction.pointwise_min(curves)
        out.append(Candidate(f"inf-{ci}", "infimum", None, nodes,
                             DFPair(g, g, InfimumProvenance(len(curves))), None))
    return out


def _observed_epsilon(candidates: list) -> dict:
    """Largest guaranteed separation seen per component: the max over exact
    pair curves of the smallest cycle distance."""
    observed = {}
    for cand in candidates:
        if (cand.kind == "pair" and cand.component is not None
                and isinstance(cand.df.provenance, ExactProvenance)
                and cand.df.lower.breakpoints):
            eps = cand.df.lower.breakpoints[0]
            key = tuple(cand.component)
            if eps > 0 and (key not in observed or eps > observed[key]):
                observed[key] = eps
    return observed


def spectrum_estimate(pmmap: PMMap,
                      sampler: Optional[SamplerConfig] = None,
                      pairs: Optional[Sequence[tuple]] = None,
                      force: bool = False,
                      diagnostic: Optional[GeneratorDiagnostic] = None,
                      graph: Optional[CoveringGraph] = None,
                      diagnostic_depth: int = 8) -> SpectrumReport:
    """Estimate the set of minimal lower distributional functions.

    Without explicit pairs the sampler draws same-phase pairs inside each
    basic component; when the cylinder diameters are still shrinking, the
    pointwise infimum of each component's sampled curves joins the
    candidate list. Explicit pairs suppress sampling and are reported as
    given. Raises GeneratorStalledError when diameters stalled and force
    is not set.
    """
    sampler = sampler or SamplerConfig()
    if diagnostic is None:
        diagnostic = generator_diagnostic(pmmap, diagnostic_depth)
    if diagnostic.verdict == "stalled" and not force:
        raise GeneratorStalledError(diagnostic)
    if graph is None:
        graph = build_covering_graph(pmmap)
    comps = irreducible_components(graph)
    notes = []

    if pairs is not None:
        jobs = [_PairJob(f"pair-{i}", "pair", (x, y), None)
                for i, (x, y) in enumerate(pairs)]
        mode = "explicit"
    else:
        jobs = _sample_jobs(pmmap, graph, comps, sampler)
        mode = "sampled"
        if not jobs:
            notes.append("no component with a cycle; nothing to sample")

    dfs = _evaluate_jobs(pmmap, jobs, sampler)
    pair_cands = _probe_candidates(pmmap, graph, jobs, dfs, sampler, notes,
                                   drop_refuted=(mode == "sampled"))

    inf_cands = []
    if mode == "sampled" and diagnostic.verdict == "shrinking":
        inf_cands = _infimum_candidates(pair_cands)
    elif mode == "sampled":
        notes.append("diameters stalled: infimum candidates withheld, "
                     "sampled pair curves stand on their own")

    candidates = inf_cands + pair_cands
    result = minimal_elements([c.df.lower for c in candidates])
    return SpectrumReport(mode, force, diagnostic.verdict,
                          sampler if pairs is None else None,
                          candidates, result.kept, result.certificates,
                          _observed_epsilon(candidates), notes)


def _shared_boundary_jobs(pmmap: PMMap, comps: list) -> list:
    """Candidate pairs straddling a boundary point shared by two basic
    components; only such pairs can be proximal without ever synchronizing."""
    basics = [c for c in comps if c.is_basic]
    jobs = []
    k = 0
    for ai in range(len(basics)):
        for bi in range(ai + 1, len(basics)):
            for na in basics[ai].nodes:
                for nb in basics[bi].nodes:
                    pa, pb = pmmap.piece_by_index(na), pmmap.piece_by_index(nb)
                    left, right = (pa, pb) if pa.right == pb.left else \
                                  (pb, pa) if pb.right == pa.left else (None, None)
                    if left is None:
                        continue
                    xa = left.left + Fraction(63, 64) * (left.right - left.left)
                    xb = right.left + Fraction(1, 64) * (right.right - right.left)
                    jobs.append(_PairJob(f"x-{k}", "cross", (xa, xb), None))
                    k += 1
    return jobs


def weak_spectrum_estimate(pmmap: PMMap, epsilon,
                           sampler: Optional[SamplerConfig] = None,
                           pairs: Optional[Sequence[tuple]] = None,
                           force: bool = False,
                           diagnostic: Optional[GeneratorDiagnostic] = None,
                           graph: Optional[CoveringGraph] = None,
                           diagnostic_depth: int = 8) -> SpectrumReport:
    """Spectrum restricted to pairs that come within epsilon along the tail.

    Same candidate policy as spectrum_estimate, but pairs failing the
    proximality surrogate are dropped first, and boundary-straddling pairs
    between touching basic components are added to the sample since only
    those can be proximal across components.
    """
    sampler = sampler or SamplerConfig()
    if diagnostic is None:
        diagnostic = generator_diagnostic(pmmap, diagnostic_depth)
    if diagnostic.verdict == "stalled" and not force:
        raise GeneratorStalledError(diagnostic)
    if graph is None:
        graph = build_covering_graph(pmmap)
    comps = irreducible_components(graph)
    notes = []

    if pairs is not None:
        jobs = [_PairJob(f"pair-{i}", "pair", (x, y), None)
                for i, (x, y) in enumerate(pairs)]
        mode = "explicit"
    else:
        jobs = _sample_jobs(pmmap, graph, comps, sampler)
        jobs += _shared_boundary_jobs(pmmap, comps)
        mode = "sampled"

    records = weak_pair_filter(pmmap, [j.pair for j in jobs], sampler.horizon,
                               epsilon, tail_window=sampler.effective_window(),
                               exact_cap=sampler.exact_cap)
    kept_jobs = [j for j, r in zip(jobs, records) if r.kept]
    dropped = len(jobs) - len(kept_jobs)
    if dropped:
        notes.append(f"weak filter dropped {dropped} of {len(jobs)} pairs")

    dfs = _evaluate_jobs(pmmap, kept_jobs, sampler)
    pair_cands = _probe_candidates(pmmap, graph, kept_jobs, dfs, sampler,
                                   notes, drop_refuted=False)

    inf_cands = []
    if mode == "sampled" and diagnostic.verdict == "shrinking":
        inf_cands = _infimum_candidates(pair_cands)

    candidates = inf_cands + pair_cands
    result = minimal_elements([c.df.lower for c in candidates])
    return SpectrumReport(mode, force, diagnostic.verdict,
                          sampler if pairs is None else None,
                          candidates, result.kept, result.certificates,
                          _observed_epsilon(candidates), notes, weak=True,
                          epsilon=epsilon, weak_records=records)
