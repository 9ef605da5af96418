"""Covering graph of a Markov map and its consequences.

Edge i -> j means the interior of f(J_i) contains the interior of J_j.
Strongly connected components are the irreducible pieces of the dynamics;
a component is basic when some node has two or more internal successors,
which is exactly when the subshift carries positive entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .intervals import Interval, merge_intervals, union_covers
from .map_model import PMMap
from .symbolic import markov_check

ENTROPY_TOL = 1e-10
ENTROPY_MAX_ITER = 200000


class MarkovPreconditionError(RuntimeError):
    """Operation requires the Markov condition and the map fails it."""


@dataclass(frozen=True)
class CoveringGraph:
    nodes: tuple
    edges: dict            # node -> tuple of successors, sorted

    def successors(self, i: int) -> tuple:
        return self.edges.get(i, ())

    def edge_list(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.nodes for j in self.edges[i]]

    def adjacency(self) -> np.ndarray:
        idx = {k: i for i, k in enumerate(self.nodes)}
        mat = np.zeros((len(self.nodes), len(self.nodes)))
        for i, j in self.edge_list():
            mat[idx[i], idx[j]] = 1.0
        return mat


def build_covering_graph(pmmap: PMMap) -> CoveringGraph:
    """Requires the Markov condition; raises MarkovPreconditionError otherwise."""
    result = markov_check(pmmap)
    if not result.passed:
        detail = "; ".join(str(w) for w in result.witnesses)
        raise MarkovPreconditionError(f"map is not Markov: {detail}")
    nodes = tuple(p.index for p in pmmap.pieces)
    edges = {}
    for p in pmmap.pieces:
        img = pmmap.branch_image(p.index)
        edges[p.index] = tuple(
            q.index for q in pmmap.pieces if img.contains_interior_of(q.interval))
    return CoveringGraph(nodes, edges)


# ----------------------------------------------------------------------
# strongly connected components

@dataclass(frozen=True)
class IrreducibleComponent:
    nodes: tuple
    is_basic: bool
    internal_out_degrees: dict

    @property
    def has_cycle(self) -> bool:
        return any(d > 0 for d in self.internal_out_degrees.values())


def irreducible_components(graph: CoveringGraph) -> list[IrreducibleComponent]:
    """SCCs of the covering graph, sorted by smallest node, annotated.

    Mutual reachability uses paths of length >= 1, so a singleton without a
    self-loop is returned with has_cycle False and is never basic.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = [0]

    for root in graph.nodes:
        if root in index:
            continue
        work = [(root, iter(graph.successors(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = low[succ] = counter[0]
                    counter[0] += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(graph.successors(succ))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(comp)

    out = []
    for comp in sccs:
        members = set(comp)
        degrees = {i: sum(1 for j in graph.successors(i) if j in members)
                   for i in comp}
        out.append(IrreducibleComponent(
            nodes=tuple(sorted(comp)),
            is_basic=any(d >= 2 for d in degrees.values()),
            internal_out_degrees=degrees,
        ))
    return sorted(out, key=lambda c: c.nodes[0])


# ----------------------------------------------------------------------
# f*-periodic sets

@dataclass(frozen=True)
class FStarCycle:
    sets: tuple          # tuple of sorted node tuples, cyclically ordered
    period: int


def _closed(iv: Interval) -> Interval:
    return Interval(iv.left, iv.right, True, True)


def f_star_periodic_sets(pmmap: PMMap) -> FStarCycle:
    """Iterates the piece support of int(f^i(I)) until it cycles.

    Starting from the whole interval the supports are nested, so this
    stabilizes to a fixed set; the cycle detection is kept general anyway
    and guarded at N^2 + 1 iterations.
    """
    graph_check = markov_check(pmmap)
    if not graph_check.passed:
        raise MarkovPreconditionError("f*-iteration needs the Markov condition")
    n = pmmap.n_pieces
    current = frozenset(p.index for p in pmmap.pieces)
    seen = {current: 0}
    history = [current]
    for step in range(1, n * n + 2):
        images = [_closed(pmmap.branch_image(i)) for i in sorted(current)]
        nxt = frozenset(
            p.index for p in pmmap.pieces
            if union_covers(images, _closed(p.interval)))
        if nxt in seen:
            start = seen[nxt]
            cycle = history[start:]
            return FStarCycle(tuple(tuple(sorted(s)) for s in cycle),
                              len(cycle))
        seen[nxt] = step
        history.append(nxt)
        current = nxt
    raise RuntimeError("f*-iteration failed to cycle within the N^2 guard")


def component_cycle(graph: CoveringGraph,
                    component: IrreducibleComponent) -> FStarCycle:
    """Minimal f*-periodic cycle of an irreducible component.

    The period is the gcd of internal cycle lengths; the sets are the phase
    classes, ordered so that edges go from class t to class t + 1 mod m.
    """
    if not component.has_cycle:
        raise ValueError("component has no internal cycle")
    members = set(component.nodes)
    root = component.nodes[0]
    dist = {root: 0}
    frontier = [root]
    edges_seen = []
    while frontier:
        nxt = []
        for u in frontier:
            for v in graph.successors(u):
                if v not in members:
                    continue
                edges_seen.append((u, v))
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    period = 0
    for u, v in edges_seen:
        period = math.gcd(period, dist[u] + 1 - dist[v])
    period = abs(period) or 1
    classes = [[] for _ in range(period)]
    for node in component.nodes:
        classes[dist[node] % period].append(node)
    return FStarCycle(tuple(tuple(sorted(c)) for c in classes), period)


# ----------------------------------------------------------------------
# entropy lower bound

def _cycle_mean_bound(mat: np.ndarray) -> float:
    """Fallback bound: max over L of (trace(A^L) / n) ** (1/L), exact ints."""
    n = mat.shape[0]
    if n == 0:
        return 0.0
    a = [[int(round(mat[i, j])) for j in range(n)] for i in range(n)]
    power = a
    best = 0.0
    for length in range(1, max(2 * n, 64) + 1):
        if length > 1:
            power = [[sum(power[i][k] * a[k][j] for k in range(n))
                      for j in range(n)] for i in range(n)]
        tr = sum(power[i][i] for i in range(n))
        if tr > 0:
            best = max(best, (tr / n) ** (1.0 / length))
    return best


def entropy_lower_bound(graph: CoveringGraph,
                        nodes: Optional[Sequence[int]] = None,
                        tol: float = ENTROPY_TOL,
                        max_iter: int = ENTROPY_MAX_ITER) -> float:
    """log of the adjacency spectral radius, 0 when the radius is <= 1.

    Power iteration runs on A + I so that periodic adjacency patterns still
    converge; on non-convergence the exact closed-walk bound takes over.
    """
    mat = graph.adjacency()
    if nodes is not None:
        idx = [graph.nodes.index(k) for k in sorted(set(nodes))]
        mat = mat[np.ix_(idx, idx)]
    n = mat.shape[0]
    if n == 0 or not mat.any():
        return 0.0
    shifted = mat + np.eye(n)
    v = np.ones(n)
    rho = None
    prev = None
    for _ in range(max_iter):
        w = shifted @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam = float(v @ (shifted @ v))
        if prev is not None and abs(lam - prev) <= tol * max(1.0, abs(lam)):
            rho = lam - 1.0
            break
        prev = lam
    if rho is None:
        rho = _cycle_mean_bound(mat)
    if rho <= 1.0 + 1e-14:
        return 0.0
    return math.log(rho)


# ----------------------------------------------------------------------
# strong transitivity witness

@dataclass(frozen=True)
class TransitivityWitness:
    found: bool
    a: Optional[int]
    b_min: Optional[int]
    period: int
    deepest_step: int
    deepest_coverage: float


def _within_interior(target: Interval, hull: Interval) -> bool:
    if target.is_empty:
        return True
    if target.left < hull.left or (target.left == hull.left and target.left_closed):
        return False
    if target.right > hull.right or (target.right == hull.right and target.right_closed):
        return False
    return True


def strong_transitivity_witness(pmmap: PMMap, graph: CoveringGraph,
                                component: IrreducibleComponent,
                                k1: Interval, k2: Interval,
                                horizon: int = 64) -> TransitivityWitness:
    """Search for exponents a, b_min with f^(a + b m)(K_1) covering K_2.

    m is the component's minimal cycle period. Failure reports the deepest
    coverage fraction achieved within the horizon.
    """
    comp_pieces = [pmmap.piece_by_index(i) for i in component.nodes]
    if not any(k1.interior_intersects(p.interval) for p in comp_pieces):
        raise ValueError("K_1 does not meet the component's interiors")
    merged = merge_intervals([_closed(p.interval) for p in comp_pieces])
    if not any(_within_interior(k2, hull) for hull in merged):
        raise ValueError("K_2 is not inside the component's f*-periodic set")
    period = component_cycle(graph, component).period

    covered_steps = []
    best_cov, best_step = 0.0, 0
    current = [k1]
    for step in range(horizon + 1):
        if union_covers(current, k2):
            covered_steps.append(step)
        cov = _coverage_fraction(current, k2)
        if cov > best_cov:
            best_cov, best_step = cov, step
        if step == horizon:
            break
        nxt = []
        for iv in current:
            for piece in pmmap.pieces:
                hit = iv.intersect(piece.interval)
                if hit.is_empty:
                    continue
                nxt.append(pmmap.branch_for(piece.index).image_of(hit))
        current = merge_intervals(nxt)

    covered = set(covered_steps)
    for a in covered_steps:
        b_max = (horizon - a) // period
        for b0 in range(b_max + 1):
            if all(a + b * period in covered for b in range(b0, b_max + 1)):
                return TransitivityWitness(True, a, b0, period,
                                           best_step, best_cov)
        # all multiples from some b0 failed for this a; try the next a
    return TransitivityWitness(False, None, None, period, best_step, best_cov)


def _coverage_fraction(intervals: list[Interval], target: Interval) -> float:
    width = target.diameter()
    if width == 0:
        return 1.0 if union_covers(intervals, target) else 0.0
    total = 0
    for iv in merge_intervals(intervals):
        hit = iv.intersect(target)
        if not hit.is_empty:
            total += hit.diameter()
    return float(total / width)
