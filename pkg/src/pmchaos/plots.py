"""Matplotlib figure rendering for reports.

Every function writes a PNG to the given path using the non-interactive
backend and returns the path, so report generation works headless.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .graph import CoveringGraph
from .map_model import AffineBranch, PMMap
from .symbolic import GeneratorDiagnostic


def _endpoint_markers(ax, x, y, closed, color):
    face = color if closed else "white"
    ax.plot([x], [y], marker="o", ms=5, mec=color, mfc=face, zorder=5)


def plot_map(pmmap: PMMap, path: str) -> str:
    """Branch graphs with open/closed endpoint markers and the diagonal."""
    fig, ax = plt.subplots(figsize=(5, 5))
    lo, hi = float(pmmap.domain.left), float(pmmap.domain.right)
    ax.plot([lo, hi], [lo, hi], ls="--", lw=0.8, color="0.6")
    for piece in pmmap.pieces:
        branch = pmmap.branch_for(piece.index)
        color = f"C{(piece.index - 1) % 10}"
        if isinstance(branch, AffineBranch):
            xs = [float(piece.left), float(piece.right)]
            ys = [float(branch.value(piece.left)), float(branch.value(piece.right))]
        else:
            n = 200
            span = float(piece.right) - float(piece.left)
            xs = [float(piece.left) + span * k / n for k in range(n + 1)]
            ys = [float(branch.value(x)) for x in xs]
        ax.plot(xs, ys, color=color, lw=1.6, label=f"piece {piece.index}")
        _endpoint_markers(ax, xs[0], ys[0], piece.left_closed, color)
        _endpoint_markers(ax, xs[-1], ys[-1], piece.right_closed, color)
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_diameters(diag: GeneratorDiagnostic, path: str) -> str:
    """Largest cylinder diameter per depth on a log scale."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    diams = [float(d) for d in diag.max_diameters]
    ax.semilogy(diag.depths, diams, marker="o", lw=1.2)
    if diag.verdict == "stalled":
        ax.axhline(float(diag.stalled_diameter), ls=":", color="C3",
                   label=f"stalled at depth {diag.first_stall_depth}")
        ax.legend(fontsize=8)
    ax.set_xlabel("depth")
    ax.set_ylabel("max cylinder diameter")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_step_functions(funcs, labels, path: str,
                        highlight=None) -> str:
    """Left-continuous step curves; indices in highlight get full color."""
    fig, ax = plt.subplots(figsize=(5.5, 4))
    highlight = set(highlight or range(len(funcs)))
    for i, (func, label) in enumerate(zip(funcs, labels)):
        bps = [float(b) for b in func.breakpoints]
        lvls = [float(l) for l in func.levels]
        if not bps:
            xs, ys = [0.0, 1.0], [lvls[0], lvls[0]]
        else:
            pad = max(0.05 * (bps[-1] - bps[0]), 0.05)
            xs = [bps[0] - pad] + bps + [bps[-1] + pad]
            ys = [lvls[0]] + lvls
        if i in highlight:
            ax.step(xs, ys, where="pre", lw=1.6, label=label)
        else:
            ax.step(xs, ys, where="pre", lw=0.8, color="0.75")
    ax.set_xlabel("t")
    ax.set_ylabel("F(t)")
    ax.set_ylim(-0.05, 1.05)
    if any(i in highlight for i in range(len(funcs))):
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_covering_graph(graph: CoveringGraph, path: str) -> str:
    """Nodes on a circle, curved arrows for edges, loops drawn separately."""
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    n = len(graph.nodes)
    pos = {}
    for k, node in enumerate(graph.nodes):
        angle = 2 * math.pi * k / max(n, 1)
        pos[node] = (math.cos(angle), math.sin(angle))
    for node, (x, y) in pos.items():
        ax.plot([x], [y], marker="o", ms=18, color="C0", zorder=3)
        ax.annotate(str(node), (x, y), ha="center", va="center",
                    color="white", zorder=4, fontsize=9)
    for u, v in graph.edge_list():
        if u == v:
            x, y = pos[u]
            r = math.hypot(x, y) or 1.0
            cx, cy = x * (1 + 0.22 / r), y * (1 + 0.22 / r)
            loop = plt.Circle((cx, cy), 0.12, fill=False, color="0.4", lw=1.0)
            ax.add_patch(loop)
            continue
        ax.annotate("", xy=pos[v], xytext=pos[u],
                    arrowprops=dict(arrowstyle="-|>", color="0.4", lw=1.0,
                                    shrinkA=12, shrinkB=12,
                                    connectionstyle="arc3,rad=0.15"))
    ax.set_xlim(-1.5, 1.5)
    ax.set_ylim(-1.5, 1.5)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
