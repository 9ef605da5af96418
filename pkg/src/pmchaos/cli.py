"""Command line interface.

Subcommands: check (Markov and cylinder-diameter verdicts), graph
(covering graph, components, entropy, periodic-word audit), spectrum
(distributional spectrum estimate), antichain (built-in map whose
spectrum contains arbitrarily many pairwise incomparable curves).

Exit codes: 0 success, 1 argument or input validation error, 2 failed
map checks, 3 spectrum refusal because diameters stalled (rerun with
--force to override). Reports are semicolon CSV and JSON files in the
output directory; PNG figures are rendered next to them unless
--no-figures is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .distributional import (GeneratorStalledError, SamplerConfig,
                             SpectrumReport, spectrum_estimate,
                             weak_spectrum_estimate)
from .graph import (MarkovPreconditionError, build_covering_graph,
                    entropy_lower_bound, f_star_periodic_sets,
                    irreducible_components)
from .map_model import PartitionError, PMMap
from .mapfile import MapSpecError, load_map, serialize_map_spec
from .maps import antichain_breakpoints, antichain_family, period_three_map
from .periodic import audit_to_csv, dense_periodic_audit
from .symbolic import (count_admissible_words, cylinders_to_csv,
                       enumerate_cylinders, generator_diagnostic,
                       markov_check)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this tool reserves 2 for
    failed map checks, so usage errors exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def _ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _write(out_dir: str, name: str, text: str) -> str:
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _parse_point(text: str):
    """Rational when the token parses exactly, float otherwise."""
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _load_pairs_file(path: str) -> list:
    pairs = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(";", " ").split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two points per line")
            pairs.append((_parse_point(parts[0]), _parse_point(parts[1])))
    if not pairs:
        raise ValueError(f"{path}: no pairs found")
    return pairs


# ----------------------------------------------------------------------
# check

def cmd_check(args) -> int:
    pmmap = load_map(args.mapfile)
    out_dir = _ensure_dir(args.out_dir)
    markov = markov_check(pmmap)
    diag = generator_diagnostic(pmmap, args.depth)

    payload = {
        "markov": {
            "passed": markov.passed,
            "witnesses": [{"point": _fmt(w.point), "side": w.side,
                           "limit": _fmt(w.limit)} for w in markov.witnesses],
        },
        "generator": {
            "verdict": diag.verdict,
            "first_stall_depth": diag.first_stall_depth,
            "stall_window": diag.stall_window,
            "depths": list(diag.depths),
            "max_diameters": [_fmt(d) for d in diag.max_diameters],
            "cylinder_counts": list(diag.cylinder_counts),
        },
    }
    _write(out_dir, "check_report.json",
           json.dumps(payload, indent=2, sort_keys=True) + "\n")
    rows = ["depth;cylinder_count;max_diameter"]
    for d, count, diam in zip(diag.depths, diag.cylinder_counts,
                              diag.max_diameters):
        rows.append(f"{d};{count};{_fmt(diam)}")
    _write(out_dir, "check_generator.csv", "\n".join(rows) + "\n")

    if not args.no_figures:
        from . import plots
        plots.plot_map(pmmap, os.path.join(out_dir, "check_map.png"))
        plots.plot_diameters(diag, os.path.join(out_dir, "check_diameters.png"))

    print(f"markov: {'pass' if markov.passed else 'FAIL'}"
          + (f" ({len(markov.witnesses)} witnesses)" if markov.witnesses else ""))
    print(f"cylinder diameters: {diag.verdict}"
          + (f" (first stall at depth {diag.first_stall_depth},"
             f" diameter {_fmt(diag.stalled_diameter)})"
             if diag.verdict == "stalled" else ""))
    return 0 if markov.passed and diag.verdict == "shrinking" else 2


# ----------------------------------------------------------------------
# graph

def cmd_graph(args) -> int:
    pmmap = load_map(args.mapfile)
    out_dir = _ensure_dir(args.out_dir)
    graph = build_covering_graph(pmmap)
    comps = irreducible_components(graph)

    lines = [f"{u} {v}" for u, v in graph.edge_list()]
    _write(out_dir, "graph_adjacency.txt", "\n".join(lines) + "\n")

    rows = ["component_id;nodes;is_basic;entropy_lower_bound"]
    for ci, comp in enumerate(comps):
        ent = entropy_lower_bound(graph, comp.nodes)
        rows.append(f"{ci};{','.join(map(str, comp.nodes))};"
                    f"{str(comp.is_basic).lower()};{ent!r}")
    _write(out_dir, "graph_components.csv", "\n".join(rows) + "\n")

    cycle = f_star_periodic_sets(pmmap)
    rows = ["phase;nodes"]
    for t, nodes in enumerate(cycle.sets):
        rows.append(f"{t};{','.join(map(str, nodes))}")
    _write(out_dir, "graph_fstar.csv", "\n".join(rows) + "\n")

    cylinders = enumerate_cylinders(pmmap, args.cylinders_depth)
    _write(out_dir, "graph_cylinders.csv", cylinders_to_csv(cylinders))

    rows = ["depth;word_count"]
    letters = [p.index for p in pmmap.pieces]
    for d in range(1, args.depth + 1):
        rows.append(f"{d};{count_admissible_words(pmmap, letters, d)}")
    _write(out_dir, "graph_word_counts.csv", "\n".join(rows) + "\n")

    audit_rows = []
    for ci, comp in enumerate(comps):
        if not comp.is_basic:
            continue
        report = dense_periodic_audit(pmmap, graph, comp, args.audit_depth)
        body = audit_to_csv(report).splitlines()
        if not audit_rows:
            audit_rows.append("component_id;" + body[0])
        audit_rows.extend(f"{ci};{line}" for line in body[1:])
        print(f"component {ci}: audited {report.total_cylinders} cylinders, "
              f"coverage {report.coverage:.3f}")
    if audit_rows:
        _write(out_dir, "graph_audit.csv", "\n".join(audit_rows) + "\n")

    if not args.no_figures:
        from . import plots
        plots.plot_map(pmmap, os.path.join(out_dir, "graph_map.png"))
        plots.plot_covering_graph(graph, os.path.join(out_dir,
                                                      "graph_covering.png"))

    basic = sum(1 for c in comps if c.is_basic)
    print(f"covering graph: {len(graph.nodes)} nodes, "
          f"{len(graph.edge_list())} edges, {len(comps)} components "
          f"({basic} basic), f*-period {cycle.period}")
    return 0


# ----------------------------------------------------------------------
# spectrum

def _candidates_csv(report: SpectrumReport) -> str:
    rows = ["id;kind;x;y;component;provenance;probe_verdict"]
    for c in report.candidates:
        x = _fmt(c.pair[0]) if c.pair else ""
        y = _fmt(c.pair[1]) if c.pair else ""
        comp = ",".join(map(str, c.component)) if c.component else ""
        verdict = c.probe.verdict if c.probe else ""
        rows.append(f"{c.id};{c.kind};{x};{y};{comp};"
                    f"{c.df.provenance.kind};{verdict}")
    return "\n".join(rows) + "\n"


def _curves_csv(report: SpectrumReport, indices) -> str:
    rows = ["id;t;level"]
    for i in indices:
        cand = report.candidates[i]
        func = cand.df.lower
        if func.breakpoints:
            rows.append(f"{cand.id};{_fmt(min(func.breakpoints[0], 0))};"
                        f"{_fmt(func.levels[0])}")
        else:
            rows.append(f"{cand.id};0;{_fmt(func.levels[0])}")
        for k, b in enumerate(func.breakpoints):
            rows.append(f"{cand.id};{_fmt(b)};{_fmt(func.levels[k])}")
            rows.append(f"{cand.id};{_fmt(b)};{_fmt(func.levels[k + 1])}")
    return "\n".join(rows) + "\n"


def _spectrum_outputs(report: SpectrumReport, out_dir: str, prefix: str,
                      pmmap: PMMap, no_figures: bool) -> None:
    _write(out_dir, f"{prefix}_report.json", report.to_json())
    _write(out_dir, f"{prefix}_candidates.csv", _candidates_csv(report))
    _write(out_dir, f"{prefix}_minimal.csv", _curves_csv(report, report.minimal))
    if not no_figures:
        from . import plots
        funcs = [c.df.lower for c in report.candidates]
        labels = [c.id for c in report.candidates]
        plots.plot_step_functions(
            funcs, labels, os.path.join(out_dir, f"{prefix}_curves.png"),
            highlight=set(report.minimal))
        plots.plot_map(pmmap, os.path.join(out_dir, f"{prefix}_map.png"))


def cmd_spectrum(args) -> int:
    pmmap = load_map(args.mapfile)
    out_dir = _ensure_dir(args.out_dir)
    sampler = SamplerConfig(pair_count=args.pairs, seed=args.seed,
                            horizon=args.horizon, window=args.window,
                            grid_size=args.grid)
    pairs = _load_pairs_file(args.pairs_file) if args.pairs_file else None
    if args.weak_epsilon is not None:
        report = weak_spectrum_estimate(
            pmmap, _parse_point(args.weak_epsilon), sampler=sampler,
            pairs=pairs, force=args.force, diagnostic_depth=args.depth)
    else:
        report = spectrum_estimate(pmmap, sampler=sampler, pairs=pairs,
                                   force=args.force,
                                   diagnostic_depth=args.depth)
    _spectrum_outputs(report, out_dir, "spectrum", pmmap, args.no_figures)
    print(f"candidates: {len(report.candidates)} ({report.mode} mode, "
          f"diameters {report.generator_verdict})")
    print(f"minimal elements: {len(report.minimal)} -> "
          + ", ".join(report.minimal_ids()))
    print(f"incomparability certificates: {len(report.certificates)}")
    for note in report.notes:
        print(f"note: {note}")
    return 0


# ----------------------------------------------------------------------
# antichain

def cmd_antichain(args) -> int:
    pmmap = period_three_map()
    out_dir = _ensure_dir(args.out_dir)
    _write(out_dir, "antichain_map.json", serialize_map_spec(pmmap))

    pairs = antichain_family(args.count)
    report = spectrum_estimate(pmmap, pairs=pairs, force=True)

    rows = ["n;x;y;small_step;large_step"]
    for n, (x, y) in enumerate(pairs, 1):
        a, b = antichain_breakpoints(n)
        rows.append(f"{n};{_fmt(x)};{_fmt(y)};{_fmt(a)};{_fmt(b)}")
    _write(out_dir, "antichain_pairs.csv", "\n".join(rows) + "\n")

    rows = ["low_id;high_id;t_low_below;t_high_below"]
    for i, j, t1, t2 in report.certificates:
        rows.append(f"{report.candidates[i].id};{report.candidates[j].id};"
                    f"{_fmt(t1)};{_fmt(t2)}")
    _write(out_dir, "antichain_compare.csv", "\n".join(rows) + "\n")

    _write(out_dir, "antichain_curves.csv",
           _curves_csv(report, range(len(report.candidates))))
    _write(out_dir, "antichain_report.json", report.to_json())

    if not args.no_figures:
        from . import plots
        funcs = [c.df.lower for c in report.candidates]
        labels = [f"pair {n}" for n in range(1, len(pairs) + 1)]
        plots.plot_step_functions(funcs, labels,
                                  os.path.join(out_dir, "antichain_curves.png"))
        plots.plot_map(pmmap, os.path.join(out_dir, "antichain_map.png"))

    print(f"candidates: {len(report.candidates)}, "
          f"minimal elements: {len(report.minimal)}, "
          f"certificates: {len(report.certificates)}")
    if len(report.minimal) == len(pairs):
        print(f"all {len(pairs)} curves are pairwise incomparable")
    return 0


# ----------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pmchaos",
                     description="Distributional chaos reports for piecewise "
                                 "monotonic interval maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", default=".",
                       help="directory for reports and figures (default: .)")
        p.add_argument("--no-figures", action="store_true",
                       help="skip PNG rendering")

    p = sub.add_parser("check", parents=[], help="partition, Markov and "
                       "cylinder-diameter checks")
    p.add_argument("mapfile")
    p.add_argument("--depth", type=int, default=12,
                   help="max cylinder depth for the diameter table")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="covering graph, components, entropy "
                       "bounds and periodic-word audit")
    p.add_argument("mapfile")
    p.add_argument("--depth", type=int, default=12,
                   help="max depth for admissible word counts")
    p.add_argument("--cylinders-depth", type=int, default=6,
                   help="depth of the cylinder table")
    p.add_argument("--audit-depth", type=int, default=4,
                   help="word length for the periodic-point audit")
    common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("spectrum", help="minimal distributional functions")
    p.add_argument("mapfile")
    p.add_argument("--pairs", type=int, default=200,
                   help="number of sampled pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int, default=10000,
                   help="orbit length for empirical estimates")
    p.add_argument("--window", type=int, default=None,
                   help="trailing window (default horizon/10)")
    p.add_argument("--grid", type=int, default=512,
                   help="t-grid resolution for empirical estimates")
    p.add_argument("--depth", type=int, default=8,
                   help="cylinder depth for the diameter verdict")
    p.add_argument("--force", action="store_true",
                   help="proceed even when cylinder diameters stalled")
    p.add_argument("--pairs-file",
                   help="file with one 'x y' pair per line; suppresses sampling")
    p.add_argument("--weak-epsilon", default=None,
                   help="keep only pairs coming within this distance "
                        "(weak spectrum)")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("antichain", help="built-in map whose spectrum "
                       "contains arbitrarily many incomparable curves")
    p.add_argument("--count", type=int, default=5,
                   help="number of orbit pairs in the family")
    common(p)
    p.set_defaults(func=cmd_antichain)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GeneratorStalledError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        print("rerun with --force to estimate anyway", file=sys.stderr)
        return 3
    except MarkovPreconditionError as exc:
        print(f"map check failed: {exc}", file=sys.stderr)
        return 2
    except (MapSpecError, PartitionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
