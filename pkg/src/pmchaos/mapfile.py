"""Map specification files.

JSON with rational endpoints written as "p/q" strings (lowest terms), one
piece record per branch record. Parsing and serialization round-trip
bit-exactly for rational data.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .intervals import Interval
from .map_model import (AffineBranch, PMMap, Piece, TableBranch,
                        format_rational, parse_rational)


class MapSpecError(ValueError):
    """Unreadable or malformed map specification file."""


def _rat(obj, where: str) -> Fraction:
    if isinstance(obj, str):
        try:
            return parse_rational(obj)
        except ValueError as exc:
            raise MapSpecError(f"{where}: {exc}") from exc
    if isinstance(obj, int):
        return Fraction(obj)
    raise MapSpecError(f"{where}: expected a rational string, got {obj!r}")


def _flag(obj, where: str) -> bool:
    if isinstance(obj, bool):
        return obj
    raise MapSpecError(f"{where}: expected true/false, got {obj!r}")


def parse_map_spec(text: str) -> PMMap:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapSpecError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MapSpecError("top level must be an object")
    try:
        dom = data["domain"]
        pieces_raw = data["pieces"]
        branches_raw = data["branches"]
    except KeyError as exc:
        raise MapSpecError(f"missing required key {exc}") from exc
    domain = Interval(_rat(dom.get("left"), "domain.left"),
                      _rat(dom.get("right"), "domain.right"))
    if not isinstance(pieces_raw, list) or not isinstance(branches_raw, list):
        raise MapSpecError("pieces and branches must be arrays")
    if len(pieces_raw) != len(branches_raw):
        raise MapSpecError(
            f"{len(pieces_raw)} pieces but {len(branches_raw)} branches")

    pieces = []
    for i, rec in enumerate(pieces_raw, start=1):
        where = f"pieces[{i - 1}]"
        if not isinstance(rec, dict):
            raise MapSpecError(f"{where}: expected an object")
        pieces.append(Piece(
            index=i,
            left=_rat(rec.get("left"), f"{where}.left"),
            right=_rat(rec.get("right"), f"{where}.right"),
            left_closed=_flag(rec.get("left_closed"), f"{where}.left_closed"),
            right_closed=_flag(rec.get("right_closed"), f"{where}.right_closed"),
        ))

    branches = []
    for i, rec in enumerate(branches_raw, start=1):
        where = f"branches[{i - 1}]"
        if not isinstance(rec, dict):
            raise MapSpecError(f"{where}: expected an object")
        kind = rec.get("kind")
        if kind == "affine":
            branches.append(AffineBranch(
                slope=_rat(rec.get("slope"), f"{where}.slope"),
                intercept=_rat(rec.get("intercept"), f"{where}.intercept"),
            ))
        elif kind == "table":
            grid = rec.get("grid")
            if not isinstance(grid, list) or any(
                    not isinstance(pt, list) or len(pt) != 2 for pt in grid):
                raise MapSpecError(f"{where}.grid: expected [[x, y], ...]")
            try:
                branches.append(TableBranch(
                    xs=tuple(float(pt[0]) for pt in grid),
                    ys=tuple(float(pt[1]) for pt in grid),
                    interpolation=rec.get("interpolation", "linear"),
                ))
            except ValueError as exc:
                raise MapSpecError(f"{where}: {exc}") from exc
        else:
            raise MapSpecError(f"{where}.kind: expected 'affine' or 'table', "
                               f"got {kind!r}")
    return PMMap(domain, pieces, branches)


def serialize_map_spec(pmmap: PMMap) -> str:
    pieces = [{
        "left": format_rational(p.left),
        "right": format_rational(p.right),
        "left_closed": p.left_closed,
        "right_closed": p.right_closed,
    } for p in pmmap.pieces]
    branches = []
    for b in pmmap.branches:
        if isinstance(b, AffineBranch):
            branches.append({
                "kind": "affine",
                "slope": format_rational(b.slope),
                "intercept": format_rational(b.intercept),
            })
        else:
            branches.append({
                "kind": "table",
                "interpolation": b.interpolation,
                "grid": [[x, y] for x, y in zip(b.xs, b.ys)],
            })
    data = {
        "domain": {"left": format_rational(pmmap.domain.left),
                   "right": format_rational(pmmap.domain.right)},
        "pieces": pieces,
        "branches": branches,
    }
    return json.dumps(data, indent=2) + "\n"


def load_map(path) -> PMMap:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MapSpecError(f"cannot read {path}: {exc}") from exc
    return parse_map_spec(text)


def save_map(pmmap: PMMap, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_map_spec(pmmap))
