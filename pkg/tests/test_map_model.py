"""Intervals, partition validation, exact evaluation, and map files."""

import random
from fractions import Fraction as F

import pytest

from pmchaos import (AffineBranch, Interval, MapSpecError, PMMap,
                     PartitionError, Piece, TableBranch, load_map,
                     merge_intervals, parse_map_spec, parse_rational,
                     save_map, serialize_map_spec, tent_map, union_covers)

UNIT = Interval(F(0), F(1))


def test_interval_membership_respects_closure_flags():
    iv = Interval(F(0), F(1), left_closed=False, right_closed=True)
    assert not iv.contains(F(0))
    assert iv.contains(F(1))
    assert iv.contains(F(1, 2))
    assert iv.diameter() == 1


def test_interval_intersection_and_interior():
    a = Interval(F(0), F(1, 2))
    b = Interval(F(1, 2), F(1))
    hit = a.intersect(b)
    assert hit.is_point
    assert not a.interior_intersects(b)
    assert a.touches_or_overlaps(b)
    assert Interval(F(0), F(1)).contains_interior_of(a)


def test_merge_and_cover():
    parts = [Interval(F(1, 2), F(1)), Interval(F(0), F(1, 2))]
    merged = merge_intervals(parts)
    assert len(merged) == 1
    assert union_covers(parts, UNIT)
    gap = [Interval(F(0), F(1, 4)), Interval(F(1, 2), F(1))]
    assert not union_covers(gap, UNIT)


def test_partition_rejects_gaps_overlaps_and_bad_order():
    b = [AffineBranch(F(1), F(0))] * 2
    with pytest.raises(PartitionError):
        PMMap(UNIT, [Piece(1, F(0), F(1, 3)),
                     Piece(2, F(1, 2), F(1), left_closed=False)], b)
    with pytest.raises(PartitionError):
        PMMap(UNIT, [Piece(1, F(0), F(2, 3)),
                     Piece(2, F(1, 3), F(1), left_closed=False)], b)
    with pytest.raises(PartitionError):
        PMMap(UNIT, [Piece(2, F(0), F(1, 2)),
                     Piece(1, F(1, 2), F(1), left_closed=False)], b)


def test_partition_requires_exactly_one_owner_per_shared_endpoint():
    b = [AffineBranch(F(1), F(0))] * 2
    with pytest.raises(PartitionError):
        PMMap(UNIT, [Piece(1, F(0), F(1, 2)),
                     Piece(2, F(1, 2), F(1))], b)   # both closed at 1/2


def test_partition_rejects_branch_leaving_domain():
    with pytest.raises(PartitionError):
        PMMap(UNIT, [Piece(1, F(0), F(1))], [AffineBranch(F(2), F(0))])


def test_exact_orbit_of_the_three_cycle(rot3):
    x = F(1, 6)
    orbit = rot3.iterate(x, 3)
    assert orbit == [F(1, 6), F(1, 2), F(5, 6), F(1, 6)]
    assert rot3.eval(F(1, 3)) == F(1, 3)
    assert rot3.eval(F(2, 3)) == F(2, 3)
    assert rot3.eval(F(1)) == F(1, 3)


def test_float_and_exact_paths_agree(tent):
    rng = random.Random(4)
    for _ in range(200):
        x = F(rng.randrange(1, 4096), 4096)
        exact = tent.eval(x)
        approx = tent.eval(float(x))
        assert abs(float(exact) - approx) < 1e-12


def test_piece_lookup_at_shared_endpoints(tent):
    assert tent.piece_of(F(1, 2)).index == 1
    assert tent.piece_of(F(1, 2) + F(1, 10 ** 9)).index == 2
    assert tent.piece_of(F(0)).index == 1
    assert tent.piece_of(F(1)).index == 2


def test_critical_points_depth_one(tent):
    crit = tent.critical_points(1)
    assert crit.points == (F(0), F(1, 4), F(1, 2), F(3, 4), F(1))


def test_eventual_period_detection(tent):
    assert tent.detect_eventual_period(F(1, 3)) == (1, 1)
    assert tent.detect_eventual_period(F(2, 5)) == (0, 2)
    assert tent.detect_eventual_period(0.1234567891, cap=50) is None


def test_table_branch_interpolation_and_solve(table_tent):
    branch = table_tent.branch_for(1)
    assert branch.value(0.25) == pytest.approx(0.5)
    x = branch.solve(0.3)
    assert abs(branch.value(x) - 0.3) < 1e-11
    assert not table_tent.is_affine()


def test_table_branch_rejects_non_monotone_data():
    with pytest.raises(ValueError):
        TableBranch((0.0, 0.5, 1.0), (0.0, 0.7, 0.4))


def test_rational_parsing_round_trip():
    assert parse_rational("2/3") == F(2, 3)
    assert parse_rational("5") == F(5)
    with pytest.raises(ValueError):
        parse_rational("2/3/4")


def test_map_file_round_trip(tmp_path, rot3):
    path = tmp_path / "m.json"
    save_map(rot3, path)
    again = load_map(path)
    assert again.pieces == rot3.pieces
    for b1, b2 in zip(again.branches, rot3.branches):
        assert b1.slope == b2.slope and b1.intercept == b2.intercept
    text = serialize_map_spec(rot3)
    assert '"2/3"' in text    # rationals survive as exact strings


def test_map_file_reports_field_path_on_error():
    spec = ('{"domain": {"left": "0", "right": "1"}, '
            '"pieces": [{"index": 1, "left": "zero", "right": "1", '
            '"left_closed": true, "right_closed": true}], '
            '"branches": [{"type": "affine", "slope": "1", "intercept": "0"}]}')
    with pytest.raises(MapSpecError) as err:
        parse_map_spec(spec)
    assert "pieces[0].left" in str(err.value)


def test_one_sided_limits(tent):
    piece = tent.piece_by_index(2)
    left, right = tent.one_sided_limits(piece)
    assert left == F(1) and right == F(0)
