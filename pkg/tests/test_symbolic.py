"""Itineraries, cylinders, Markov check, and the diameter diagnostic."""

from fractions import Fraction as F

import pytest

from pmchaos import (EnumerationLimitError, admissible_words,
                     count_admissible_words, cylinder, cylinders_to_csv,
                     enumerate_cylinders, generator_diagnostic, itinerary,
                     markov_check, transition_relation)


def test_itinerary_of_a_periodic_point(tent):
    assert itinerary(tent, F(2, 5), 6) == [1, 2, 1, 2, 1, 2]


def test_cylinder_is_exact_interval(tent):
    cyl = cylinder(tent, [1, 2])
    assert cyl.interval.left == F(1, 4)
    assert cyl.interval.right == F(1, 2)
    assert not cyl.interval.left_closed and cyl.interval.right_closed


def test_cylinder_can_degenerate_to_a_point(rot3):
    cyl = cylinder(rot3, [1, 1])
    assert cyl.interval.is_point
    assert cyl.interval.left == F(1, 3)


def test_markov_check_verdicts(tent, rot3, non_markov):
    assert markov_check(tent).passed
    assert markov_check(rot3).passed
    res = markov_check(non_markov)
    assert not res.passed
    assert any(w.limit == F(3, 4) for w in res.witnesses)


def test_transition_relation_uses_interior_overlap(rot3):
    rel = transition_relation(rot3)
    assert rel == {1: (2,), 2: (3,), 3: (1,)}
    touching = transition_relation(rot3, include_touching=True)
    assert 1 in touching[1]     # image [1/3, 2/3] touches piece 1 at 1/3


def test_word_enumeration_and_exact_counts(tent):
    letters = [1, 2]
    for depth in range(1, 7):
        words = admissible_words(tent, letters, depth)
        assert len(words) == 2 ** depth
        assert count_admissible_words(tent, letters, depth) == 2 ** depth
        assert words == sorted(words)


def test_enumeration_cap_is_enforced(tent):
    with pytest.raises(EnumerationLimitError):
        admissible_words(tent, [1, 2], 10, cap=100)


def test_cylinder_partition_at_depth(tent):
    cyls = enumerate_cylinders(tent, 3)
    assert len(cyls) == 8
    assert all(c.interval.diameter() == F(1, 8) for c in cyls)
    total = sum(c.interval.diameter() for c in cyls)
    assert total == 1


def test_diameter_diagnostic_shrinking(tent):
    diag = generator_diagnostic(tent, 10)
    assert diag.verdict == "shrinking"
    assert diag.first_stall_depth is None
    assert diag.max_diameters == tuple(F(1, 2 ** d) for d in range(1, 11))


def test_diameter_diagnostic_stalls(rot3):
    diag = generator_diagnostic(rot3, 12)
    assert diag.verdict == "stalled"
    assert diag.first_stall_depth == 2
    assert diag.stalled_diameter == F(1, 3)
    assert all(d == F(1, 3) for d in diag.max_diameters)
    assert all(c == 3 for c in diag.cylinder_counts)


def test_cylinder_csv_layout(tent):
    text = cylinders_to_csv(enumerate_cylinders(tent, 2))
    lines = text.strip().splitlines()
    assert lines[0] == "word;left;right;diameter"
    assert len(lines) == 5
    assert lines[1].startswith("1,1;")
