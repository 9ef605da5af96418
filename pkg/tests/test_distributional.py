"""Step functions, distributional pairs, comparison, probes, filters."""

import random
from fractions import Fraction as F

import pytest

from pmchaos import (DFPair, StepFunction, antichain_breakpoints,
                     antichain_pair, chaos_measure, compare, default_t_grid,
                     empirical_df, exact_df, isotectic_probe,
                     minimal_elements, step_function_to_csv, weak_pair_filter,
                     xi)


def make_random_step(rng, max_jumps=5):
    k = rng.randrange(0, max_jumps + 1)
    bps = sorted(rng.sample([F(i, 24) for i in range(1, 24)], k))
    raw = sorted(rng.randint(0, 12) for _ in range(k + 1))
    return StepFunction(bps, [F(v, 12) for v in raw])


def test_step_function_normalizes_zero_jumps():
    f = StepFunction([F(1, 4), F(1, 2), F(3, 4)],
                     [F(0), F(1, 3), F(1, 3), F(1)])
    assert f.breakpoints == (F(1, 4), F(3, 4))
    assert f.levels == (F(0), F(1, 3), F(1))


def test_step_function_left_continuity():
    f = StepFunction([F(1, 2)], [F(0), F(1)])
    assert f.evaluate(F(1, 2)) == 0
    assert f.value_after(F(1, 2)) == 1
    assert f.evaluate(F(1, 2) + F(1, 1000)) == 1


def test_step_function_validation():
    with pytest.raises(ValueError):
        StepFunction([F(1, 2), F(1, 4)], [F(0), F(1, 2), F(1)])
    with pytest.raises(ValueError):
        StepFunction([F(1, 2)], [F(1), F(0)])
    with pytest.raises(ValueError):
        StepFunction([F(1, 2)], [F(0), F(3, 2)])


def test_step_function_equality_across_number_types():
    f = StepFunction([F(1, 2)], [F(0), F(1)])
    g = StepFunction([0.5], [0.0, 1.0])
    assert f == g


def test_step_csv_has_both_sides_of_each_jump():
    f = StepFunction([F(1, 3)], [F(0), F(1)])
    lines = step_function_to_csv(f).strip().splitlines()
    assert lines[0] == "t;level"
    assert "1/3;0" in lines and "1/3;1" in lines


def test_xi_counts_strictly(tent):
    # orbit distances of (2/5, 4/5) are constantly 2/5
    assert xi(tent, F(2, 5), F(4, 5), F(2, 5), 10) == 0
    assert xi(tent, F(2, 5), F(4, 5), F(2, 5) + F(1, 100), 10) == 10


def test_exact_df_on_a_jointly_periodic_pair(rot3):
    x, y = antichain_pair(3)
    pair = exact_df(rot3, x, y)
    a, b = antichain_breakpoints(3)
    assert pair.lower is pair.upper or pair.lower == pair.upper
    assert pair.lower.breakpoints == (a, b, F(2, 3))
    assert pair.lower.levels == (0, F(1, 3), F(2, 3), 1)
    assert pair.provenance.preperiod == 0
    assert pair.provenance.period == 3


def test_exact_df_handles_preperiod(rot3):
    pair = exact_df(rot3, F(1), F(2, 3))
    assert pair.provenance.preperiod == 1
    assert pair.provenance.period == 1
    assert pair.lower.breakpoints == (F(1, 3),)


def test_exact_df_gives_up_within_cap(tent):
    # float orbits on dyadic branches collapse to 0 eventually, but not
    # within 50 steps for this pair
    assert exact_df(tent, 0.1234, 0.567, cap=50) is None


def test_empirical_matches_exact_for_constant_distance(tent):
    grid = [F(1, 5), F(2, 5), F(3, 5)]
    pair = empirical_df(tent, F(2, 5), F(4, 5), horizon=400, window=40,
                        t_grid=grid)
    assert pair.lower.evaluate(F(2, 5)) == 0
    assert pair.lower.value_after(F(2, 5)) == 1
    assert pair.upper.evaluate(F(1, 5)) == 0


def test_empirical_lower_never_exceeds_upper(tent):
    rng = random.Random(11)
    grid = default_t_grid(tent, 64)
    for _ in range(10):
        x, y = rng.random(), rng.random()
        pair = empirical_df(tent, x, y, horizon=600, window=60, t_grid=grid)
        for t in grid:
            assert pair.lower.evaluate(t) <= pair.upper.evaluate(t) + 1e-12


def test_empirical_rejects_bad_window(tent):
    with pytest.raises(ValueError):
        empirical_df(tent, F(1, 3), F(1, 7), horizon=100, window=200)


def test_compare_relations_and_witnesses():
    low = StepFunction([F(1, 4)], [F(0), F(1)])
    high = StepFunction([F(1, 2)], [F(0), F(1)])
    rel = compare(low, high)
    assert rel.relation == "ge"     # low jumps earlier, so it sits above
    assert F(1, 4) < rel.gt_witness < F(1, 2)
    assert compare(high, low).relation == "le"
    assert compare(low, low).relation == "equal"

    crossing = StepFunction([F(1, 8), F(3, 4)], [F(0), F(1, 2), F(1)])
    rel = compare(high, crossing)
    assert rel.relation == "incomparable"
    assert rel.lt_witness is not None and rel.gt_witness is not None


def test_compare_is_a_partial_order():
    rng = random.Random(23)
    pool = [make_random_step(rng) for _ in range(40)]
    for _ in range(300):
        f, g, h = (rng.choice(pool) for _ in range(3))
        fg, gh, fh = compare(f, g), compare(g, h), compare(f, h)
        if fg.relation in ("le", "equal") and gh.relation in ("le", "equal"):
            assert fh.relation in ("le", "equal")
        flipped = compare(g, f).relation
        assert flipped == {"le": "ge", "ge": "le"}.get(fg.relation,
                                                       fg.relation)


def brute_force_minimal(funcs):
    kept = []
    for i, f in enumerate(funcs):
        dominated = False
        for j, g in enumerate(funcs):
            if i == j:
                continue
            rel = compare(g, f).relation
            if rel == "le" or (rel == "equal" and j < i):
                dominated = True
                break
        if not dominated:
            kept.append(i)
    return kept


def test_minimal_elements_agrees_with_brute_force():
    rng = random.Random(5)
    for _ in range(60):
        funcs = [make_random_step(rng) for _ in range(rng.randrange(1, 8))]
        result = minimal_elements(funcs)
        assert list(result.kept) == brute_force_minimal(funcs)
        for i, j, t1, t2 in result.certificates:
            assert funcs[i].value_after(t1) < funcs[j].value_after(t1)
            assert funcs[j].value_after(t2) < funcs[i].value_after(t2)


def test_chaos_measure_zero_iff_degenerate(rot3):
    x, y = antichain_pair(2)
    assert chaos_measure(exact_df(rot3, x, y)) == 0
    lower = StepFunction([F(1, 2)], [F(0), F(1)])
    upper = StepFunction([F(1, 4)], [F(0), F(1)])
    from pmchaos import ExactProvenance
    pair = DFPair(lower, upper, ExactProvenance(0, 1))
    assert chaos_measure(pair) == F(1, 4)


def test_weak_pair_filter_exact_and_float(rot3):
    x2, y2 = antichain_pair(2)        # minimum cycle distance is 5/18
    records = weak_pair_filter(rot3, [(x2, y2)], horizon=200, epsilon=F(3, 10))
    assert records[0].exact and records[0].kept
    assert records[0].min_distance == F(5, 18)
    records = weak_pair_filter(rot3, [(x2, y2)], horizon=200, epsilon=F(1, 4))
    assert not records[0].kept
    records = weak_pair_filter(rot3, [(0.21, 0.46)], horizon=200, epsilon=0.5)
    assert not records[0].exact
    assert records[0].kept


def test_weak_filter_detects_exact_zero(tent):
    records = weak_pair_filter(tent, [(F(1, 3), F(2, 3))], horizon=100,
                               epsilon=F(1, 10 ** 9))
    assert records[0].exact
    assert records[0].min_distance == 0
    assert records[0].kept


def test_probe_verdicts(tent, rot3, two_tower):
    x2, y2 = antichain_pair(2)
    probe = isotectic_probe(rot3, x2, y2)
    assert probe.verdict == "refuted"
    assert probe.phase_offset == 1

    probe = isotectic_probe(rot3, x2, rot3.eval(y2))
    assert probe.verdict == "refuted"
    assert probe.phase_offset == 2

    probe = isotectic_probe(tent, F(1, 7), F(2, 11))
    assert probe.verdict == "consistent"
    assert probe.phase_offset == 0

    # 1/8 drains to the fixed point 0; 3/5 cycles in the upper component
    # (exact rationals matter: float orbits collapse onto dyadic points
    # and leak through the shared boundary 1/2)
    probe = isotectic_probe(two_tower, F(1, 8), F(3, 5))
    assert probe.verdict == "refuted"
    assert probe.component_x != probe.component_y


def test_probe_needs_enough_horizon(tent):
    probe = isotectic_probe(tent, F(1, 7), F(2, 11), horizon=3)
    assert probe.verdict == "inconclusive"
