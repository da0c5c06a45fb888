import itertools
import json

import numpy as np
import pytest

from pebblecover.decider import is_coverable
from pebblecover.errors import InvalidConfiguration, NotCoverableError
from pebblecover.graphs import build_hypercube, insert_bit
from pebblecover.pebbling import (
    BranchTag,
    PebbleMove,
    classify,
    good_threshold,
    is_good,
    moves_from_json,
    simple_configuration,
    verify_cover_sequence,
)
from pebblecover.strategist import (
    analyse_cut,
    base_case_solver,
    cover_strategy,
    cut_and_transfer,
    open_step,
    parity_residual,
    pebble_ancestry,
    random_good_configuration,
    single_large_reduction,
    trim_to_sharp,
)


def _final(d, c, moves):
    res = verify_cover_sequence(build_hypercube(d), c, moves)
    assert res.is_cover
    return res.final


def _two_antipodal_q4():
    c = [0] * 16
    c[0b0000], c[0b1111] = 34, 30
    for j in range(4):
        c[1 << j] = 1
        c[0b1111 ^ (1 << j)] = 1
    return tuple(c)


def test_strategy_examples():
    assert cover_strategy(1, (1, 1)).moves == []
    t = cover_strategy(2, simple_configuration(4, 0, 9))
    assert t.verified and t.fallback_count == 0
    # a cover of Q^2 keeps at least 4 of the 9 pebbles
    assert len(t.moves) <= 5
    c = _two_antipodal_q4()
    assert sum(c) == 72 and is_good(4, c).sharp and classify(c, build_hypercube(4)).closed
    t = cover_strategy(4, c)
    assert t.verified and "CUT_TRANSFER" in t.branch_kinds()


def test_trim_examples():
    assert trim_to_sharp(2, (10, 0, 0, 0)) == ((9, 0, 0, 0), (1, 0, 0, 0))
    assert trim_to_sharp(2, (9, 0, 0, 0)) == ((9, 0, 0, 0), (0, 0, 0, 0))
    c = (21,) + (1,) * 7
    sharp, aside = trim_to_sharp(3, c)
    assert sharp[0] == 13 and sum(aside) == 8 and is_good(3, sharp).sharp
    with pytest.raises(InvalidConfiguration):
        trim_to_sharp(2, (1, 1, 1, 1))


def test_trim_existence_property():
    rng = np.random.default_rng(3)
    for d in range(2, 7):
        for _ in range(200):
            c = random_good_configuration(d, rng, sharp_probability=0.0)
            rep = is_good(d, c)
            assert rep.good
            if rep.slack > 0:
                assert max(c) >= 2
                sharp, aside = trim_to_sharp(d, c)
                assert is_good(d, sharp).sharp
                assert all(a >= 0 for a in aside)
                assert [x > 0 for x in sharp] == [x > 0 for x in c]


def test_open_step_examples():
    move, nxt = open_step(2, (9, 0, 0, 0))
    assert move == PebbleMove(0, 1, BranchTag.OPEN_STEP)
    assert sum(nxt) == 8 and is_good(2, nxt).sharp
    assert open_step(2, (2, 2, 1, 1)) is None
    for not_sharp in [(2, 1, 1, 1), (2, 0, 1, 1)]:
        with pytest.raises(InvalidConfiguration):
            open_step(2, not_sharp)


@pytest.mark.parametrize("d", [1, 2])
def test_open_step_keeps_sharpness_exhaustive(d):
    n = 1 << d
    for c in itertools.product(range(3**d + 1), repeat=n):
        if not is_good(d, c).sharp:
            continue
        step = open_step(d, c)
        if step is not None:
            assert is_good(d, step[1]).sharp
            assert step[1][step[0].target] == 1


def test_single_large_examples():
    seq = single_large_reduction(2, (5, 1, 1, 0))
    assert _final(2, (5, 1, 1, 0), seq) == (1, 1, 1, 1)
    with pytest.raises(InvalidConfiguration):
        single_large_reduction(2, (6, 1, 1, 1))
    c = (21, 1, 1, 0, 1, 0, 0, 0)
    assert sum(c) == 24 and is_good(3, c).sharp
    seq = single_large_reduction(3, c)
    # 1 kept + 3 distance-2 vertices at 4 each + the antipode at 8
    assert 21 == 1 + 3 * 4 + 8
    assert _final(3, c, seq) == (1,) * 8
    assert sum(2 for m in seq if m.source == 0) - sum(1 for m in seq if m.target == 0) == 20


def test_single_large_inductive_step():
    # ones beyond the neighborhood of the large vertex force trades
    d = 4
    for extra in [(0b0011,), (0b0011, 0b1100), (0b0111, 0b1011, 0b1111, 0b0110)]:
        c = [0] * 16
        for j in range(d):
            c[1 << j] = 1
        for v in extra:
            c[v] = 1
        s = sum(1 for x in c if x) + 1
        c[0] = good_threshold(d, s) - (s - 1)
        c = tuple(c)
        assert is_good(d, c).sharp and classify(c, build_hypercube(d)).closed
        seq = single_large_reduction(d, c)
        final = _final(d, c, seq)
        assert all(final[v] == 1 for v in range(1, 16))


def test_pebble_ancestry_on_a_chain():
    seq = [PebbleMove(0, 1), PebbleMove(0, 1), PebbleMove(1, 3)]
    moves, origins = pebble_ancestry((5, 1, 0, 0), seq, 3)
    assert moves == {0, 1, 2}
    assert sorted(origins) == [0, 0, 0, 0]


def test_residual_arithmetic():
    assert parity_residual((5, 4, 1, 0)) == (1, 2, 1, 0)
    assert [x - r for x, r in zip((5, 4, 1, 0), parity_residual((5, 4, 1, 0)))] == [4, 2, 0, 0]


def _sharp_multi_large(d, rng):
    while True:
        c = random_good_configuration(d, rng, sharp_probability=1.0)
        if sum(1 for x in c if x >= 2) >= 2 and is_good(d, c).sharp:
            return c


@pytest.mark.parametrize("d", [4, 5, 6])
def test_cut_size_identity_and_transfer_postconditions(d):
    rng = np.random.default_rng(d)
    half = 3 ** (d - 1)
    for _ in range(60):
        c = _sharp_multi_large(d, rng)
        for j in range(d):
            cut = analyse_cut(d, c, j)
            top, bot = cut.top_config, cut.bottom_config
            s_top = sum(1 for x in top if x)
            s_bot = sum(1 for x in bot if x)
            if cut.delta > 0:
                assert sum(bot) == half - s_bot + 1 - cut.delta
                assert sum(top) == (half - s_top + 1) + (half + cut.delta - 1)
        res = cut_and_transfer(d, c)
        cut = res.cut
        delta = cut.delta
        assert len(res.transfers) == delta
        top = cut.top_config
        residual = parity_residual(top)
        surplus = [x - r for x, r in zip(top, residual)]
        assert all(r <= x for r, x in zip(residual, top))
        assert [r > 0 for r in residual] == [x > 0 for x in top]
        assert all(s % 2 == 0 for s in surplus)
        if delta:
            assert sum(surplus) >= half + delta - 1 >= 2 * delta
        assert all(res.top_next[v] >= residual[v] for v in range(len(top)))
        assert is_good(d - 1, res.top_next).good
        assert is_good(d - 1, res.bottom_next).good
        g = build_hypercube(d)
        for m in res.transfers:
            assert g.is_adjacent(m.source, m.target)
            assert (m.source >> cut.coordinate) & 1 == cut.top_bit
        # transfers then the two halves reproduce the whole configuration
        after = verify_cover_sequence(g, c, res.transfers).final
        for v in range(1 << (d - 1)):
            assert after[insert_bit(v, cut.coordinate, cut.top_bit)] == res.top_next[v]
            assert after[insert_bit(v, cut.coordinate, 1 - cut.top_bit)] == res.bottom_next[v]


def test_base_case_examples():
    assert base_case_solver(0, (1,)) == []
    # sharp, closed, two large vertices on Q^2: support >= 4, so already a cover
    for c in itertools.product(range(8), repeat=4):
        if is_good(2, c).sharp and sum(1 for x in c if x >= 2) >= 2 and classify(c, build_hypercube(2)).closed:
            assert all(c)
            assert base_case_solver(2, c) == []
    seq = base_case_solver(3, simple_configuration(8, 0, 27))
    assert len(seq) <= 26 and all(m.tag is BranchTag.BASE_SEARCH for m in seq)
    _final(3, simple_configuration(8, 0, 27), seq)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_strategist_agrees_with_decider(d):
    rng = np.random.default_rng(100 + d)
    g = build_hypercube(d)
    for _ in range(100):
        c = random_good_configuration(d, rng)
        t = cover_strategy(d, c)
        assert t.verified and t.fallback_count == 0
        assert is_coverable(g, c).found


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_move_tags_match_logged_branches(d):
    rng = np.random.default_rng(d)
    for _ in range(40):
        t = cover_strategy(d, random_good_configuration(d, rng))
        assert {m.tag.value for m in t.moves} <= t.branch_kinds()


def test_non_good_inputs_use_fallback():
    t = cover_strategy(2, (0, 3, 3, 0))
    assert not is_good(2, (0, 3, 3, 0)).good
    assert t.verified and t.fallback_count == 1
    assert all(m.tag is BranchTag.FALLBACK for m in t.moves)
    with pytest.raises(NotCoverableError):
        cover_strategy(2, (8, 0, 0, 0))


def test_trace_json_round_trip():
    c = _two_antipodal_q4()
    t = cover_strategy(4, c)
    doc = json.loads(json.dumps(t.to_json()))
    assert doc["verified"] and doc["fallback_count"] == 0
    moves = moves_from_json(doc["moves"])
    assert verify_cover_sequence(build_hypercube(4), doc["initial"], moves).is_cover
