import itertools

import pytest
from hypothesis import given, strategies as st

from pebblecover.errors import IllegalMove, InvalidConfiguration, SpecSyntaxError, VerificationFailure
from pebblecover.graphs import build_complete, build_hypercube, build_path
from pebblecover.pebbling import (
    BranchTag,
    PebbleMove,
    apply_move,
    classify,
    format_moves,
    is_good,
    parse_configuration,
    parse_moves,
    simple_bound,
    simple_configuration,
    simple_cost,
    size,
    support,
    verify_cover_sequence,
)


def test_size_examples():
    assert size((0, 0, 0, 0)) == 0
    assert size(simple_configuration(8, 3, 27)) == 27
    assert size((1, 2, 3)) == 6


def test_support_examples():
    assert support((0, 3, 0, 1)) == {1, 3}
    assert support((1,) * 8) == set(range(8))
    assert support((0,) * 4) == frozenset()


def test_classify_examples(q2, q3):
    f = classify((8, 0, 0, 0), q2)
    assert f.simple and f.even and f.open and not f.cover and not f.closed
    f = classify((1,) * 8, q3)
    assert f.cover and f.closed and not f.simple and not f.even
    # 4-cycle 0-1-3-2-0: the only large vertex 0 has neighbors 1 and 2, both nonempty
    f = classify((2, 1, 1, 0), q2)
    assert f.closed and not f.open
    f = classify((1, 2, 1, 0), q2)
    assert f.open
    with pytest.raises(InvalidConfiguration):
        classify((1, 1), q2)


@given(st.lists(st.integers(0, 4), min_size=8, max_size=8))
def test_classify_consistency(c):
    f = classify(c, build_hypercube(3))
    assert f.open != f.closed
    if f.cover:
        assert f.closed


def test_is_good_examples():
    assert is_good(2, (9, 0, 0, 0)) == (True, True, 0)
    assert is_good(1, (1, 1)).sharp
    assert is_good(2, (1, 1, 1, 1)) == (False, False, -2)
    with pytest.raises(InvalidConfiguration):
        is_good(2, (1, 1, 1))


@pytest.mark.parametrize("d", [1, 2])
def test_slack_increments_exhaustive(d):
    n = 1 << d
    for c in itertools.product(range(4), repeat=n):
        base = is_good(d, c).slack
        for v in range(n):
            bumped = list(c)
            bumped[v] += 1
            assert is_good(d, bumped).slack - base == (1 if c[v] else 2)


def test_apply_move_examples():
    p2 = build_path(2)
    assert apply_move((2, 0), PebbleMove(0, 1), p2) == (0, 1)
    assert apply_move((3, 1), PebbleMove(0, 1), p2) == (1, 2)
    with pytest.raises(IllegalMove):
        apply_move((1, 0), PebbleMove(0, 1), p2)
    with pytest.raises(IllegalMove):
        apply_move((4, 0, 0), PebbleMove(0, 2), build_path(3))


@given(st.lists(st.integers(0, 5), min_size=8, max_size=8), st.integers(0, 7), st.integers(0, 2))
def test_move_conservation(c, u, j):
    g = build_hypercube(3)
    w = u ^ (1 << j)
    if c[u] < 2:
        return
    out = apply_move(c, PebbleMove(u, w), g)
    assert size(out) == size(c) - 1
    changed = {v: out[v] - c[v] for v in range(8) if out[v] != c[v]}
    assert changed == {u: -2, w: 1}


def test_verify_examples(q2):
    assert verify_cover_sequence(q2, (1, 1, 1, 1), []).is_cover
    # (5,1,1,0) -> 0->1 gives (3,2,1,0) -> 1->3 gives (3,0,1,1)
    res = verify_cover_sequence(q2, (5, 1, 1, 0), [PebbleMove(0, 1), PebbleMove(1, 3)])
    assert res.final == (3, 0, 1, 1) and not res.is_cover
    with pytest.raises(VerificationFailure) as exc:
        verify_cover_sequence(build_path(2), (1, 0), [PebbleMove(0, 1)])
    assert exc.value.index == 0


@given(st.lists(st.integers(0, 6), min_size=4, max_size=4), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 1)), max_size=8))
def test_verify_agrees_with_folding(c, steps):
    g = build_hypercube(2)
    seq = [PebbleMove(u, u ^ (1 << j)) for u, j in steps]
    cur = tuple(c)
    failed_at = None
    for i, m in enumerate(seq):
        try:
            cur = apply_move(cur, m, g)
        except IllegalMove:
            failed_at = i
            break
    if failed_at is None:
        assert verify_cover_sequence(g, c, seq).final == cur
    else:
        with pytest.raises(VerificationFailure) as exc:
            verify_cover_sequence(g, c, seq)
        assert exc.value.index == failed_at


def test_simple_cost_examples():
    assert simple_cost(build_hypercube(3), 5) == 27
    p3 = build_path(3)
    assert simple_cost(p3, 0) == 7 and simple_cost(p3, 1) == 5
    assert simple_bound(p3) == (7, 0)
    assert simple_cost(build_complete(4), 2) == 7


@pytest.mark.parametrize("d", range(7))
def test_simple_cost_cube_is_power_of_three(d):
    g = build_hypercube(d)
    assert {simple_cost(g, v) for v in range(g.vertex_count)} == {3**d}


def test_text_formats():
    assert parse_configuration("simple:2:7", 4) == (0, 0, 7, 0)
    assert parse_configuration("ones", 3) == (1, 1, 1)
    assert parse_configuration("1 2  3", 3) == (1, 2, 3)
    for bad in ["1 2", "simple:9:1", "a b c", "-1 0 0"]:
        with pytest.raises(SpecSyntaxError):
            parse_configuration(bad, 3)
    seq = [PebbleMove(0, 1, BranchTag.OPEN_STEP), PebbleMove(1, 3)]
    assert format_moves(seq) == "0 -> 1 OPEN_STEP\n1 -> 3"
    assert parse_moves(format_moves(seq)) == seq
