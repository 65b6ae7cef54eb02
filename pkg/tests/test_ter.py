import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lev, move, optimal_shift_edits
from subscore.ter import (
    INF,
    PLAIN,
    TIME_OVERLAP,
    EditCounts,
    MatchPredicate,
    apply_shift,
    levenshtein_counts,
    levenshtein_ops,
    shift_search,
    spans_overlap,
    ter_with_shifts,
)
from subscore.tokens import EOB, EOL, WORD, Token


def words(text, span=(0, 1000)):
    return [Token(w, WORD, 0, span) for w in text.split()]


def timed(items):
    """Tokens from (surface, start, end); '<eol>'/'<eob>' become breaks."""
    kinds = {"<eol>": EOL, "<eob>": EOB}
    return [Token(s, kinds.get(s, WORD), 0, (a, b)) for s, a, b in items]


def overlap_cost(h, r):
    if not (h.span[0] < r.span[1] and r.span[0] < h.span[1]):
        return None
    if (h.kind == WORD) != (r.kind == WORD):
        return None
    return 0 if h.key() == r.key() else 1


def test_counts_arithmetic():
    a = EditCounts(1, 2, 3, 4, 10)
    assert a.edits == 10
    assert (a + a).ref_length == 20
    assert a.rate() == 1.0
    assert EditCounts(0, 0, 0, 0, 0).rate() == 0.0


def test_identity_and_empty():
    seq = words("a b c d")
    assert ter_with_shifts(seq, seq) == EditCounts(0, 0, 0, 0, 4)
    assert ter_with_shifts([], seq) == EditCounts(0, 4, 0, 0, 4)
    assert ter_with_shifts(seq, []) == EditCounts(4, 0, 0, 0, 0)
    assert ter_with_shifts([], []) == EditCounts(0, 0, 0, 0, 0)


def test_single_shift_fixes_reordering():
    counts = ter_with_shifts(words("c d a b"), words("a b c d"))
    assert (counts.shifts, counts.edits) == (1, 1)


def test_apply_shift_matches_oracle_move():
    seq = list("abcdefg")
    for start in range(7):
        for length in range(1, 8 - start):
            for dest in range(8 - length):
                assert apply_shift(seq, start, length, dest) == list(move(tuple(seq), start, length, dest))


def test_levenshtein_ops_consistent():
    h, r = words("a x c d e"), words("a b c e f")
    ops = levenshtein_ops(h, r)
    assert ops.count("M") + ops.count("S") + ops.count("I") == len(h)
    assert ops.count("M") + ops.count("S") + ops.count("D") == len(r)
    assert levenshtein_counts(h, r).edits == lev([t.surface for t in h], [t.surface for t in r]) == 3


def test_spans_overlap_is_strict():
    assert spans_overlap((0, 10), (5, 15))
    assert not spans_overlap((0, 10), (10, 20))
    assert spans_overlap((0, 10), (2, 3))


@given(st.tuples(st.integers(0, 50), st.integers(1, 50)), st.tuples(st.integers(0, 50), st.integers(1, 50)))
def test_spans_overlap_symmetric(a, b):
    a, b = (a[0], a[0] + a[1]), (b[0], b[0] + b[1])
    assert spans_overlap(a, b) == spans_overlap(b, a)


def test_word_never_substitutes_break():
    h = timed([("a", 0, 10), ("<eol>", 0, 10)])
    r = timed([("<eol>", 0, 10), ("b", 0, 10)])
    assert TIME_OVERLAP.substitution_cost(h[0], r[0]) >= INF
    counts = levenshtein_counts(h, r, TIME_OVERLAP)
    assert counts.substitutions == 0
    assert counts.edits == 2  # the break matches, one deletion, one insertion


def test_no_match_without_overlap():
    h = timed([("a", 0, 10)])
    r = timed([("a", 10, 20)])
    assert levenshtein_counts(h, r, TIME_OVERLAP) == EditCounts(1, 1, 0, 0, 1)
    assert levenshtein_counts(h, r, PLAIN).edits == 0


def test_predicate_kind_validated():
    with pytest.raises(ValueError):
        MatchPredicate("fuzzy")


def random_timed(rng, n, alphabet):
    out = []
    for _ in range(n):
        s = rng.choice(alphabet)
        a = rng.randint(0, 6)
        out.append((s, a, a + rng.randint(1, 4)))
    return timed(out)


def test_levenshtein_matches_oracle_under_time_overlap():
    rng = random.Random(11)
    for _ in range(300):
        h = random_timed(rng, rng.randint(0, 9), ["a", "b", "<eol>", "<eob>"])
        r = random_timed(rng, rng.randint(0, 9), ["a", "b", "<eol>", "<eob>"])
        assert levenshtein_counts(h, r, TIME_OVERLAP).edits == lev(h, r, overlap_cost)


def check_shift_search(h, r, pred, cost=None):
    """Replay the applied shifts with the oracle: each one must lower the distance."""
    result = shift_search(h, r, pred)
    order = list(range(len(h)))
    before = lev([h[k] for k in order], r, cost)
    assert result.initial_distance == before
    for shift in result.shifts:
        order = apply_shift(order, shift.start, shift.length, shift.dest)
        after = lev([h[k] for k in order], r, cost)
        assert shift.distance_before == before
        assert shift.distance_after == after < before
        before = after
    assert order == result.order
    assert result.counts.edits == before + len(result.shifts)
    return result


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from("abc"), max_size=7), st.lists(st.sampled_from("abc"), max_size=7))
def test_greedy_shifts_against_exhaustive_search(h, r):
    hyp, ref = words(" ".join(h)), words(" ".join(r))
    result = check_shift_search(hyp, ref, PLAIN)
    assert result.counts.edits >= optimal_shift_edits(h, r)
    assert result.counts.edits <= lev(h, r)


def test_shifts_under_time_overlap_reduce_distance():
    rng = random.Random(5)
    for _ in range(200):
        h = random_timed(rng, rng.randint(0, 8), ["a", "b", "c", "<eol>"])
        r = random_timed(rng, rng.randint(0, 8), ["a", "b", "c", "<eol>"])
        result = check_shift_search(h, r, TIME_OVERLAP, overlap_cost)
        assert result.counts.edits <= lev(h, r, overlap_cost)


def test_shift_limits_respected():
    h = words("x " * 30 + "a b")
    r = words("a b " + "x " * 30)
    free = shift_search(h, r)
    assert free.counts.shifts == 1
    assert shift_search(h, r, max_shift_distance=5).counts.shifts == 0
    long_h, long_r = words("q " + " ".join("w%d" % k for k in range(12))), words(" ".join("w%d" % k for k in range(12)) + " q")
    assert all(s.length <= 3 for s in shift_search(long_h, long_r, max_shift_size=3).shifts)
