from __future__ import annotations

from itertools import product as cartesian

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qft.errors import InvalidComparison, NotInLanguage
from qft.follower import (CONTAINED, CONTAINS, EQUAL, INCOMPARABLE, UNKNOWN, NotStabilized,
                          compare_followers, constraint_counts, extendable_constraints,
                          extendable_count, follower_counts, follower_signature,
                          keller_capacity_counts, language_counts, left_constraints,
                          markov_depth, minimal_forbidden_counts, minimal_forbidden_words,
                          verify_constraint)
from qft.oracles import SftSpec, enumerate_language, make_sft
from qft.words import Alphabet

from conftest import admits_only, even_sofic, fixture, sft


def continuations(o, w, depth):
    """Admitted continuations of w up to length depth (brute force)."""
    out = set()
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for a in range(o.n_symbols):
                if o.admits(w + v + (a,)):
                    nxt.append(v + (a,))
        out.update(nxt)
        frontier = nxt
    return frozenset(out)


def brute_is_constraint(o, w, depth):
    if len(w) == 1:
        return sum(o.admits((a,)) for a in range(o.n_symbols)) >= 2
    return continuations(o, w, depth) != continuations(o, w[1:], depth)


def brute_constraints(o, n, depth):
    return [w for w in enumerate_language(o, n) if brute_is_constraint(o, w, depth)]


def test_even_sofic_constraints():
    o = even_sofic()
    assert constraint_counts(o, 14).counts == [3] + [2 ** (n - 1) for n in range(2, 15)]
    for n in range(1, 7):
        table = left_constraints(o, n)
        assert [c.word for c in table.constraints] == brute_constraints(o, n, 6)
        assert all(verify_constraint(o, c) for c in table.constraints)


def test_constraint_witness_example():
    o = even_sofic()
    c = [c for c in left_constraints(o, 3).constraints if c.word == (0, 1, 1)][0]
    assert c.witness == (1, 0)
    assert o.admits((1, 1, 1, 0)) and not o.admits((0, 1, 1, 1, 0))


def test_depth_mode_agrees_with_exact_mode():
    for o in (even_sofic(), sft("01", "11")):
        plain = admits_only(o)
        deep = constraint_counts(plain, 6, k=6, depth_budget=10**9)
        assert deep.counts == constraint_counts(o, 6).counts and not deep.truncated
    # Keller witnesses for 0^n have length 2n - 1
    k = fixture("keller")
    plain = admits_only(k)
    assert constraint_counts(plain, 4, k=7).counts == constraint_counts(k, 4).counts
    assert constraint_counts(plain, 4, k=6).counts == [3, 5, 11, 14]


def test_depth_mode_budget_cuts_and_flags():
    plain = admits_only(sft("01", "11"))
    seq = constraint_counts(plain, 12, k=12, depth_budget=20_000)
    assert seq.truncated and len(seq.counts) < 12
    assert seq.counts == constraint_counts(sft("01", "11"), len(seq.counts)).counts


@st.composite
def random_sfts(draw):
    k = draw(st.integers(2, 3))
    words = st.lists(st.integers(0, k - 1), min_size=1, max_size=4).map(tuple)
    forb = draw(st.lists(words, min_size=0, max_size=4))
    return k, forb


@given(random_sfts())
def test_sft_constraints_are_shorter_than_forbidden_words(data):
    k, forb = data
    try:
        o = make_sft(SftSpec(Alphabet.of(range(k)), forb))
    except Exception:
        return  # empty shift
    ell = max((len(f) for f in o.info["forbidden"]), default=0)
    counts = constraint_counts(o, 7).counts
    for n, c in enumerate(counts, 1):
        if n >= max(ell, 2):
            assert c == 0
    for n in range(2, 5):
        for c in left_constraints(o, n).constraints:
            assert len(c.word) < ell


def test_compare_followers():
    o = even_sofic()
    s01 = follower_signature(o, (0, 1))
    s1 = follower_signature(o, (1,))
    cmp = compare_followers(s01, s1)
    assert cmp.relation == CONTAINED
    assert cmp.witness == (0,)
    assert compare_followers(s1, s01).relation == CONTAINS
    assert compare_followers(s1, follower_signature(o, (1, 1))).relation == EQUAL
    assert compare_followers(s1, follower_signature(o, (2,))).relation == INCOMPARABLE
    empty = follower_signature(o, ())
    assert compare_followers(s1, empty).relation == CONTAINED


def test_compare_errors_and_depth_mode():
    o = even_sofic()
    with pytest.raises(NotInLanguage):
        follower_signature(o, (0, 1, 0))
    p = admits_only(o)
    with pytest.raises(InvalidComparison):
        compare_followers(follower_signature(p, (1,), 2), follower_signature(p, (1,), 3))
    a, b = follower_signature(p, (0, 1), 3), follower_signature(p, (1,), 3)
    cmp = compare_followers(a, b)
    assert cmp.relation == CONTAINED and cmp.witness == (0,)
    same = compare_followers(follower_signature(p, (1,), 3), follower_signature(p, (1, 1), 3))
    assert same.relation == UNKNOWN


def brute_minimal_forbidden(o, n):
    return [u for u in cartesian(range(o.n_symbols), repeat=n)
            if not o.admits(u) and o.admits(u[:-1]) and o.admits(u[1:])]


@pytest.mark.parametrize("name,n_max", [("golden", 8), ("even_sofic", 7), ("keller", 7),
                                        ("sigma1", 5), ("beta_golden", 8), ("tent_3_2", 8)])
def test_minimal_forbidden_counts(name, n_max):
    o = fixture(name)
    seq = minimal_forbidden_counts(o, n_max)
    brute = [len(brute_minimal_forbidden(o, n)) for n in range(2, n_max + 1)]
    assert seq.counts == brute
    assert minimal_forbidden_words(o, 4) == brute_minimal_forbidden(o, 4)


def test_even_sofic_minimal_forbidden_pattern():
    seq = minimal_forbidden_counts(even_sofic(), 8)
    assert seq.counts == [0, 2, 0, 8, 0, 32, 0]


def brute_follower_count(o, n, depth):
    return len({(w[-1], continuations(o, w, depth)) for w in enumerate_language(o, n)})


@pytest.mark.parametrize("name", ["golden", "even_sofic", "beta_golden"])
def test_follower_counts(name):
    o = fixture(name)
    seq = follower_counts(o, 6)
    assert seq.counts == [brute_follower_count(o, n, 6) for n in range(1, 7)]


def test_even_sofic_follower_counts_stabilize():
    assert follower_counts(even_sofic(), 10).counts[3:] == [7] * 7


def brute_capacity(o, n, depth):
    best = 0
    for b in range(o.n_symbols):
        if not o.admits((b,)):
            continue
        cnt = 0
        for a in enumerate_language(o, n):
            if o.admits((b,) + a) and continuations(o, (b,) + a, depth) != continuations(
                    o, a, depth):
                cnt += 1
        best = max(best, cnt)
    return best


def test_capacity_counts_match_brute_force():
    o = even_sofic()
    assert keller_capacity_counts(o, 6).counts == [brute_capacity(o, n, 5) for n in range(1, 7)]
    k = fixture("keller")
    assert keller_capacity_counts(k, 3).counts == [brute_capacity(k, n, 2 * n + 1)
                                                   for n in range(1, 4)]


def test_keller_capacity_bounds_constraints():
    o = fixture("keller")
    cs = constraint_counts(o, 13).counts
    cap = keller_capacity_counts(o, 12).counts
    for n in range(1, 13):
        assert cs[n] <= o.n_symbols * cap[n - 1]


def brute_extendable(o, n, M, weak, depth):
    cons = set(brute_constraints(o, n, depth))
    out = []
    for w in sorted(cons):
        for B in enumerate_language(o, M):
            if B[M - n:] != w:
                continue
            if weak:
                ok = brute_is_constraint(o, B, depth)
            else:
                ok = all(brute_is_constraint(o, B[i:], depth) for i in range(M - n + 1))
            if ok:
                out.append(w)
                break
    return out


@pytest.mark.parametrize("weak", [False, True])
def test_extendable_constraints_match_brute_force(weak):
    o = even_sofic()
    for n, M in [(1, 3), (2, 4), (2, 5), (3, 6)]:
        assert extendable_constraints(o, n, M, weak=weak) == brute_extendable(o, n, M, weak, 6)
    k = fixture("keller")
    for n, M in [(1, 3), (2, 4), (3, 5)]:
        assert extendable_constraints(k, n, M, weak=weak) == brute_extendable(k, n, M, weak, 8)


def test_even_sofic_has_no_extendable_constraints():
    o = even_sofic()
    for M in (5, 10, 20):
        assert extendable_count(o, 1, M) == 0
        assert extendable_count(o, 3, M) == 0
    assert extendable_count(o, 1, 5, weak=True) == 2


def test_markov_depth():
    o = even_sofic()
    assert markov_depth(o, (0, 1, 1, 1)) == 3
    assert markov_depth(o, (1, 1)) == 0
    assert isinstance(markov_depth(o, (1,)), NotStabilized)
    assert markov_depth(o, (0,)) == 0
    with pytest.raises(NotInLanguage):
        markov_depth(o, (0, 1, 0))


def test_language_counts():
    assert language_counts(even_sofic(), 6).counts == [3, 9, 25, 69, 185, 493]
    assert language_counts(admits_only(sft("01", "11")), 6).counts == [2, 3, 5, 8, 13, 21]
