from __future__ import annotations

from fractions import Fraction
from itertools import product as cartesian

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qft.blocks import ListedFamily, family
from qft.errors import EmptyShift, InvalidSpec
from qft.oracles import (BetaSpec, SftSpec, SoficSpec, enumerate_language, full_shift,
                         make_beta, make_block_code, make_pwm, make_sofic, naive_language,
                         product, reverse, union)
from qft.pwm import PwmSpec, boundary_cylinder_count, cylinder
from qft.words import Alphabet

from conftest import even_sofic, fixture, sft


def words(k, n_max):
    for n in range(n_max + 1):
        yield from cartesian(range(k), repeat=n)


def test_sft_examples():
    g = sft("01", "11")
    assert g.admits((0, 1, 0, 1))
    assert not g.admits((0, 1, 1, 0))
    t = sft("01", "111")
    assert t.admits((1, 1, 0, 1, 1, 0))
    assert not t.admits((0, 1, 1, 1, 0))
    f = sft("01")
    assert all(f.admits(w) for w in words(2, 8))


def test_sft_handle_is_suffix():
    t = sft("01", "111")
    assert t.exact_follower_handle((0, 1, 1, 0, 1)) == (0, 1)
    assert t.exact_follower_handle((1,)) == (1,)


def test_sft_normalizes_to_antichain():
    spec = SftSpec(Alphabet.of("01"), [(1, 1), (0, 1, 1), (1, 1, 1)])
    assert spec.forbidden == [(1, 1)]
    assert spec.max_forbidden_len == 2


def test_sft_empty_and_invalid():
    with pytest.raises(EmptyShift):
        sft("01", "0", "1")
    with pytest.raises(InvalidSpec):
        SftSpec(Alphabet.of("01"), [(2,)])


def test_even_sofic_examples():
    o = even_sofic()
    assert o.admits((0, 1, 2, 0))
    assert not o.admits((0, 1, 0))
    assert o.exact_follower_handle((0,)) == ("E",)


def test_golden_graph_matches_sft():
    g = sft("01", "11")
    s = fixture("beta_golden")
    assert all(g.admits(w) == s.admits(w) for w in words(2, 10))


def parry_brute(digits, w):
    """Every suffix of w is lexicographically at most the expansion of 1."""
    return all(list(w[i:]) <= digits[:len(w) - i] for i in range(len(w)))


def test_beta_shifts():
    two = make_beta(BetaSpec([], [1]))
    assert all(two.admits(w) for w in words(2, 8))
    gold = make_beta(BetaSpec([1], [0, 1]))
    g = sft("01", "11")
    assert all(gold.admits(w) == g.admits(w) for w in words(2, 12))
    trib = BetaSpec([], [1, 1, 0])
    o = make_beta(trib)
    d = trib.digits(12)
    for n in range(1, 11):
        brute = sum(parry_brute(d, w) for w in cartesian(range(2), repeat=n))
        assert len(enumerate_language(o, n)) == brute


def test_beta_rejects_invalid_expansion():
    with pytest.raises(InvalidSpec):
        BetaSpec([0, 1], [0])  # leading digit 0
    with pytest.raises(InvalidSpec):
        BetaSpec([1, 0], [1])  # the tail 1 1 1 ... exceeds 1 0 1 1 ...


def backward_cylinder(spec, w):
    """<w> computed backwards: A_0 intersected with the preimage of <w[1:]>."""
    lo, hi = spec.breakpoints[0], spec.breakpoints[-1]
    for a in reversed(w):
        s, c = spec.pieces[a]
        plo, phi = spec.breakpoints[a], spec.breakpoints[a + 1]
        u, v = sorted(((lo - c) / s, (hi - c) / s))
        lo, hi = max(u, plo), min(v, phi)
        if lo >= hi:
            return None
    return lo, hi


def test_pwm_doubling_is_full_shift():
    o = fixture("pwm_doubling")
    for n in range(1, 13):
        assert len(enumerate_language(o, n)) == 2 ** n


def test_pwm_tent_matches_backward_intervals():
    o = fixture("tent_3_2")
    spec = o.info["pwm"]
    for n in range(1, 13):
        brute = [w for w in cartesian(range(2), repeat=n) if backward_cylinder(spec, w)]
        assert enumerate_language(o, n) == brute
    for w in enumerate_language(o, 6):
        assert cylinder(spec, w) == backward_cylinder(spec, w)


def test_pwm_single_piece():
    spec = PwmSpec.make([0, 1], [(Fraction(1, 2), 0)])
    o = make_pwm(spec)
    assert [len(enumerate_language(o, n)) for n in range(1, 6)] == [1] * 5
    assert all(boundary_cylinder_count(spec, n) <= 2 for n in range(1, 8))


def test_pwm_invalid():
    with pytest.raises(InvalidSpec):
        PwmSpec.make([0, 0, 1], [(2, 0), (2, -1)])
    with pytest.raises(InvalidSpec):
        PwmSpec.make([0, 1], [(0, 0)])
    with pytest.raises(InvalidSpec):
        PwmSpec.make([0, 1], [(2, 0)])  # image leaves [0, 1]


def boundary_brute(spec, n):
    pts = set()
    for a in range(len(spec.pieces)):
        s, c = spec.pieces[a]
        pts.update((s * spec.breakpoints[a] + c, s * spec.breakpoints[a + 1] + c))
    count = 0
    for w in cartesian(range(len(spec.pieces)), repeat=n):
        cyl = backward_cylinder(spec, w)
        if cyl and any(cyl[0] <= p <= cyl[1] for p in pts):
            count += 1
    return count


def test_boundary_counts():
    dbl = fixture("pwm_doubling").info["pwm"]
    assert all(boundary_cylinder_count(dbl, n) <= 4 for n in range(1, 12))
    three = PwmSpec.make([0, Fraction(1, 3), Fraction(3, 4), 1],
                         [(Fraction(3, 2), Fraction(1, 4)), (-2, Fraction(3, 2)),
                          (Fraction(5, 2), Fraction(-3, 2))])
    for n in range(1, 9):
        assert boundary_cylinder_count(three, n) == boundary_brute(three, n)


def keller_blocks(bound):
    for n in range(1, bound + 1):
        for y in cartesian((1, 2), repeat=n):
            yield y
            yield (0,) * n + y + y


def test_keller_matches_listed_blocks():
    o = fixture("keller")
    assert o.admits((0, 1, 2, 1, 2))
    bound = 6
    listed = make_block_code(ListedFamily(o.alphabet, list(keller_blocks(bound))))
    for n in range(1, bound + 1):
        assert enumerate_language(o, n) == enumerate_language(listed, n)
    fam = family("keller")
    for w in words(3, 6):
        assert fam.admits(w) == o.admits(w)


def sigma1_forbidden(w):
    """Contains (a|b)(0|1|2)^n(a|b)^(n^2+1) for some n >= 1."""
    for i in range(len(w)):
        if w[i] < 3:
            continue
        j = i + 1
        while j < len(w) and w[j] < 3:
            j += 1
        n = j - i - 1
        if n < 1:
            continue
        k = 0
        while j + k < len(w) and w[j + k] >= 3:
            k += 1
        if k >= n * n + 1:
            return True
    return False


def test_sigma1_language_is_defined_by_its_forbidden_words():
    o = fixture("sigma1")
    assert not o.admits((3, 0, 3, 3))
    assert o.admits((3, 0, 3))
    for n in range(1, 8):
        brute = [w for w in cartesian(range(5), repeat=n) if not sigma1_forbidden(w)]
        assert enumerate_language(o, n) == brute


def test_listed_family_single_block():
    A = Alphabet.of("ab")
    o = make_block_code(ListedFamily(A, [(0, 1)]))
    assert [len(enumerate_language(o, n)) for n in range(1, 7)] == [2, 2, 2, 2, 2, 2]
    assert not o.admits((0, 0))


@pytest.mark.parametrize("name", ["full2", "golden", "even_sofic", "keller", "sigma1",
                                  "pwm_doubling", "beta_golden", "tent_3_2",
                                  "product_golden_full2", "union_golden_full2"])
def test_pruned_enumeration_equals_naive_filter(name):
    o = fixture(name)
    top = 6 if o.n_symbols <= 3 else 5
    for n in range(top + 1):
        assert enumerate_language(o, n) == naive_language(o, n)


@pytest.mark.parametrize("name", ["golden", "even_sofic", "keller", "sigma1", "tent_3_2"])
def test_factor_closure_and_extension(name):
    o = fixture(name)
    for w in enumerate_language(o, 6):
        for i in range(len(w)):
            for j in range(i, len(w) + 1):
                assert o.admits(w[i:j])
        assert any(o.admits((a,) + w) for a in range(o.n_symbols))
        assert any(o.admits(w + (a,)) for a in range(o.n_symbols))


def test_reverse():
    h = sft("01", "101", "1001")
    r = reverse(h)
    rr = reverse(r)
    for w in words(2, 8):
        assert r.admits(w) == h.admits(w[::-1])
        assert rr.admits(w) == h.admits(w)
    f = reverse(full_shift(2))
    assert all(f.admits(w) for w in words(2, 6))


def test_reverse_changes_constraint_counts():
    from qft.follower import constraint_counts
    A = Alphabet.of("01")
    edges = [("s", "s", 0), ("s", "p", 1), ("p", "q", 0), ("q", "s", 0), ("q", "q", 1)]
    o = make_sofic(SoficSpec(A, ["s", "p", "q"], edges))
    assert constraint_counts(o, 6).counts == [2, 2, 2, 2, 2, 2]
    assert constraint_counts(reverse(o), 6).counts == [2, 1, 1, 1, 1, 1]


def test_product_and_union_counts():
    g, f = sft("01", "11"), full_shift(2)
    p = product(g, f)
    u = union(g, f, disjoint=True)
    s = union(g, g)
    for n in range(1, 9):
        lg, lf = len(enumerate_language(g, n)), len(enumerate_language(f, n))
        assert len(enumerate_language(p, n)) == lg * lf
        assert len(enumerate_language(u, n)) == lg + lf
        assert len(enumerate_language(s, n)) == lg
    shared = union(g, f)
    for n in range(1, 9):
        assert len(enumerate_language(shared, n)) == 2 ** n


def test_union_needs_shared_alphabet():
    with pytest.raises(InvalidSpec):
        union(full_shift(2), full_shift(3))


@given(st.lists(st.sampled_from(["0", "1", "2"]), min_size=0, max_size=7))
def test_even_sofic_admits_matches_parity_rule(labels):
    o = even_sofic()
    w = tuple(int(x) for x in labels)
    # runs of nonzero symbols strictly between two zeros have even length
    zeros = [i for i, a in enumerate(w) if a == 0]
    ok = all((j - i - 1) % 2 == 0 for i, j in zip(zeros, zeros[1:]))
    assert o.admits(w) == ok
