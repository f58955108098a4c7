"""Follower-set comparisons, left constraints and related word counts.

Conventions.  ``fol(w)`` consists of the one-sided sequences that start
with the last letter of ``w`` and continue it; a follower machine state
encodes the continuation set ``C(w)``, so ``fol(w)`` is determined by
``(last letter, state)``.  A word ``w`` of length ``n >= 2`` is a left
constraint when ``fol(w)`` is strictly smaller than ``fol(w[1:])``; both
followers share the last letter, so this is a comparison of states.  A
single letter ``c`` is a constraint when another letter is admitted
(``fol(c) = [c]`` misses it); its witness is that other letter, called a
first-letter witness below.

Machines flagged ``complete`` give exact answers.  Otherwise follower
comparisons are made at a depth ``k`` and only certified strict
inclusions are reported, so counts are lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from .automata import pair_witness, reachable_states
from .counting import DEFAULT_BUDGET, CountSequence, level_states, pair_counts
from .errors import BudgetExceeded, InvalidComparison, NotInLanguage
from .oracles import LanguageOracle, enumerate_language
from .words import Word

EQUAL = "Equal"
CONTAINED = "StrictlyContained"
CONTAINS = "StrictlyContains"
INCOMPARABLE = "Incomparable"
UNKNOWN = "UnknownAtDepth"

WITNESS_BUDGET = 20000
DEPTH_BUDGET = 2_000_000


@dataclass(frozen=True)
class FollowerSignature:
    """Certificate for follower comparisons.

    ``kind`` is ``"exact"`` (``key`` = machine state, ``handle`` = canonical
    state list) or ``"depth"`` (``key`` = sorted admitted continuations of
    length ``depth``).
    """

    kind: str
    source_word: Word
    last: int | None
    key: Hashable
    depth: int | None = None
    handle: Hashable = None
    oracle: LanguageOracle | None = field(default=None, compare=False, repr=False)

    @property
    def profile(self) -> tuple[Word, ...] | None:
        return self.key if self.kind == "depth" else None


@dataclass(frozen=True)
class Comparison:
    relation: str
    witness: Word | None = None
    first_letter: bool = False


@dataclass(frozen=True)
class Constraint:
    word: Word
    witness: Word | None
    certified: bool
    first_letter: bool = False


@dataclass
class ConstraintTable:
    n: int
    constraints: list[Constraint]
    depth: int | None
    exact: bool

    @property
    def count(self) -> int:
        return len(self.constraints)


# ---------------------------------------------------------------- signatures

def _continuations(o: LanguageOracle, w: Word, k: int) -> tuple[Word, ...]:
    """Sorted v of length k with w·v admitted."""
    out = []
    m = o.machine
    if m is not None:
        s0 = m.run(w)
        stack = [((), s0)]
        while stack:
            v, s = stack.pop()
            if len(v) == k:
                out.append(v)
                continue
            for a in reversed(range(o.n_symbols)):
                t = m.step(s, a)
                if t is not None:
                    stack.append((v + (a,), t))
        return tuple(out)
    stack2: list[Word] = [()]
    while stack2:
        v = stack2.pop()
        if len(v) == k:
            out.append(v)
            continue
        for a in reversed(range(o.n_symbols)):
            if o.admits(w + v + (a,)):
                stack2.append(v + (a,))
    return tuple(out)


def follower_signature(o: LanguageOracle, w: Word, k: int | None = None) -> FollowerSignature:
    w = tuple(w)
    if w and not o.admits(w):
        raise NotInLanguage(f"{o.alphabet.format(w)} is not admitted")
    last = w[-1] if w else None
    if o.has_exact_followers:
        return FollowerSignature("exact", w, last, o.state(w),
                                 handle=o.exact_follower_handle(w), oracle=o)
    depth = k if k is not None else max(len(w), 1)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return FollowerSignature("depth", w, last, _continuations(o, w, depth), depth=depth, oracle=o)


def _first_other_letter(o: LanguageOracle, c: int) -> int | None:
    for b in range(o.n_symbols):
        if b != c and o.admits((b,)):
            return b
    return None


def _profile_witness(o: LanguageOracle, small: Word, big_profile) -> Word:
    """Shortest, then lexicographically first, prefix v of a profile word with small·v dead."""
    k = len(big_profile[0])
    for j in range(1, k + 1):
        for v in big_profile:
            if not o.admits(small + v[:j]):
                return v[:j]
    raise AssertionError("profiles differ but no witness prefix")


def compare_followers(s1: FollowerSignature, s2: FollowerSignature) -> Comparison:
    """Relation of fol(s1) to fol(s2); witnesses lie in fol(s2) \\ fol(s1) (or the reverse)."""
    if s1.kind != s2.kind or s1.oracle is not s2.oracle or s1.depth != s2.depth:
        raise InvalidComparison("signatures of different kinds, depths or oracles")
    o = s1.oracle
    if s1.last is None and s2.last is None:
        return Comparison(EQUAL)
    if s1.last is not None and s2.last is not None and s1.last != s2.last:
        return Comparison(INCOMPARABLE)
    if s1.last is None or s2.last is None:
        # one side is the empty word, whose follower is everything
        flip = s1.last is None
        w = s2.source_word if flip else s1.source_word
        c = w[-1]
        b = _first_other_letter(o, c)
        if b is not None:
            return Comparison(CONTAINS if flip else CONTAINED, (b,), first_letter=True)
        # single admitted letter: compare with fol(c)
        t = follower_signature(o, (c,), s1.depth)
        inner = compare_followers(follower_signature(o, w, s1.depth), t)
        if inner.relation == CONTAINED and flip:
            return Comparison(CONTAINS, inner.witness)
        return inner
    if s1.key == s2.key:
        return Comparison(EQUAL if s1.kind == "exact" else UNKNOWN)
    if s1.kind == "exact":
        m = o.machine
        out12 = pair_witness(m, s1.key, s2.key, o.n_symbols, WITNESS_BUDGET)  # in s2 only
        out21 = pair_witness(m, s2.key, s1.key, o.n_symbols, WITNESS_BUDGET)  # in s1 only
        if out12 is False or out21 is False:
            return Comparison(UNKNOWN)
        if out12 is not None and out21 is None:
            return Comparison(CONTAINED, out12)
        if out21 is not None and out12 is None:
            return Comparison(CONTAINS, out21)
        return Comparison(INCOMPARABLE, out12)
    p1, p2 = set(s1.key), set(s2.key)
    if p1 < p2:
        return Comparison(CONTAINED, _profile_witness(o, s1.source_word, sorted(p2 - p1)))
    if p2 < p1:
        return Comparison(CONTAINS, _profile_witness(o, s2.source_word, sorted(p1 - p2)))
    return Comparison(INCOMPARABLE, _profile_witness(o, s1.source_word, sorted(p2 - p1)))


def bounded_witness(o: LanguageOracle, w: Word, u: Word, k: int, work: list | None = None):
    """Shortest-lex v with |v| <= k, u·v admitted and w·v not admitted (None if none).

    ``work[0]``, when given, is increased by a cost estimate in units of
    letters read by ``admits``.
    """
    m = o.machine
    if m is not None:
        p, q = m.run(w), m.run(u)
        if p is None or q is None or p == q:
            return None
        seen = {(p, q)}
        frontier = [((p, q), ())]
        for _ in range(k):
            nxt = []
            if work is not None:
                work[0] += 25 * o.n_symbols * len(frontier)  # machine steps cost more
            for (s, t), v in frontier:
                for a in range(o.n_symbols):
                    t2 = m.step(t, a)
                    if t2 is None:
                        continue
                    s2 = m.step(s, a)
                    if s2 is None:
                        return v + (a,)
                    if s2 != t2 and (s2, t2) not in seen:
                        seen.add((s2, t2))
                        nxt.append(((s2, t2), v + (a,)))
            frontier = nxt
        return None
    frontier2: list[Word] = [()]
    for _ in range(k):
        nxt2 = []
        if work is not None:
            # each admits call re-reads the whole word
            work[0] += o.n_symbols * (len(w) + k) * len(frontier2)
        for v in frontier2:
            for a in range(o.n_symbols):
                va = v + (a,)
                if not o.admits(u + va):
                    continue
                if not o.admits(w + va):
                    return va
                nxt2.append(va)
        frontier2 = nxt2
    return None


# ---------------------------------------------------------------- constraints

def _letters(o: LanguageOracle) -> list[int]:
    return [a for a in range(o.n_symbols) if o.admits((a,))]


def left_constraints(o: LanguageOracle, n: int, k: int | None = None,
                     work: list | None = None) -> ConstraintTable:
    """All (certified) left constraints of length n in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    depth = k if k is not None else n
    letters = _letters(o)
    exact = o.has_exact_followers
    if n == 1:
        cs = []
        if len(letters) >= 2:
            for c in letters:
                b = next(x for x in letters if x != c)
                cs.append(Constraint((c,), (b,), True, first_letter=True))
        return ConstraintTable(1, cs, None if exact else depth, exact)
    out: list[Constraint] = []
    if exact:
        m = o.machine
        s0 = m.start
        stack = [((c,), m.step(s0, c), s0) for c in reversed(letters)]
        while stack:
            w, p, q = stack.pop()
            if p == q:
                continue
            if len(w) == n:
                v = pair_witness(m, p, q, o.n_symbols, WITNESS_BUDGET)
                out.append(Constraint(w, v if v else None, bool(v)))
                continue
            for a in reversed(range(o.n_symbols)):
                p2 = m.step(p, a)
                if p2 is not None:
                    stack.append((w + (a,), p2, m.step(q, a)))
        return ConstraintTable(n, out, None, True)
    for w in enumerate_language(o, n):
        v = bounded_witness(o, w, w[1:], depth, work)
        if v is not None:
            out.append(Constraint(w, v, True))
    return ConstraintTable(n, out, depth, False)


def verify_constraint(o: LanguageOracle, c: Constraint) -> bool:
    """Re-check a certified constraint verbatim against the oracle."""
    w, v = c.word, c.witness
    if not o.admits(w) or v is None:
        return False
    if c.first_letter:
        return len(w) == 1 and o.admits(v) and v[0] != w[0]
    return o.admits(w[1:] + v) and not o.admits(w + v)


def _seq(quantity, ns, counts, o, *, exact, truncated=False, **params) -> CountSequence:
    return CountSequence(quantity, list(ns), list(counts), exact=exact,
                         lower_bound=not exact, truncated=truncated, params=params)


def language_counts(o: LanguageOracle, n_max: int, budget: int = DEFAULT_BUDGET) -> CountSequence:
    """#L(n) for n = 1..n_max."""
    if o.machine is not None:
        lang, _, trunc = level_states(o.machine, o.n_symbols, n_max, budget)
        return _seq("language", range(1, len(lang) + 1), lang, o, exact=o.exact,
                    truncated=trunc)
    counts = []
    for n in range(1, n_max + 1):
        if counts and counts[-1] * o.n_symbols > budget:
            return _seq("language", range(1, n), counts, o, exact=o.exact, truncated=True)
        counts.append(len(enumerate_language(o, n)))
    return _seq("language", range(1, n_max + 1), counts, o, exact=o.exact)


def constraint_counts(o: LanguageOracle, n_max: int, k: int | None = None,
                      budget: int = DEFAULT_BUDGET,
                      depth_budget: int = DEPTH_BUDGET) -> CountSequence:
    """#C(n) for n = 1..n_max (exact, or certified at depth k / default n).

    Depth certification is exponential in n.  The work (letters read by
    the witness searches) of each length is measured; once the next length is predicted
    to push the total past ``depth_budget`` the sequence is cut and
    flagged truncated.
    """
    letters = _letters(o)
    c1 = len(letters) if len(letters) >= 2 else 0
    if o.has_exact_followers:
        m = o.machine
        s0 = m.start
        init = [(m.step(s0, c), s0, 1) for c in letters]
        pc = pair_counts(m, o.n_symbols, init, 1, n_max, budget=budget)
        counts = [c1] + pc.split[1:]
        return _seq("constraints", range(1, len(counts) + 1), counts, o,
                    exact=o.exact, truncated=pc.truncated)
    counts, total, prev, last = [], 0, 0, 0
    for n in range(1, n_max + 1):
        predicted = last * last / prev if prev >= 100 else last
        if total + predicted > depth_budget:
            return _seq("constraints", range(1, n), counts, o, exact=False,
                        truncated=True, depth=k)
        work = [0]
        counts.append(left_constraints(o, n, k, work).count)
        total += work[0]
        prev, last = last, work[0]
    return _seq("constraints", range(1, n_max + 1), counts, o, exact=False, depth=k)


def minimal_forbidden_counts(o: LanguageOracle, n_max: int,
                             budget: int = DEFAULT_BUDGET) -> CountSequence:
    """#M(n) for n = 2..n_max.

    Any deterministic machine works here: equal states read equal
    continuation sets, so merged pairs can never split again.
    """
    letters = _letters(o)
    if o.machine is not None:
        m = o.machine
        s0 = m.start
        init = [(m.step(s0, c), s0, 1) for c in letters]
        pc = pair_counts(m, o.n_symbols, init, 1, n_max - 1, budget=budget)
        counts = pc.forbidden[:n_max - 1]
        return _seq("minimal_forbidden", range(2, len(counts) + 2), counts, o,
                    exact=o.exact, truncated=pc.truncated)
    counts = [len(minimal_forbidden_words(o, n)) for n in range(2, n_max + 1)]
    return _seq("minimal_forbidden", range(2, n_max + 1), counts, o, exact=o.exact)


def minimal_forbidden_words(o: LanguageOracle, n: int) -> list[Word]:
    """Words u of length n with u dead but u[:-1] and u[1:] admitted."""
    if n < 2:
        raise ValueError("n must be >= 2")
    out = []
    for w in enumerate_language(o, n - 1):
        for b in range(o.n_symbols):
            if not o.admits(w + (b,)) and o.admits(w[1:] + (b,)):
                out.append(w + (b,))
    return out


def keller_capacity_counts(o: LanguageOracle, n_max: int, r_max: int = 1,
                           k: int | None = None, budget: int = DEFAULT_BUDGET) -> CountSequence:
    """Boundary-capacity counts, sup over left words of length 1..r_max."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if o.has_exact_followers:
        m = o.machine
        s0 = m.start
        starts = reachable_states(m, o.n_symbols, r_max, budget=budget)
        runs, truncated = [], False
        for t in starts:
            if t == s0:
                continue  # the pair (s0, s0) never splits
            pc = pair_counts(m, o.n_symbols, [(t, s0, 1)], 0, n_max, budget=budget)
            truncated |= pc.truncated
            runs.append(pc.split[1:])
        size = min((len(r) for r in runs), default=n_max)
        best = [max((r[i] for r in runs), default=0) for i in range(size)]
        return _seq("capacity", range(1, size + 1), best, o, exact=o.exact,
                    truncated=truncated, r_max=r_max)
    counts = [keller_capacity_words(o, n, r_max, k) for n in range(1, n_max + 1)]
    return _seq("capacity", range(1, n_max + 1), counts, o, exact=False, r_max=r_max, depth=k)


def keller_capacity_words(o: LanguageOracle, n: int, r_max: int = 1, k: int | None = None) -> int:
    """Capacity count at length n (sup over left words w with |w| <= r_max)."""
    if n < 1 or r_max < 1:
        raise ValueError("n and r_max must be >= 1")
    if o.has_exact_followers:
        seq = keller_capacity_counts(o, n, r_max)
        return seq.at(n) if n in seq.ns else 0
    depth = k if k is not None else n
    words = enumerate_language(o, n)
    best = 0
    for r in range(1, r_max + 1):
        for w in enumerate_language(o, r):
            cnt = sum(1 for a in words
                      if o.admits(w + a) and bounded_witness(o, w + a, a, depth) is not None)
            best = max(best, cnt)
    return best


def follower_set_count(o: LanguageOracle, n: int, k: int | None = None) -> int:
    """Distinct follower signatures over L(n)."""
    if o.has_exact_followers:
        _, fol, _ = level_states(o.machine, o.n_symbols, n)
        return fol[n - 1]
    depth = k if k is not None else n
    m = o.machine
    if m is None:
        return len({(w[-1], _continuations(o, w, depth)) for w in enumerate_language(o, n)})
    # equal machine states have equal continuations; profiles get small ids
    memo: dict = {}
    profiles: dict = {}
    sigs = set()
    for w in enumerate_language(o, n):
        s = m.run(w)
        if s not in memo:
            memo[s] = profiles.setdefault(_continuations(o, w, depth), len(profiles))
        sigs.add((w[-1], memo[s]))
    return len(sigs)


def follower_counts(o: LanguageOracle, n_max: int, k: int | None = None,
                    budget: int = DEFAULT_BUDGET) -> CountSequence:
    if o.has_exact_followers:
        _, fol, trunc = level_states(o.machine, o.n_symbols, n_max, budget)
        return _seq("followers", range(1, len(fol) + 1), fol, o, exact=o.exact, truncated=trunc)
    counts = [follower_set_count(o, n, k) for n in range(1, n_max + 1)]
    return _seq("followers", range(1, n_max + 1), counts, o, exact=False, depth=k)


# ---------------------------------------------------------------- extendable constraints

def extendable_constraints(o: LanguageOracle, n: int, M: int, budget: int = 2_000_000,
                           weak: bool = False) -> list[Word]:
    """Constraints w of length n with a left extension B (|B| = M, B ends in w).

    Strong reading (default): every suffix of B with length between n and
    M is a constraint.  Weak reading: B and w are constraints.  Exact for
    machines with exact followers; raises BudgetExceeded when the sets of
    extension states grow past ``budget``.
    """
    return _extendable(o, n, M, budget, weak, listing=True)


def extendable_count(o: LanguageOracle, n: int, M: int, budget: int = 2_000_000,
                     weak: bool = False) -> int:
    return _extendable(o, n, M, budget, weak, listing=False)


def _extendable(o, n, M, budget, weak, listing):
    if not M > n >= 1:
        raise ValueError("need M > n >= 1")
    if n == 1 and len(_letters(o)) < 2:
        return [] if listing else 0
    if not o.has_exact_followers:
        return _extendable_bounded(o, n, M, weak, listing)
    m = o.machine
    s0 = m.start
    gap = M - n
    # entry i tracks the state of B[i:]; suffix B[i:] is a constraint when
    # entries i and i+1 differ (a length-1 suffix uses its first-letter witness)
    top = gap if n == 1 else gap + 1
    if weak:
        positions = sorted({0, 1, gap, top})
        pairs = {(0, 1), (gap, top)} if n > 1 else {(0, 1)}
    else:
        positions = list(range(top + 1))
        pairs = {(i, i + 1) for i in range(top)}
    slot = {p: i for i, p in enumerate(positions)}
    checks = [(slot[i], slot[j]) for i, j in sorted(pairs)]

    def advance(tup, a, created):
        out = []
        for s in tup:
            t = m.step(s, a)
            if t is None:
                return None
            out.append(t)
        if created in slot:
            out.append(s0)
        for i, j in checks:
            if j < len(out) and out[i] == out[j]:
                return None
        return tuple(out)

    # phase 1: all left parts u of length gap at once
    tuples = {(s0,)}
    for j in range(1, gap + 1):
        nxt = set()
        for tup in tuples:
            for a in range(o.n_symbols):
                t = advance(tup, a, j)
                if t is not None:
                    nxt.add(t)
        tuples = nxt
        if not tuples:
            return [] if listing else 0
        if len(tuples) > budget:
            raise BudgetExceeded(f"extension set passed {budget} tuples")
    # phase 2: read w; frontier keyed by the surviving tuple set
    level: dict = {frozenset(tuples): ([()] if listing else 1)}
    for j in range(gap + 1, M + 1):
        nxt2: dict = {}
        for S, val in level.items():
            for a in range(o.n_symbols):
                T = frozenset(t for t in (advance(tup, a, j) for tup in S) if t is not None)
                if not T:
                    continue
                if listing:
                    nxt2.setdefault(T, []).extend(w + (a,) for w in val)
                else:
                    nxt2[T] = nxt2.get(T, 0) + val
        level = nxt2
        if sum(len(S) for S in level) > budget:
            raise BudgetExceeded(f"extension set passed {budget} tuples")
    if listing:
        return sorted(w for ws in level.values() for w in ws)
    return sum(level.values())


def _extendable_bounded(o, n, M, weak, listing):
    """Depth-limited variant: certified witnesses at depth M (small cases only)."""
    depth = M
    found = []
    for w in left_constraints(o, n, depth).constraints:
        stack = [w.word]
        hit = False
        while stack and not hit:
            b = stack.pop()
            if len(b) == M:
                hit = True
                break
            for a in range(o.n_symbols):
                ab = (a,) + b
                if not o.admits(ab):
                    continue
                if not weak or len(ab) == M:
                    if bounded_witness(o, ab, ab[1:], depth) is None:
                        continue
                stack.append(ab)
        if hit:
            found.append(w.word)
    return found if listing else len(found)


def extendable_counts(o: LanguageOracle, n_max: int, M: int, weak: bool = False,
                      budget: int = 2_000_000) -> CountSequence:
    counts, truncated = [], False
    for n in range(1, min(n_max, M - 1) + 1):
        try:
            counts.append(extendable_count(o, n, M, budget, weak))
        except BudgetExceeded:
            truncated = True
            break
    return _seq("extendable_weak" if weak else "extendable", range(1, len(counts) + 1),
                counts, o, exact=o.has_exact_followers and o.exact, truncated=truncated,
                horizon=M)


# ---------------------------------------------------------------- markov depth

@dataclass(frozen=True)
class NotStabilized:
    window: Word

    def __bool__(self):
        return False


def _sig_key(o: LanguageOracle, w: Word, k: int):
    s = follower_signature(o, w, k)
    return (s.last, s.key)


def markov_depth(o: LanguageOracle, window: Word, k: int | None = None,
                 state_budget: int = 20000):
    """Least l such that all suffixes of length >= l+1 share one signature.

    When only the whole window qualifies (l + 1 = |window|), the result is
    accepted only if no left extension of the window changes its
    follower; otherwise ``NotStabilized`` is returned.
    """
    window = tuple(window)
    if not window:
        raise ValueError("empty window")
    if not o.admits(window):
        raise NotInLanguage(f"{o.alphabet.format(window)} is not admitted")
    depth = k if k is not None else len(window)
    keys = [_sig_key(o, window[len(window) - j:], depth) for j in range(1, len(window) + 1)]
    ell = len(window) - 1
    while ell > 0 and keys[ell - 1] == keys[-1]:
        ell -= 1
    if ell + 1 < len(window):
        return ell
    if _left_stable(o, window, depth, state_budget):
        return ell
    return NotStabilized(window)


def _left_stable(o: LanguageOracle, window: Word, depth: int, state_budget: int) -> bool:
    if o.has_exact_followers:
        m = o.machine
        target = m.run(window)
        try:
            states = reachable_states(m, o.n_symbols, None if m.finite else depth,
                                      budget=state_budget)
        except BudgetExceeded:
            return False
        for t in states:
            r = m.run(window, t)
            if r is not None and r != target:
                return False
        return True
    ref = _continuations(o, window, depth)
    for a in range(o.n_symbols):
        aw = (a,) + window
        if o.admits(aw) and _continuations(o, aw, depth) != ref:
            return False
    return True
