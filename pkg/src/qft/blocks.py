"""Shifts defined by concatenating blocks.

A block family describes its blocks through four structural predicates
(block, prefix of a block, suffix of a block, factor of a single block).
Admissibility of a word is decided by dynamic programming over
factorizations ``(suffix)(blocks)*(prefix)``.

The two parametrized families used by the fixtures also carry
hand-derived follower machines whose states are exact follower classes:

* Keller: blocks ``(1|2)^n`` and ``0^n y y`` with ``y`` in ``(1|2)^n``;
* Sigma1: blocks ``D^n L^k`` with ``D = (0|1|2)``, ``L = (a|b)`` and
  ``1 <= k <= n^2``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .automata import Machine
from .errors import InvalidSpec
from .words import Alphabet, Word


class BlockFamily:
    """Base class: structural predicates plus factorization DP."""

    name = "block"
    alphabet: Alphabet
    exact = True

    def is_block(self, w: Word) -> bool:
        raise NotImplementedError

    def is_prefix(self, w: Word) -> bool:
        raise NotImplementedError

    def is_suffix(self, w: Word) -> bool:
        raise NotImplementedError

    def is_factor(self, w: Word) -> bool:
        raise NotImplementedError

    def blocks(self, bound: int) -> Iterator[Word]:
        """Blocks with parameter at most ``bound`` (deterministic order)."""
        raise NotImplementedError

    def machine(self) -> Machine | None:
        return None

    def admits(self, w: Word) -> bool:
        return _admits_dp(self, tuple(w))


def _admits_dp(fam: BlockFamily, w: Word) -> bool:
    n = len(w)
    if n == 0 or fam.is_factor(w):
        return True
    # reach[i]: w[:i] is (suffix of a block)(blocks)*
    reach = [fam.is_suffix(w[:i]) for i in range(n + 1)]
    for i in range(n + 1):
        if not reach[i]:
            continue
        if fam.is_prefix(w[i:]):
            return True
        for j in range(i + 1, n + 1):
            if not reach[j] and fam.is_block(w[i:j]):
                reach[j] = True
    return False


# ---------------------------------------------------------------- Keller

ZERO = 0


def _runs_zero_then_free(w: Word) -> tuple[int, Word] | None:
    """Split w as 0^i u with u free of zeros; None if a zero follows a nonzero."""
    i = 0
    while i < len(w) and w[i] == ZERO:
        i += 1
    u = w[i:]
    if ZERO in u:
        return None
    return i, u


class KellerFamily(BlockFamily):
    """Blocks ``(1|2)^n`` and ``0^n y y`` with ``|y| = n``."""

    name = "keller"

    def __init__(self):
        self.alphabet = Alphabet(("0", "1", "2"))

    def is_block(self, w):
        if not w:
            return False
        split = _runs_zero_then_free(w)
        if split is None:
            return False
        i, u = split
        if i == 0:
            return True
        return len(u) == 2 * i and u[:i] == u[i:]

    def is_prefix(self, w):
        split = _runs_zero_then_free(w)
        if split is None:
            return False
        i, u = split
        if i == 0 or not u:
            return True
        # the zero run is complete, so the block parameter is i
        return len(u) <= 2 * i and u[i:] == u[:max(len(u) - i, 0)]

    def is_suffix(self, w):
        split = _runs_zero_then_free(w)
        if split is None:
            return False
        i, u = split
        if i == 0:
            return True
        h = len(u) // 2
        return len(u) % 2 == 0 and h >= max(i, 1) and u[:h] == u[h:]

    def is_factor(self, w):
        return _runs_zero_then_free(w) is not None

    def blocks(self, bound):
        for n in range(1, bound + 1):
            for y in product((1, 2), repeat=n):
                yield y
            for y in product((1, 2), repeat=n):
                yield (ZERO,) * n + y + y

    def machine(self):
        return KellerMachine()


def _is_prefix_bits(l1, b1, l2, b2):
    return l1 < l2 and (b2 & ((1 << l1) - 1)) == b1


def _family_covers(l, b, L, xb, k):
    """Does r=(l,b) start with z x z for some |z| >= k, x=(L,xb)?"""
    t = k
    while 2 * t + L <= l:
        mask = (1 << t) - 1
        z = b & mask
        if ((b >> t) & ((1 << L) - 1)) == xb and ((b >> (t + L)) & mask) == z:
            return True
        t += 1
    return False


class KellerMachine(Machine):
    """Exact follower classes of the Keller shift.

    States (words over 1|2 are stored as (length, bits) with bit i = letter i - 1):

    ``A``            the empty word (start);
    ``B``            some parse sits at a block boundary or in a free block;
    ``z j``          exact zero run of length j (preceded by a nonzero letter);
    ``Z j``          zero run reaching the left edge, length at least j;
    ``y n L b``      single parse inside the first copy of y (|y| = n);
    ``r L b``        single parse inside the second copy, remainder r;
    ``Y m L b R``    parses with first copy x=(L,b) for every n >= m, plus
                     second-copy remainders R (left-edge zero runs).

    Normal form: B absorbs everything; a remainder is dropped when a
    proper prefix of it is another remainder, or when it starts with a
    completed word z x z of the family.
    """

    complete = True
    finite = False
    start = ("A",)

    B = ("B",)

    def step(self, s, a):
        kind = s[0]
        if a == ZERO:
            if kind == "A":
                return ("Z", 1)
            if kind == "B":
                return ("z", 1)
            if kind == "z":
                return ("z", s[1] + 1)
            if kind == "Z":
                return ("Z", s[1] + 1)
            return None
        bit = a - 1
        if kind in ("A", "B"):
            return self.B
        if kind == "z":
            j = s[1]
            if j == 1:
                return ("r", 1, bit)
            return ("y", j, 1, bit)
        if kind == "y":
            _, n, L, b = s
            b |= bit << L
            L += 1
            if L == n:
                return ("r", L, b)
            return ("y", n, L, b)
        if kind == "r":
            _, L, b = s
            if (b & 1) != bit:
                return None
            if L == 1:
                return self.B
            return ("r", L - 1, b >> 1)
        if kind == "Z":
            j = s[1]
            rem = ((1, bit),) if j <= 1 else ()
            return self._norm(max(j, 2), 1, bit, rem)
        # family state
        _, m, L, b, R = s
        rem = []
        for (l, rb) in R:
            if (rb & 1) != bit:
                continue
            if l == 1:
                return self.B
            rem.append((l - 1, rb >> 1))
        b |= bit << L
        L += 1
        if m <= L:
            rem.append((L, b))
        return self._norm(max(m, L + 1), L, b, rem)

    @staticmethod
    def _norm(m, L, b, rem):
        if not rem:
            return ("Y", m, L, b, ())
        k = m - L
        keep = []
        single = len(rem) == 1
        for (l, rb) in rem:
            if not single and any(_is_prefix_bits(l2, b2, l, rb) for (l2, b2) in rem):
                continue
            if _family_covers(l, rb, L, b, k):
                continue
            keep.append((l, rb))
        return ("Y", m, L, b, tuple(sorted(keep)))


# ---------------------------------------------------------------- Sigma1

class Sigma1Family(BlockFamily):
    """Blocks ``(0|1|2)^n (a|b)^k`` with ``1 <= k <= n^2``."""

    name = "sigma1"

    def __init__(self):
        self.alphabet = Alphabet(("0", "1", "2", "a", "b"))

    @staticmethod
    def _split(w) -> tuple[int, int] | None:
        i = 0
        while i < len(w) and w[i] < 3:
            i += 1
        if any(c < 3 for c in w[i:]):
            return None
        return i, len(w) - i

    def is_block(self, w):
        s = self._split(w)
        return s is not None and s[0] >= 1 and 1 <= s[1] <= s[0] ** 2

    def is_prefix(self, w):
        s = self._split(w)
        if s is None:
            return False
        n, k = s
        if k == 0:
            return True
        return n >= 1 and k <= n * n

    def is_suffix(self, w):
        s = self._split(w)
        if s is None:
            return False
        return len(w) == 0 or s[1] >= 1

    def is_factor(self, w):
        return self._split(w) is not None

    def blocks(self, bound):
        for n in range(1, bound + 1):
            for k in range(1, n * n + 1):
                for d in product((0, 1, 2), repeat=n):
                    for l in product((3, 4), repeat=k):
                        yield d + l

    def machine(self):
        return Sigma1Machine()


class Sigma1Machine(Machine):
    """Exact follower classes of Sigma1.

    ``D None``/``L None`` are runs reaching the left edge (unbounded);
    ``D j`` is a complete digit run of length j so far; ``L r`` is a
    letter run with r letters still allowed.
    """

    complete = True
    finite = False
    start = ("A",)

    def step(self, s, a):
        digit = a < 3
        kind = s[0]
        if kind == "A":
            return ("D", None) if digit else ("L", None)
        if kind == "D":
            j = s[1]
            if digit:
                return ("D", None if j is None else j + 1)
            return ("L", None if j is None else j * j - 1)
        r = s[1]
        if digit:
            return ("D", 1)
        if r is None:
            return s
        if r == 0:
            return None
        return ("L", r - 1)


# ---------------------------------------------------------------- listed

class ListedFamily(BlockFamily):
    """Finitely many explicit blocks (a sofic shift)."""

    name = "listed"

    def __init__(self, alphabet: Alphabet, blocks: Sequence[Word]):
        if not blocks or any(len(b) == 0 for b in blocks):
            raise InvalidSpec("listed block family needs nonempty blocks")
        self.alphabet = alphabet
        self._blocks = tuple(dict.fromkeys(tuple(b) for b in blocks))
        self._pre = {b[:i] for b in self._blocks for i in range(len(b) + 1)}
        self._suf = {b[i:] for b in self._blocks for i in range(len(b) + 1)}
        self._fac = {b[i:j] for b in self._blocks
                     for i in range(len(b) + 1) for j in range(i, len(b) + 1)}

    def is_block(self, w):
        return w in self._blocks

    def is_prefix(self, w):
        return w in self._pre

    def is_suffix(self, w):
        return w in self._suf

    def is_factor(self, w):
        return w in self._fac

    def blocks(self, bound):
        return iter(self._blocks)

    def graph(self):
        """Labeled graph: a cycle through a hub for every block."""
        states = ["hub"]
        edges = []
        for bi, blk in enumerate(self._blocks):
            prev = "hub"
            for i, a in enumerate(blk):
                nxt = "hub" if i == len(blk) - 1 else (bi, i)
                if nxt != "hub":
                    states.append(nxt)
                edges.append((prev, nxt, a))
                prev = nxt
        return states, edges


FAMILIES = {"keller": KellerFamily, "sigma1": Sigma1Family}


@lru_cache(maxsize=None)
def family(name: str) -> BlockFamily:
    try:
        return FAMILIES[name]()
    except KeyError:
        raise InvalidSpec(f"unknown block family {name!r}") from None
