"""Level-by-level counting over pairs of machine states.

Many quantities reduce to counting words ``a`` of length ``n`` for
which two runs of a follower machine, started in states ``p0`` and
``q0``, end in different live states.  Once the two runs meet they stay
together, and a dead first run never revives, so such pairs are pruned.

The frontier (pair -> number of words reaching it) is merged at every
level.  When the frontier grows past ``frontier_cap`` the remaining
levels are finished by depth-first search from each frontier entry,
which trades time for memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .automata import Machine

DEFAULT_BUDGET = 50_000_000
FRONTIER_CAP = 50_000
MEMO_CAP = 2_000_000
STATE_CAP = 1_000_000


def memo_step(machine: Machine):
    """Transition function with a bounded local cache (not shared)."""
    cache: dict = {}
    raw = machine.step

    def step(s, a):
        key = (s, a)
        try:
            return cache[key]
        except KeyError:
            pass
        if len(cache) > MEMO_CAP:
            cache.clear()
        t = cache[key] = raw(s, a)
        return t

    return step


@dataclass
class CountSequence:
    """Counts ``counts[i]`` at lengths ``ns[i]`` for one quantity."""

    quantity: str
    ns: list[int]
    counts: list[int]
    exact: bool = True
    lower_bound: bool = False
    truncated: bool = False
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.ns)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.ns, self.counts))

    def at(self, n: int) -> int:
        return self.as_dict()[n]


@dataclass
class PairCounts:
    """``split[j]``: words of length ``base + j`` whose runs are split.

    ``forbidden[j]``: words ``a·b`` of length ``base + j + 1`` with the
    first run dying on ``b`` while the second survives (split pairs only).
    """

    base: int
    split: list[int] = field(default_factory=list)
    forbidden: list[int] = field(default_factory=list)
    truncated: bool = False


def pair_counts(machine: Machine, n_symbols: int, init: Iterable[tuple[Hashable, Hashable, int]],
                base: int, n_max: int, *, budget: int = DEFAULT_BUDGET,
                frontier_cap: int = FRONTIER_CAP) -> PairCounts:
    """Count split pairs for lengths ``base..n_max``.

    ``init`` lists ``(p, q, weight)`` at length ``base``.  On budget
    exhaustion the counts computed so far are returned with
    ``truncated=True``.
    """
    step = machine.step
    syms = range(n_symbols)
    frontier: dict = {}
    for p, q, w in init:
        if p is not None and p != q:
            frontier[(p, q)] = frontier.get((p, q), 0) + w
    out = PairCounts(base)
    work = 0
    level = base
    while True:
        out.split.append(sum(frontier.values()))
        if level == n_max:
            out.forbidden.append(_forbidden_here(step, syms, frontier))
            return out
        if len(frontier) > frontier_cap:
            break
        nxt: dict = {}
        mf = 0
        for (p, q), w in frontier.items():
            for a in syms:
                q2 = step(q, a)
                if q2 is None:
                    continue
                p2 = step(p, a)
                if p2 is None:
                    mf += w
                    continue
                if p2 != q2:
                    key = (p2, q2)
                    nxt[key] = nxt.get(key, 0) + w
            work += len(syms)
        out.forbidden.append(mf)
        frontier = nxt
        if work > budget:
            out.truncated = True
            return out
        level += 1
    # depth-first completion of the remaining levels
    remaining = n_max - level
    split = [0] * (remaining + 1)
    forb = [0] * (remaining + 1)
    for (p, q), w in frontier.items():
        stack = [(p, q, 0)]
        while stack:
            p, q, d = stack.pop()
            if d:
                split[d] += w
            for a in syms:
                q2 = step(q, a)
                if q2 is None:
                    continue
                p2 = step(p, a)
                if p2 is None:
                    forb[d] += w
                elif p2 != q2 and d < remaining:
                    stack.append((p2, q2, d + 1))
            work += len(syms)
            if work > budget:
                # partial passes undercount; keep the completed levels only
                out.truncated = True
                return out
    out.forbidden.append(forb[0])
    for d in range(1, remaining + 1):
        out.split.append(split[d])
        out.forbidden.append(forb[d])
    return out


def _forbidden_here(step, syms, frontier) -> int:
    mf = 0
    for (p, q), w in frontier.items():
        for a in syms:
            if step(q, a) is not None and step(p, a) is None:
                mf += w
    return mf


def level_states(machine: Machine, n_symbols: int, n_max: int,
                 budget: int = DEFAULT_BUDGET, state_cap: int = STATE_CAP
                 ) -> tuple[list[int], list[int], bool]:
    """Per length n: #words (language count) and #distinct (last, state).

    Returns ``(language_counts, follower_counts, truncated)`` indexed from
    n = 1.  The level is held in memory, so the sequence is cut once it has
    more than ``state_cap`` entries.
    """
    step = memo_step(machine)
    frontier: dict = {(None, machine.start): 1}
    lang: list[int] = []
    fol: list[int] = []
    work = 0
    for _ in range(n_max):
        nxt: dict = {}
        for (_, s), w in frontier.items():
            for a in range(n_symbols):
                t = step(s, a)
                if t is not None:
                    key = (a, t)
                    nxt[key] = nxt.get(key, 0) + w
        work += len(frontier) * n_symbols
        frontier = nxt
        lang.append(sum(frontier.values()))
        fol.append(len(frontier))
        if work > budget or len(frontier) > state_cap:
            return lang, fol, True
    return lang, fol, False
