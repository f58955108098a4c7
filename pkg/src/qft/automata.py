"""Deterministic follower machines.

A follower machine reads a word from left to right starting in a state
that represents the follower of the empty word.  ``step`` returns the
state after one more letter or ``None`` when the extended word is not in
the language.  When ``complete`` is true, two words with the same last
letter have equal follower sets exactly when the machine reaches the same
state on them; this is what makes constraint detection exact.

Finite machines are built from labeled graphs by trimming to the
essential part, running the subset construction from the full state set
and minimizing (Moore partition refinement).  The minimized automaton's
states are the follower classes of the shift.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Sequence

from .errors import BudgetExceeded, EmptyShift
from .words import Word

DEAD = -1


class Machine:
    """Interface for deterministic follower machines."""

    start: Hashable = None
    complete: bool = False
    finite: bool = False

    def step(self, state, a: int):
        raise NotImplementedError

    def run(self, w: Sequence[int], state=None):
        s = self.start if state is None else state
        for a in w:
            s = self.step(s, a)
            if s is None:
                return None
        return s

    def handle(self, state):
        """Printable canonical identifier of a state."""
        return state


class FiniteDFA(Machine):
    """Minimal deterministic automaton with integer states.

    ``delta[s][a]`` is the successor or ``DEAD``.  Every state is live and
    reachable from ``start``; all states accept.  ``handles[s]`` is the
    canonical state list of the presentation attached to class ``s``.
    """

    finite = True

    def __init__(self, n_symbols: int, delta, start: int = 0,
                 handles: Sequence | None = None, complete: bool = True):
        self.n_symbols = n_symbols
        self.delta = tuple(tuple(row) for row in delta)
        self.start = start
        self.n_states = len(self.delta)
        self.handles = tuple(handles) if handles is not None else tuple(
            (s,) for s in range(self.n_states))
        self.complete = complete

    def step(self, state, a):
        t = self.delta[state][a]
        return None if t == DEAD else t

    def handle(self, state):
        return self.handles[state]

    def edges(self) -> list[tuple[int, int, int]]:
        return [(s, t, a) for s, row in enumerate(self.delta)
                for a, t in enumerate(row) if t != DEAD]

    def __repr__(self):
        return f"FiniteDFA(states={self.n_states}, symbols={self.n_symbols})"


def trim(states: Iterable, edges: Iterable[tuple]) -> tuple[list, list]:
    """Keep only states lying on bi-infinite paths."""
    alive = list(dict.fromkeys(states))
    es = list(edges)
    keep = set(alive)
    changed = True
    while changed:
        changed = False
        has_out = {s for s, t, _ in es if s in keep and t in keep}
        has_in = {t for s, t, _ in es if s in keep and t in keep}
        bad = {s for s in keep if s not in has_out or s not in has_in}
        if bad:
            keep -= bad
            changed = True
    live_states = [s for s in alive if s in keep]
    live_edges = [(s, t, a) for s, t, a in es if s in keep and t in keep]
    return live_states, live_edges


def minimize(n_symbols: int, delta: Sequence[Sequence[int]], start: int):
    """Moore minimization of a partial DFA in which every state accepts.

    Two states are merged when they read exactly the same words.  Returns
    ``(delta', start', cls, order)`` with classes renumbered in
    breadth-first order from the start (letters in increasing order);
    ``cls[s]`` is the class of old state ``s`` and ``order[c]`` the first
    old state met in class ``c``.
    """
    n = len(delta)
    block = [0] * n
    n_blocks = 1
    while True:
        sig = {}
        new_block = [0] * n
        for s in range(n):
            key = (block[s],) + tuple(block[t] if t != DEAD else -1 for t in delta[s])
            new_block[s] = sig.setdefault(key, len(sig))
        if len(sig) == n_blocks:
            break
        block, n_blocks = new_block, len(sig)
    # canonical renumbering by BFS from the start class
    rep = {}
    for s in range(n):
        rep.setdefault(block[s], s)
    number = {block[start]: 0}
    order = [rep[block[start]]]
    queue = deque([block[start]])
    while queue:
        b = queue.popleft()
        s = rep[b]
        for a in range(n_symbols):
            t = delta[s][a]
            if t != DEAD and block[t] not in number:
                number[block[t]] = len(order)
                order.append(rep[block[t]])
                queue.append(block[t])
    new_delta = []
    for s in order:
        new_delta.append([number[block[t]] if t != DEAD else DEAD for t in delta[s]])
    cls = [number.get(block[s], DEAD) for s in range(n)]
    return new_delta, 0, cls, order


def follower_dfa(n_symbols: int, states: Sequence, edges: Iterable[tuple]) -> FiniteDFA:
    """Minimal follower automaton of the sofic shift presented by a labeled graph.

    ``edges`` are ``(source, target, symbol)`` triples.  The graph is
    trimmed first; an empty result raises ``EmptyShift``.
    """
    live, es = trim(states, edges)
    if not live:
        raise EmptyShift("presentation has no bi-infinite path")
    pos = {s: i for i, s in enumerate(live)}
    out: dict[tuple[int, int], list[int]] = {}
    for s, t, a in es:
        out.setdefault((pos[s], a), []).append(pos[t])
    start = frozenset(range(len(live)))
    index = {start: 0}
    subsets = [start]
    delta: list[list[int]] = []
    i = 0
    while i < len(subsets):
        S = subsets[i]
        row = []
        for a in range(n_symbols):
            T = frozenset(t for s in S for t in out.get((s, a), ()))
            if not T:
                row.append(DEAD)
                continue
            if T not in index:
                index[T] = len(subsets)
                subsets.append(T)
            row.append(index[T])
        delta.append(row)
        i += 1
    new_delta, start_cls, _, order = minimize(n_symbols, delta, 0)
    handles = [tuple(live[j] for j in sorted(subsets[s])) for s in order]
    return FiniteDFA(n_symbols, new_delta, start_cls, handles)


def dfa_from_table(n_symbols: int, delta, start: int = 0) -> FiniteDFA:
    """Minimize an arbitrary all-accepting partial DFA given as a table."""
    # restrict to states reachable from start
    seen = {start: 0}
    order = [start]
    for s in order:
        for t in delta[s]:
            if t != DEAD and t not in seen:
                seen[t] = len(order)
                order.append(t)
    sub = [[seen[t] if t != DEAD else DEAD for t in delta[s]] for s in order]
    new_delta, st, _, reps = minimize(n_symbols, sub, 0)
    return FiniteDFA(n_symbols, new_delta, st, [(order[r],) for r in reps])


def union_dfa(x: FiniteDFA, y: FiniteDFA) -> FiniteDFA:
    """Follower automaton of the union of two shifts over one alphabet."""
    start = (x.start, y.start)
    index = {start: 0}
    pairs = [start]
    delta = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        row = []
        for a in range(x.n_symbols):
            p2 = x.delta[p][a] if p != DEAD else DEAD
            q2 = y.delta[q][a] if q != DEAD else DEAD
            if p2 == DEAD and q2 == DEAD:
                row.append(DEAD)
                continue
            key = (p2, q2)
            if key not in index:
                index[key] = len(pairs)
                pairs.append(key)
            row.append(index[key])
        delta.append(row)
        i += 1
    new_delta, st, _, reps = minimize(x.n_symbols, delta, 0)
    return FiniteDFA(x.n_symbols, new_delta, st, [pairs[r] for r in reps])


def reverse_dfa(m: FiniteDFA) -> FiniteDFA:
    """Follower automaton of the reversed shift.

    The transition graph of a follower automaton presents the language
    (every state is reachable from the start and the language is factor
    closed), so reversing its edges presents the reversed language.
    """
    edges = [(t, s, a) for s, t, a in m.edges()]
    return follower_dfa(m.n_symbols, list(range(m.n_states)), edges)


def pair_witness(machine: Machine, p, q, n_symbols: int, budget: int = 20000):
    """Shortest, then lexicographically first, v with q·v alive and p·v dead.

    Breadth-first search over state pairs.  Returns ``None`` when the
    inclusion holds (finite search space exhausted) and raises nothing; a
    ``budget`` on visited pairs bounds the search for infinite machines,
    in which case ``False`` is returned.
    """
    if p == q:
        return None
    seen = {(p, q)}
    queue = deque([((p, q), ())])
    while queue:
        (s, t), v = queue.popleft()
        for a in range(n_symbols):
            t2 = machine.step(t, a)
            if t2 is None:
                continue
            s2 = machine.step(s, a)
            if s2 is None:
                return v + (a,)
            if s2 == t2 or (s2, t2) in seen:
                continue
            if len(seen) >= budget:
                return False
            seen.add((s2, t2))
            queue.append(((s2, t2), v + (a,)))
    return None


def reachable_states(machine: Machine, n_symbols: int, max_depth: int | None = None,
                     budget: int = 100000) -> list:
    """States reachable from the start (within ``max_depth`` letters)."""
    seen = {machine.start: 0}
    order = [machine.start]
    frontier = [machine.start]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        nxt = []
        for s in frontier:
            for a in range(n_symbols):
                t = machine.step(s, a)
                if t is not None and t not in seen:
                    seen[t] = depth + 1
                    order.append(t)
                    nxt.append(t)
                    if len(order) > budget:
                        raise BudgetExceeded(f"more than {budget} reachable states")
        frontier = nxt
        depth += 1
    return order


def run_word(machine: Machine, w: Word, state=None):
    return machine.run(w, state)
