"""Subshift presentations as uniform admissibility oracles.

Every presentation ends up as a :class:`LanguageOracle`.  Besides the
``admits`` query an oracle may carry a deterministic follower machine
(see :mod:`qft.automata`); downstream code uses it to walk the prefix
tree quickly and, when the machine is complete, to compare follower sets
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Callable, Hashable, Iterable, Sequence

from .automata import (DEAD, FiniteDFA, Machine, dfa_from_table, follower_dfa,
                       reverse_dfa, union_dfa)
from .blocks import BlockFamily, ListedFamily
from .errors import InvalidSpec
from .pwm import PwmMachine, PwmReverseMachine, PwmSpec, boundary_cylinder_count  # noqa: F401
from .words import Alphabet, Word, is_factor


@dataclass(frozen=True)
class Exactness:
    """``horizon is None`` means Exact, otherwise HorizonLimited(horizon)."""

    horizon: int | None = None

    @property
    def exact(self) -> bool:
        return self.horizon is None

    def __str__(self):
        return "Exact" if self.exact else f"HorizonLimited({self.horizon})"


EXACT = Exactness()


class LanguageOracle:
    """A subshift given by its language.

    ``machine`` is optional.  When present, ``machine.run(w)`` is None
    exactly when ``w`` is not admitted.
    """

    def __init__(self, alphabet: Alphabet, *, admits: Callable[[Word], bool] | None = None,
                 machine: Machine | None = None, exactness: Exactness = EXACT,
                 kind: str = "custom", handle: Callable[[Word], Hashable] | None = None,
                 info: dict | None = None):
        if admits is None and machine is None:
            raise InvalidSpec("an oracle needs an admits query or a machine")
        self.alphabet = alphabet
        self.machine = machine
        self.exactness = exactness
        self.kind = kind
        self.info = dict(info or {})
        self._handle = handle
        if admits is None:
            self._admits = lambda w: machine.run(w) is not None
        else:
            # lru_cache keeps its bookkeeping consistent across threads
            self._admits = lru_cache(maxsize=1 << 16)(admits)

    def __repr__(self):
        return f"LanguageOracle({self.kind}, |A|={len(self.alphabet)}, {self.exactness})"

    @property
    def n_symbols(self) -> int:
        return len(self.alphabet)

    @property
    def exact(self) -> bool:
        return self.exactness.exact

    @property
    def has_exact_followers(self) -> bool:
        return self.machine is not None and self.machine.complete

    def admits(self, w: Sequence[int]) -> bool:
        return self._admits(tuple(w))

    def state(self, w: Sequence[int]):
        """Machine state after reading w (None when not admitted)."""
        if self.machine is None:
            raise InvalidSpec(f"{self.kind} oracle has no follower machine")
        return self.machine.run(tuple(w))

    def exact_follower_handle(self, w: Sequence[int]):
        """Canonical state-set identifier of fol(w); None when unavailable."""
        if not self.has_exact_followers:
            return None
        w = tuple(w)
        if self._handle is not None:
            return self._handle(w)
        s = self.machine.run(w)
        return None if s is None else self.machine.handle(s)


# ---------------------------------------------------------------- SFT

@dataclass
class SftSpec:
    alphabet: Alphabet
    forbidden: list[Word] = field(default_factory=list)

    def __post_init__(self):
        fs = sorted(set(tuple(f) for f in self.forbidden), key=lambda f: (len(f), f))
        if any(len(f) == 0 for f in fs):
            raise InvalidSpec("the empty word cannot be forbidden")
        for f in fs:
            if any(a >= len(self.alphabet) or a < 0 for a in f):
                raise InvalidSpec(f"forbidden word {f} uses unknown symbols")
        antichain: list[Word] = []
        for f in fs:
            if not any(is_factor(g, f) for g in antichain):
                antichain.append(f)
        self.forbidden = antichain

    @property
    def max_forbidden_len(self) -> int:
        return max((len(f) for f in self.forbidden), default=0)


def sft_graph(spec: SftSpec) -> tuple[list, list]:
    """Higher-block presentation on words of length max(l - 1, 1)."""
    m = max(spec.max_forbidden_len - 1, 1)
    forb = set(spec.forbidden)
    lens = sorted({len(f) for f in forb})

    def clean_tail(w: Word) -> bool:
        # only factors ending at the last letter are new
        return not any(w[len(w) - k:] in forb for k in lens if k <= len(w))

    syms = range(len(spec.alphabet))
    states: list[Word] = []
    frontier: list[Word] = [()]
    for _ in range(m):
        frontier = [w + (a,) for w in frontier for a in syms if clean_tail(w + (a,))]
    states = frontier
    alive = set(states)
    edges = []
    for u in states:
        for a in syms:
            ua = u + (a,)
            if clean_tail(ua) and ua[1:] in alive:
                edges.append((u, ua[1:], a))
    return states, edges


def make_sft(spec: SftSpec) -> LanguageOracle:
    states, edges = sft_graph(spec)
    machine = follower_dfa(len(spec.alphabet), states, edges)
    ell = spec.max_forbidden_len

    def handle(w: Word):
        if machine.run(w) is None:
            return None
        k = min(len(w), max(ell - 1, 0))
        return w[len(w) - k:]

    return LanguageOracle(spec.alphabet, machine=machine, kind="sft", handle=handle,
                          info={"forbidden": spec.forbidden, "max_forbidden_len": ell})


# ---------------------------------------------------------------- sofic

@dataclass
class SoficSpec:
    alphabet: Alphabet
    states: list
    edges: list  # (source, target, symbol id)

    def __post_init__(self):
        if not self.edges:
            raise InvalidSpec("sofic presentation has no edges")
        known = set(self.states)
        for s, t, a in self.edges:
            if s not in known or t not in known:
                raise InvalidSpec(f"edge ({s}, {t}) uses an undeclared state")
            if not 0 <= a < len(self.alphabet):
                raise InvalidSpec(f"edge label {a} outside the alphabet")


def make_sofic(spec: SoficSpec) -> LanguageOracle:
    machine = follower_dfa(len(spec.alphabet), spec.states, spec.edges)
    return LanguageOracle(spec.alphabet, machine=machine, kind="sofic",
                          info={"presentation_states": len(spec.states)})


# ---------------------------------------------------------------- beta

@dataclass
class BetaSpec:
    """Quasi-greedy expansion of 1 written as ``preperiod (period)^inf``."""

    preperiod: list[int]
    period: list[int]

    def __post_init__(self):
        self.preperiod = [int(d) for d in self.preperiod]
        self.period = [int(d) for d in self.period]
        if not self.period or not any(self.period):
            raise InvalidSpec("the period must contain a nonzero digit")
        d = self.digits(len(self.preperiod) + len(self.period))
        if any(x < 0 for x in d) or d[0] < 1:
            raise InvalidSpec("digits must be nonnegative with a leading digit >= 1")
        n = len(d)
        # tails agree with d beyond n once they agree on the first n digits
        for k in range(1, n):
            tail = self.digits(k + n)[k:]
            if tail > d:
                raise InvalidSpec(f"shifted tail at {k} exceeds the expansion")

    def digits(self, n: int) -> list[int]:
        out = list(self.preperiod[:n])
        while len(out) < n:
            out.extend(self.period)
        return out[:n]

    @property
    def n_symbols(self) -> int:
        return self.digits(1)[0] + 1


def parry_graph(spec: BetaSpec) -> tuple[list, list]:
    """States i = length of the current match with the expansion of 1."""
    p, q = len(spec.preperiod), len(spec.period)
    d = spec.digits(p + q)
    states = list(range(p + q))
    edges = []
    for i in states:
        for a in range(d[i]):
            edges.append((i, 0, a))
        nxt = i + 1 if i + 1 < p + q else p
        edges.append((i, nxt, d[i]))
    return states, edges


def parry_admits(spec: BetaSpec, w: Word) -> bool:
    """Every suffix of w is lexicographically <= the same-length prefix of d."""
    d = spec.digits(len(w))
    return all(list(w[i:]) <= d[:len(w) - i] for i in range(len(w)))


def make_beta(spec: BetaSpec) -> LanguageOracle:
    states, edges = parry_graph(spec)
    machine = follower_dfa(spec.n_symbols, states, edges)
    return LanguageOracle(Alphabet.of(range(spec.n_symbols)), machine=machine, kind="beta",
                          info={"preperiod": spec.preperiod, "period": spec.period})


# ---------------------------------------------------------------- PWM

def make_pwm(spec: PwmSpec) -> LanguageOracle:
    return LanguageOracle(spec.alphabet, machine=PwmMachine(spec), kind="pwm",
                          info={"pwm": spec})


# ---------------------------------------------------------------- blocks

def make_block_code(fam: BlockFamily) -> LanguageOracle:
    if isinstance(fam, ListedFamily):
        states, edges = fam.graph()
        machine = follower_dfa(len(fam.alphabet), states, edges)
        return LanguageOracle(fam.alphabet, admits=fam.admits, machine=machine,
                              kind="block", info={"family": fam.name})
    exactness = EXACT if fam.exact else Exactness(horizon=0)
    return LanguageOracle(fam.alphabet, admits=fam.admits, machine=fam.machine(),
                          exactness=exactness, kind="block", info={"family": fam.name})


# ---------------------------------------------------------------- combinators

def _weaker(x: Exactness, y: Exactness) -> Exactness:
    if x.exact:
        return y
    if y.exact:
        return x
    return Exactness(min(x.horizon, y.horizon))


class _PairMachine(Machine):
    """Runs two machines side by side (product or same-alphabet union)."""

    finite = False

    def __init__(self, mx: Machine, my: Machine, split, mode: str, complete: bool):
        self.mx, self.my, self.split, self.mode = mx, my, split, mode
        self.start = (mx.start, my.start)
        self.complete = complete

    def step(self, s, a):
        p, q = s
        ax, ay = self.split(a)
        p2 = self.mx.step(p, ax) if p is not None else None
        q2 = self.my.step(q, ay) if q is not None else None
        if self.mode == "product":
            return None if p2 is None or q2 is None else (p2, q2)
        return None if p2 is None and q2 is None else (p2, q2)


class _TaggedMachine(Machine):
    """Union over disjointly tagged alphabets: the first letter picks a side."""

    finite = False
    start = ("*",)

    def __init__(self, mx: Machine, my: Machine, nx: int, complete: bool):
        self.mx, self.my, self.nx = mx, my, nx
        self.complete = complete

    def step(self, s, a):
        side, b = (0, a) if a < self.nx else (1, a - self.nx)
        m = self.mx if side == 0 else self.my
        if s == self.start:
            t = m.step(m.start, b)
        elif s[0] != side:
            return None
        else:
            t = m.step(s[1], b)
        return None if t is None else (side, t)


def _finite_table(machine: Machine, n_symbols: int) -> FiniteDFA:
    index = {machine.start: 0}
    order = [machine.start]
    delta = []
    for s in order:
        row = []
        for a in range(n_symbols):
            t = machine.step(s, a)
            if t is None:
                row.append(DEAD)
                continue
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        delta.append(row)
    return dfa_from_table(n_symbols, delta)


def reverse(o: LanguageOracle) -> LanguageOracle:
    if isinstance(o.machine, FiniteDFA) and o.machine.complete:
        m = reverse_dfa(o.machine)
        return LanguageOracle(o.alphabet, machine=m, exactness=o.exactness,
                              kind=f"reverse({o.kind})")
    if isinstance(o.machine, PwmMachine):
        return LanguageOracle(o.alphabet, machine=PwmReverseMachine(o.machine.spec),
                              exactness=o.exactness, kind=f"reverse({o.kind})")
    return LanguageOracle(o.alphabet, admits=lambda w: o.admits(w[::-1]),
                          exactness=o.exactness, kind=f"reverse({o.kind})")


def product(x: LanguageOracle, y: LanguageOracle) -> LanguageOracle:
    ny = y.n_symbols
    labels = [f"({a},{b})" for a, b in cartesian(x.alphabet.labels, y.alphabet.labels)]
    split = lambda c: divmod(c, ny)  # noqa: E731

    def admits(w):
        ws = [split(c) for c in w]
        return x.admits(tuple(a for a, _ in ws)) and y.admits(tuple(b for _, b in ws))

    machine = None
    if x.machine is not None and y.machine is not None:
        machine = _PairMachine(x.machine, y.machine, split, "product",
                               x.has_exact_followers and y.has_exact_followers)
        if x.machine.finite and y.machine.finite and machine.complete:
            machine = _finite_table(machine, len(labels))
    return LanguageOracle(Alphabet(tuple(labels)), admits=admits, machine=machine,
                          exactness=_weaker(x.exactness, y.exactness),
                          kind=f"product({x.kind},{y.kind})")


def union(x: LanguageOracle, y: LanguageOracle, disjoint: bool = False) -> LanguageOracle:
    """Union of two subshifts.

    With ``disjoint=True`` the symbols are tagged ``1:`` and ``2:`` by
    origin, so the alphabets are always disjoint.  Otherwise both oracles
    must share an alphabet.
    """
    exactness = _weaker(x.exactness, y.exactness)
    kind = f"union({x.kind},{y.kind})"
    if disjoint:
        nx = x.n_symbols
        labels = tuple([f"1:{a}" for a in x.alphabet.labels]
                       + [f"2:{a}" for a in y.alphabet.labels])

        def admits(w):
            if all(c < nx for c in w):
                return x.admits(w)
            if all(c >= nx for c in w):
                return y.admits(tuple(c - nx for c in w))
            return False

        machine = None
        if x.machine is not None and y.machine is not None:
            machine = _TaggedMachine(x.machine, y.machine, nx,
                                     x.has_exact_followers and y.has_exact_followers)
            if x.machine.finite and y.machine.finite and machine.complete:
                machine = _finite_table(machine, len(labels))
        return LanguageOracle(Alphabet(labels), admits=admits, machine=machine,
                              exactness=exactness, kind=kind)
    if x.alphabet != y.alphabet:
        raise InvalidSpec("union needs a shared alphabet (or disjoint tagging)")
    admits = lambda w: x.admits(w) or y.admits(w)  # noqa: E731
    if (isinstance(x.machine, FiniteDFA) and isinstance(y.machine, FiniteDFA)
            and x.has_exact_followers and y.has_exact_followers):
        return LanguageOracle(x.alphabet, machine=union_dfa(x.machine, y.machine),
                              exactness=exactness, kind=kind)
    machine = None
    if x.machine is not None and y.machine is not None:
        # pairs of follower classes need not be distinct follower classes
        machine = _PairMachine(x.machine, y.machine, lambda c: (c, c), "union", False)
    return LanguageOracle(x.alphabet, admits=admits, machine=machine,
                          exactness=exactness, kind=kind)


# ---------------------------------------------------------------- enumeration

def enumerate_language(o: LanguageOracle, n: int) -> list[Word]:
    """Admitted words of length n in lexicographic order (pruned DFS)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out: list[Word] = []
    k = o.n_symbols
    m = o.machine
    if m is not None:
        stack: list[tuple[Word, Hashable]] = [((), m.start)]
        while stack:
            w, s = stack.pop()
            if len(w) == n:
                out.append(w)
                continue
            for a in reversed(range(k)):
                t = m.step(s, a)
                if t is not None:
                    stack.append((w + (a,), t))
        return out
    stack2: list[Word] = [()]
    while stack2:
        w = stack2.pop()
        if len(w) == n:
            out.append(w)
            continue
        for a in reversed(range(k)):
            if o.admits(w + (a,)):
                stack2.append(w + (a,))
    return out


def naive_language(o: LanguageOracle, n: int) -> list[Word]:
    """Filter of all of A^n; used to cross-check the pruned enumeration."""
    return [w for w in cartesian(range(o.n_symbols), repeat=n) if o.admits(w)]


def full_shift(k: int, labels: Iterable | None = None) -> LanguageOracle:
    alphabet = Alphabet.of(labels if labels is not None else range(k))
    return make_sft(SftSpec(alphabet, []))
