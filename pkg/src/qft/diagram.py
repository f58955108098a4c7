"""Complete and Hofbauer Markov diagrams, components and Perron data.

Vertices are indexed in (length, lexicographic) order of their words.
In the complete diagram a vertex is a word (a letter or a left
constraint); in the Hofbauer diagram a vertex is a follower set, named
by its shortest, lexicographically first representative word.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import networkx as nx
import numpy as np

from .errors import ExplosionBudgetExceeded, InvalidPath, SpectralFailure
from .follower import (NotStabilized, _letters, follower_signature, left_constraints,
                       markov_depth)
from .oracles import LanguageOracle
from .words import Word

COMPLETE = "Complete"
HOFBAUER = "Hofbauer"

TOL = 1e-10
MAX_ITER = 100_000


@dataclass(frozen=True)
class DiagramVertex:
    word: Word
    key: Hashable  # (last letter, follower state or profile)


@dataclass
class Diagram:
    kind: str
    vertices: list[DiagramVertex]
    arrows: list[tuple[int, int, int]]
    escaped: list[tuple[int, int]]
    truncation: int | None
    horizon_limited: bool
    oracle: LanguageOracle = field(repr=False)
    index: dict[Word, int] = field(default_factory=dict, repr=False)
    depth: int | None = None  # follower depth of the keys when horizon limited

    def __post_init__(self):
        if not self.index:
            self.index = {v.word: i for i, v in enumerate(self.vertices)}

    def __len__(self):
        return len(self.vertices)

    def successor(self, i: int, a: int) -> int | None:
        return self._succ().get((i, a))

    def _succ(self):
        cache = getattr(self, "_succ_cache", None)
        if cache is None:
            cache = {(i, a): j for i, j, a in self.arrows}
            self._succ_cache = cache
        return cache

    def adjacency(self, size: int | None = None) -> np.ndarray:
        """Dense 0/1 adjacency of the first ``size`` vertices."""
        k = len(self.vertices) if size is None else size
        A = np.zeros((k, k), dtype=np.int64)
        for i, j, _ in self.arrows:
            if i < k and j < k:
                A[i, j] += 1
        return A

    def label(self, i: int) -> str:
        return self.oracle.alphabet.format(self.vertices[i].word)


def _key(o: LanguageOracle, w: Word, k: int | None):
    s = follower_signature(o, w, k)
    return (s.last, s.key)


def _constraint_words(o: LanguageOracle, N: int, k: int | None) -> list[Word]:
    """Letters and constraints of length <= N, ordered by (length, lex)."""
    words = [(a,) for a in _letters(o)]
    if o.has_exact_followers:
        m = o.machine
        s0 = m.start
        layer = [((c,), m.step(s0, c), s0) for c in _letters(o)]
        for _ in range(2, N + 1):
            nxt = []
            for w, p, q in layer:
                for a in range(o.n_symbols):
                    p2 = m.step(p, a)
                    if p2 is None:
                        continue
                    q2 = m.step(q, a)
                    if p2 != q2:
                        nxt.append((w + (a,), p2, q2))
            layer = nxt
            words.extend(w for w, _, _ in layer)
        return words
    for n in range(2, N + 1):
        words.extend(c.word for c in left_constraints(o, n, k).constraints)
    return words


def build_complete_diagram(o: LanguageOracle, N: int, k: int | None = None,
                           max_vertices: int = 2_000_000) -> Diagram:
    """Letters and constraints of length <= N; arrows to the shortest stable suffix."""
    if N < 1:
        raise ValueError("N must be >= 1")
    words = _constraint_words(o, N, k)
    if len(words) > max_vertices:
        raise ExplosionBudgetExceeded(f"{len(words)} vertices exceed {max_vertices}")
    words.sort(key=lambda w: (len(w), w))
    index = {w: i for i, w in enumerate(words)}
    exact = o.has_exact_followers
    m = o.machine if exact else None
    # one depth for every key, otherwise words of different lengths never match
    depth = None if exact else (k if k is not None else N)
    keys = {}

    def key(w):
        if w not in keys:
            if m is not None:
                keys[w] = (w[-1], m.run(w))
            else:
                keys[w] = _key(o, w, depth)
        return keys[w]

    vertices = [DiagramVertex(w, key(w)) for w in words]
    arrows, escaped = [], []
    for i, u in enumerate(words):
        for a in range(o.n_symbols):
            ua = u + (a,)
            if not o.admits(ua):
                continue
            target = key(ua)
            for j in range(1, len(ua) + 1):
                if j > N:
                    escaped.append((i, a))
                    break
                v = ua[len(ua) - j:]
                if key(v) == target:
                    if v not in index:
                        # only reachable for depth-limited comparisons
                        escaped.append((i, a))
                    else:
                        arrows.append((i, index[v], a))
                    break
    return Diagram(COMPLETE, vertices, arrows, escaped, N, not exact, o, index, depth)


def build_hofbauer_diagram(o: LanguageOracle, k: int | None = None,
                           max_vertices: int = 100_000, max_length: int | None = None) -> Diagram:
    """Follower sets reachable from the single letters (breadth first).

    Without exact followers the vertices are depth-``k`` profiles and the
    diagram is flagged horizon-limited; ``max_length`` bounds the
    representative length in that case.
    """
    exact = o.has_exact_followers
    if not exact and k is None:
        raise ValueError("a depth k is required without exact followers")
    m = o.machine
    seen: dict = {}
    reps: list[Word] = []
    queue: deque = deque()
    for a in _letters(o):
        w = (a,)
        kk = (a, m.run(w)) if exact else _key(o, w, k)
        if kk not in seen:
            seen[kk] = len(reps)
            reps.append(w)
            queue.append((w, kk))
    arrows = []
    while queue:
        w, kk = queue.popleft()
        if max_length is not None and len(w) >= max_length:
            continue
        for a in range(o.n_symbols):
            if exact:
                t = m.step(kk[1], a)
                if t is None:
                    continue
                k2 = (a, t)
            else:
                if not o.admits(w + (a,)):
                    continue
                k2 = _key(o, w + (a,), k)
            if k2 not in seen:
                seen[k2] = len(reps)
                reps.append(w + (a,))
                queue.append((w + (a,), k2))
                if len(reps) > max_vertices:
                    raise ExplosionBudgetExceeded(f"more than {max_vertices} follower sets")
            arrows.append((seen[kk], seen[k2], a))
    keys = {i: kk for kk, i in seen.items()}
    vertices = [DiagramVertex(reps[i], keys[i]) for i in range(len(reps))]
    return Diagram(HOFBAUER, vertices, sorted(arrows), [], None, not exact, o,
                   depth=None if exact else k)


# ---------------------------------------------------------------- projection

def project(d: Diagram, path: Sequence[int]) -> Word:
    """Label sequence of a path: the last letter of every vertex."""
    path = list(path)
    adj = {(i, j) for i, j, _ in d.arrows}
    for i, j in zip(path, path[1:]):
        if (i, j) not in adj:
            raise InvalidPath(f"no arrow from {d.label(i)} to {d.label(j)}")
    for i in path:
        if not 0 <= i < len(d.vertices):
            raise InvalidPath(f"vertex index {i} out of range")
    return tuple(d.vertices[i].word[-1] for i in path)


def lift(d: Diagram, window: Word, k: int | None = None) -> list[int | None]:
    """Vertex sequence of a window; None where the Markov depth does not stabilize."""
    o = d.oracle
    k = k if k is not None else d.depth
    out: list[int | None] = []
    for i in range(1, len(window) + 1):
        prefix = tuple(window[:i])
        ell = markov_depth(o, prefix, k)
        if isinstance(ell, NotStabilized):
            out.append(None)
            continue
        v = prefix[len(prefix) - ell - 1:]
        if d.kind == HOFBAUER:
            kk = _key(o, v, k) if d.horizon_limited else (v[-1], o.state(v))
            match = [j for j, x in enumerate(d.vertices) if x.key == kk]
            out.append(match[0] if match else None)
        else:
            out.append(d.index.get(v))
    return out


# ---------------------------------------------------------------- components

@dataclass
class ComponentData:
    component: list[int]
    spectral_radius: float
    loop_counts: list[int]
    gurevich_estimate: float
    period: int
    right: np.ndarray | None = field(default=None, repr=False)
    left: np.ndarray | None = field(default=None, repr=False)
    iterations: int = 0

    @property
    def entropy(self) -> float:
        return math.log(self.spectral_radius) if self.spectral_radius > 0 else 0.0

    @property
    def has_cycle(self) -> bool:
        return self.spectral_radius > 0


def _component_edges(d: Diagram, comp: list[int]):
    pos = {v: i for i, v in enumerate(comp)}
    src, dst = [], []
    for i, j, _ in d.arrows:
        if i in pos and j in pos:
            src.append(pos[i])
            dst.append(pos[j])
    return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)


def _period(n: int, src, dst) -> int:
    adj: list[list[int]] = [[] for _ in range(n)]
    for s, t in zip(src.tolist(), dst.tolist()):
        adj[s].append(t)
    level = [-1] * n
    level[0] = 0
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for t in adj[s]:
            if level[t] < 0:
                level[t] = level[s] + 1
                queue.append(t)
    g = 0
    for s, t in zip(src.tolist(), dst.tolist()):
        g = math.gcd(g, level[s] + 1 - level[t])
    return g


def perron(n: int, src, dst, transpose: bool = False, tol: float = TOL,
           max_iter: int = MAX_ITER, shift: float = 0.0):
    """Power iteration for the Perron root of a nonnegative 0/1 matrix.

    ``(A + shift*I)`` is iterated from the all-ones vector; the returned
    value has the shift removed.
    """
    if transpose:
        src, dst = dst, src
    x = np.ones(n) / math.sqrt(n)
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = np.bincount(src, weights=x[dst], minlength=n) + shift * x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0, x, it
        y /= norm
        if abs(norm - lam) <= tol * max(1.0, norm) and float(np.abs(y - x).max()) <= tol:
            return norm - shift, y, it
        x, lam = y, norm
    raise SpectralFailure("power iteration did not converge",
                          {"iterations": max_iter, "last_value": lam - shift,
                           "size": n, "shift": shift})


def loop_counts(d: Diagram, base: int, comp: Sequence[int], n_max: int) -> list[int]:
    """Number of loops of length n at ``base`` inside the component, n = 1..n_max."""
    members = set(comp)
    out_edges: dict[int, list[int]] = {}
    for i, j, _ in d.arrows:
        if i in members and j in members:
            out_edges.setdefault(i, []).append(j)
    vec = {base: 1}
    counts = []
    for _ in range(n_max):
        nxt: dict[int, int] = {}
        for i, c in vec.items():
            for j in out_edges.get(i, ()):
                nxt[j] = nxt.get(j, 0) + c
        vec = nxt
        counts.append(vec.get(base, 0))
    return counts


def scc_decompose(d: Diagram, n_loops: int = 14) -> list[ComponentData]:
    """Strongly connected components ordered by their lowest vertex index."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(d.vertices)))
    g.add_edges_from((i, j) for i, j, _ in d.arrows)
    comps = sorted((sorted(c) for c in nx.strongly_connected_components(g)), key=lambda c: c[0])
    out = []
    for comp in comps:
        src, dst = _component_edges(d, comp)
        if len(src) == 0:
            out.append(ComponentData(comp, 0.0, [0] * n_loops, 0.0, 0))
            continue
        period = _period(len(comp), src, dst)
        shift = 1.0 if period > 1 else 0.0
        lam, r, it1 = perron(len(comp), src, dst, shift=shift)
        _, l, it2 = perron(len(comp), src, dst, transpose=True, shift=shift)
        loops = loop_counts(d, comp[0], comp, n_loops)
        tail = loops[-max(1, math.ceil(n_loops / 3)):]
        start = n_loops - len(tail) + 1
        gur = max(math.log(c) / n if c > 1 else 0.0 for n, c in enumerate(tail, start))
        out.append(ComponentData(comp, lam, loops, gur, period, r, l, max(it1, it2)))
    return out


def components_above(d: Diagram, h: float, comps: list[ComponentData] | None = None
                     ) -> list[ComponentData]:
    comps = scc_decompose(d) if comps is None else comps
    return [c for c in comps if c.spectral_radius > 0 and math.log(c.spectral_radius) > h]


def truncation_sweep(o: LanguageOracle, h: float, Ns: Sequence[int], k: int | None = None
                     ) -> list[tuple[int, int]]:
    """Number of components with entropy above h for each truncation N."""
    return [(N, len(components_above(build_complete_diagram(o, N, k), h))) for N in Ns]


# ---------------------------------------------------------------- measures

@dataclass
class MarkovMeasure:
    states: list[int]
    transition: np.ndarray
    stationary: np.ndarray
    entropy: float


def max_measure(c: ComponentData, d: Diagram) -> MarkovMeasure:
    """Parry measure of a component: P(i,j) = A(i,j) r(j) / (lambda r(i))."""
    if not c.has_cycle:
        raise SpectralFailure("component has no cycle", {"component": c.component})
    n = len(c.component)
    src, dst = _component_edges(d, c.component)
    A = np.zeros((n, n))
    A[src, dst] = 1.0
    r, l, lam = c.right, c.left, c.spectral_radius
    if r is None or l is None or np.any(r <= 0) or np.any(l <= 0):
        raise SpectralFailure("Perron vectors are not positive",
                              {"component": c.component, "iterations": c.iterations})
    P = A * r[None, :] / (lam * r[:, None])
    P /= P.sum(axis=1, keepdims=True)  # remove residual rounding
    pi = l * r
    pi /= pi.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(P > 0, np.log(np.where(P > 0, P, 1.0)), 0.0)
    entropy = float(-(pi[:, None] * P * logs).sum())
    return MarkovMeasure(list(c.component), P, pi, entropy)


# ---------------------------------------------------------------- export

def to_text(d: Diagram) -> str:
    lines = [f"# kind={d.kind} truncation={d.truncation} "
             f"horizon_limited={str(d.horizon_limited).lower()} vertices={len(d)}"]
    escaped_from = {i for i, _ in d.escaped}
    for i, v in enumerate(d.vertices):
        flags = []
        if len(v.word) == 1:
            flags.append("letter")
        if i in escaped_from:
            flags.append("escaping")
        lines.append(f"V\t{i}\t{d.label(i)}\t{','.join(flags) or '-'}")
    sym = d.oracle.alphabet.labels
    for i, j, a in d.arrows:
        lines.append(f"{d.label(i)}\t{sym[a]}\t{d.label(j)}")
    for i, a in d.escaped:
        lines.append(f"{d.label(i)}\t{sym[a]}\t*ESCAPED*")
    return "\n".join(lines) + "\n"


def to_dot(d: Diagram) -> str:
    sym = d.oracle.alphabet.labels
    lines = [f'digraph "{d.kind}" {{']
    for i in range(len(d)):
        lines.append(f'  v{i} [label="{d.label(i)}"];')
    for i, j, a in d.arrows:
        lines.append(f'  v{i} -> v{j} [label="{sym[a]}"];')
    for n, (i, a) in enumerate(d.escaped):
        lines.append(f'  esc{n} [shape=point]; v{i} -> esc{n} [label="{sym[a]}", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
