"""Periodic points, zeta series and truncated block determinants.

The primary series is ``exp(-sum p_n z^n / n)``, the reciprocal of the
classical Artin-Mazur zeta function; ``zeta_series`` gives the classical
one.  For a countable diagram with adjacency ``K`` the reciprocal zeta
function is approached by ``det(I - zK)`` of finite truncations, and the
truncated determinant is evaluated through the block decomposition

    det(I - zK) = det(I - zB) * det(I - zA - z^2 U (I - zB)^{-1} V),

with ``(I - zB)^{-1}`` expanded as ``sum z^m B^m`` and
``det(I - zB) = exp(-sum tr(B^m) z^m / m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

import numpy as np
from scipy import sparse

from .automata import FiniteDFA
from .diagram import Diagram
from .errors import SplitOutOfRange
from .oracles import LanguageOracle, enumerate_language
from .series import PowerSeries

MONOID_CAP = 200_000


@dataclass
class PeriodicCountTable:
    """``counts[n-1]`` is the number of points of period dividing n."""

    counts: list[int]
    exact: bool
    method: str
    horizon: int | None = None

    def p(self, n: int) -> int:
        return self.counts[n - 1]

    @property
    def n_max(self) -> int:
        return len(self.counts)


# ---------------------------------------------------------------- periodic points

def _monoid_counts(m: FiniteDFA, n_max: int) -> list[int] | None:
    """Words w with w^(S+1) admitted, by DP over transformations of the states."""
    S = m.n_states
    ident = tuple(range(S))
    level = {ident: 1}
    out = []
    for _ in range(n_max):
        nxt: dict = {}
        for f, c in level.items():
            for a in range(m.n_symbols):
                g = tuple(-1 if s < 0 else m.delta[s][a] for s in f)
                if all(x < 0 for x in g):
                    continue
                nxt[g] = nxt.get(g, 0) + c
        level = nxt
        if len(level) > MONOID_CAP:
            return None
        total = 0
        for f, c in level.items():
            s = m.start
            for _ in range(S + 1):
                s = f[s]
                if s < 0:
                    break
            if s >= 0:
                total += c
        out.append(total)
    return out


def periodic_counts(o: LanguageOracle, n_max: int, horizon_factor: int = 3
                    ) -> PeriodicCountTable:
    """#{x : sigma^n x = x} for n = 1..n_max.

    Finite follower machines are exact (a word w gives a periodic point
    iff w^(S+1) is admitted, S the number of states).  Other oracles test
    ``w^H`` with ``H = horizon_factor * n`` and are flagged approximate.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    m = o.machine
    if isinstance(m, FiniteDFA) and m.complete:
        counts = _monoid_counts(m, n_max)
        if counts is not None:
            return PeriodicCountTable(counts, o.exact, "monoid")
        return periodic_counts_cyclic(o, n_max, pump=m.n_states + 1)
    return periodic_counts_cyclic(o, n_max, horizon_factor=horizon_factor)


def periodic_counts_cyclic(o: LanguageOracle, n_max: int, pump: int | None = None,
                           horizon_factor: int = 3) -> PeriodicCountTable:
    """Cyclic-word check: w contributes iff w repeated ``pump`` times is admitted."""
    counts = []
    for n in range(1, n_max + 1):
        reps = pump if pump is not None else horizon_factor * n
        counts.append(sum(1 for w in enumerate_language(o, n) if o.admits(w * reps)))
    exact = pump is not None and o.exact
    return PeriodicCountTable(counts, exact, "pumping" if pump else "horizon",
                              None if pump else horizon_factor)


def sft_periodic_counts(forbidden, n_symbols: int, n_max: int) -> list[int]:
    """Window check on cyclic words: no forbidden word in w·w (exhaustive)."""
    ell = max((len(f) for f in forbidden), default=1)
    out = []
    for n in range(1, n_max + 1):
        c = 0
        for w in cartesian(range(n_symbols), repeat=n):
            ww = w * (1 + -(-ell // n))
            if not any(ww[i:i + len(f)] == tuple(f) for f in forbidden for i in range(n)):
                c += 1
        out.append(c)
    return out


def primitive_orbits(table: PeriodicCountTable) -> list[int]:
    """Number of primitive orbits of each period (Moebius inversion)."""
    out = []
    for n in range(1, table.n_max + 1):
        s = sum(_mobius(n // d) * table.p(d) for d in range(1, n + 1) if n % d == 0)
        out.append(s // n)
    return out


def _mobius(n: int) -> int:
    res, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            res = -res
        k += 1
    return -res if n > 1 else res


# ---------------------------------------------------------------- series

def zeta_inverse_series(table: PeriodicCountTable, d: int) -> PowerSeries:
    """exp(-sum_{n<=d} p_n z^n / n), exact."""
    if d > table.n_max:
        raise ValueError(f"degree {d} exceeds the table length {table.n_max}")
    f = PowerSeries([0] + [Fraction(-table.p(n), n) for n in range(1, d + 1)])
    return f.exp()


def zeta_series(table: PeriodicCountTable, d: int) -> PowerSeries:
    return zeta_inverse_series(table, d).inverse()


def euler_product(table: PeriodicCountTable, d: int) -> PowerSeries:
    """prod over primitive orbits of (1 - z^period), through degree d."""
    out = PowerSeries.one(d)
    for n, k in enumerate(primitive_orbits(table)[:d], 1):
        factor = PowerSeries([1] + [0] * (n - 1) + [-1], d)
        for _ in range(k):
            out = out * factor
    return out


# ---------------------------------------------------------------- determinants

@dataclass
class BlockSplit:
    K: np.ndarray
    n_split: int
    A: np.ndarray = field(repr=False, default=None)
    U: np.ndarray = field(repr=False, default=None)
    V: np.ndarray = field(repr=False, default=None)
    B: sparse.csr_matrix = field(repr=False, default=None)


def block_split(d: Diagram, n_split: int, k_trunc: int) -> BlockSplit:
    if not 1 <= n_split <= k_trunc <= len(d):
        raise SplitOutOfRange(f"need 1 <= n_split ({n_split}) <= k_trunc ({k_trunc}) "
                              f"<= vertices ({len(d)})")
    rows, cols = [], []
    for i, j, _ in d.arrows:
        if i < k_trunc and j < k_trunc:
            rows.append(i)
            cols.append(j)
    K = sparse.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)),
                          shape=(k_trunc, k_trunc))
    n = n_split
    return BlockSplit(K, n, K[:n, :n].toarray(), K[:n, n:].toarray(), K[n:, :n].toarray(),
                      K[n:, n:].tocsr())


def default_split(d: Diagram) -> int:
    """Vertices of length <= ceil(N/2): the long constraints are left in B.

    A split at the letters alone can push every cycle of a small diagram
    into B, whose zeros then hide the pole from detD.
    """
    half = -(-(d.truncation or max(len(v.word) for v in d.vertices)) // 2)
    n = sum(1 for v in d.vertices if len(v.word) <= half)
    return max(1, min(n, len(d)))


def _check_exact(bound_base: int, deg: int):
    if bound_base > 1 and deg * math.log2(bound_base) > 62:
        raise OverflowError("path counts may exceed 64-bit integers; lower the degree")


def block_traces(B: sparse.csr_matrix, deg: int, chunk: int = 512) -> list[int]:
    """tr(B^m) for m = 1..deg by repeated sparse products on column chunks."""
    k = B.shape[0]
    traces = [0] * deg
    for lo in range(0, k, chunk):
        hi = min(k, lo + chunk)
        X = np.zeros((k, hi - lo), dtype=np.int64)
        X[np.arange(lo, hi), np.arange(hi - lo)] = 1
        for m in range(deg):
            X = B @ X
            traces[m] += int(np.trace(X[lo:hi, :]))
            if not X.any():
                break
    return traces


def _series_matrix_det(E: list[list[list[int]]], deg: int) -> list[int]:
    """det of a matrix of integer series with E(0) = I (pivots have c0 = 1)."""
    n = len(E)
    M = [[list(e) for e in row] for row in E]

    def mul(a, b):
        out = [0] * (deg + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(deg + 1 - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return out

    def inv(a):
        out = [1] + [0] * deg
        for t in range(1, deg + 1):
            out[t] = -sum(a[s] * out[t - s] for s in range(1, t + 1))
        return out

    det = [1] + [0] * deg
    for c in range(n):
        piv = M[c][c]
        if piv[0] != 1:
            raise ArithmeticError("pivot constant term is not 1")
        det = mul(det, piv)
        pinv = inv(piv)
        for r in range(c + 1, n):
            if not any(M[r][c]):
                continue
            factor = mul(M[r][c], pinv)
            for j in range(c + 1, n):
                if any(M[c][j]):
                    prod = mul(factor, M[c][j])
                    M[r][j] = [x - y for x, y in zip(M[r][j], prod)]
    return det


def truncated_determinant(d: Diagram, n_split: int, k_trunc: int, deg: int
                          ) -> tuple[PowerSeries, PowerSeries, PowerSeries]:
    """(B_n, detD_n, B_n * detD_n) through degree ``deg``."""
    if deg < 1:
        raise ValueError("deg must be >= 1")
    split = block_split(d, n_split, k_trunc)
    _check_exact(d.oracle.n_symbols, deg)
    B, n = split.B, n_split
    traces = block_traces(B, deg) if B.shape[0] else [0] * deg
    b_series = PowerSeries([0] + [Fraction(-t, m) for m, t in enumerate(traces, 1)]).exp()
    # W_m = U B^m V for m = 0..deg-2
    Ws = []
    X = split.V.astype(np.int64)
    for _ in range(max(deg - 1, 0)):
        if B.shape[0] == 0:
            break
        Ws.append(split.U @ X)
        X = B @ X
    E = [[[0] * (deg + 1) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        E[i][i][0] = 1
        for j in range(n):
            E[i][j][1] -= int(split.A[i, j])
            for m, W in enumerate(Ws):
                if m + 2 <= deg:
                    E[i][j][m + 2] -= int(W[i, j])
    det = PowerSeries(_series_matrix_det(E, deg))
    return b_series, det, b_series * det


def det_series(d: Diagram, k_trunc: int, deg: int) -> PowerSeries:
    """det(I - zK) of the first k_trunc vertices, through degree deg, via traces."""
    split = block_split(d, k_trunc, k_trunc)
    traces = block_traces(split.K, deg)
    return PowerSeries([0] + [Fraction(-t, m) for m, t in enumerate(traces, 1)]).exp()


# ---------------------------------------------------------------- poles and growth

@dataclass(frozen=True)
class Pole:
    root: complex
    modulus: float
    residual: float


def pole_estimates(detD: PowerSeries, max_roots: int | None = None) -> list[Pole]:
    """Roots of the polynomial truncation, sorted by modulus, with residuals."""
    cs = [float(c) for c in detD.coeffs]
    while len(cs) > 1 and cs[-1] == 0.0:
        cs.pop()
    if len(cs) <= 1:
        if cs[0] == 0.0:
            raise ValueError("detD is zero")
        return []
    roots = np.roots(cs[::-1])
    out = []
    for r in roots:
        val = np.polyval(cs[::-1], r)
        scale = sum(abs(c) * abs(r) ** k for k, c in enumerate(cs))
        out.append(Pole(complex(r), float(abs(r)), float(abs(val) / max(scale, 1e-300))))
    out.sort(key=lambda p: (p.modulus, p.root.real, p.root.imag))
    return out[:max_roots] if max_roots is not None else out


def growth_ratio(table: PeriodicCountTable, h: float, tail: int | None = None
                 ) -> tuple[list[tuple[int, float]], tuple[float, float]]:
    """(n, p_n e^{-n h}) for every n, plus (min, max) over the tail."""
    if h < 0:
        raise ValueError("h must be >= 0")
    seq = [(n, table.p(n) * math.exp(-n * h)) for n in range(1, table.n_max + 1)]
    t = tail if tail is not None else max(1, math.ceil(len(seq) / 3))
    vals = [v for _, v in seq[-t:]]
    return seq, (min(vals), max(vals))
