"""Piecewise affine interval maps with rational data.

The symbolic language of a map is read off geometric cylinders
``<A_0...A_k> = A_0 ∩ f^{-1}A_1 ∩ ... ∩ f^{-k}A_k``.  Each cylinder is
an open interval on which ``f^k`` is affine, so everything is decided
with exact ``Fraction`` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .automata import Machine
from .errors import InvalidSpec
from .words import Alphabet, Word


@dataclass(frozen=True)
class PwmSpec:
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[tuple[Fraction, Fraction], ...]  # (slope, intercept)
    labels: tuple[str, ...]

    def __post_init__(self):
        b, p = self.breakpoints, self.pieces
        if len(b) != len(p) + 1 or len(self.labels) != len(p) or not p:
            raise InvalidSpec("pwm needs k pieces, k labels and k+1 breakpoints")
        for lo, hi in zip(b, b[1:]):
            if not lo < hi:
                raise InvalidSpec("degenerate piece: breakpoints must increase")
        for i, (s, c) in enumerate(p):
            if s == 0:
                raise InvalidSpec(f"piece {i} has zero slope")
            lo, hi = sorted((s * b[i] + c, s * b[i + 1] + c))
            if lo < b[0] or hi > b[-1]:
                raise InvalidSpec(f"image of piece {i} leaves the interval")

    @classmethod
    def make(cls, breakpoints: Sequence, pieces: Sequence, labels: Sequence | None = None):
        bp = tuple(Fraction(x) for x in breakpoints)
        pc = tuple((Fraction(s), Fraction(c)) for s, c in pieces)
        lab = tuple(str(x) for x in labels) if labels is not None else tuple(
            str(i) for i in range(len(pc)))
        return cls(bp, pc, lab)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.labels)

    def piece(self, a: int) -> tuple[Fraction, Fraction]:
        return self.breakpoints[a], self.breakpoints[a + 1]

    def image(self, a: int, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        s, c = self.pieces[a]
        u, v = s * lo + c, s * hi + c
        return (u, v) if u < v else (v, u)

    def boundary_points(self) -> list[Fraction]:
        """Endpoints of the images of the pieces."""
        pts = set()
        for a in range(len(self.pieces)):
            pts.update(self.image(a, *self.piece(a)))
        return sorted(pts)


class PwmMachine(Machine):
    """Forward propagation of the image interval ``f^{|w|-1}<w>``.

    The state ``(a, lo, hi)`` is the open interval reached inside piece
    ``a``.  It decides admissibility exactly; equal states give equal
    followers, but distinct states need not differ, so ``complete`` is
    false and follower comparisons go through depth profiles.
    """

    complete = False
    finite = False
    start = ()  # before the first letter: the whole interval

    def __init__(self, spec: PwmSpec):
        self.spec = spec
        # rational arithmetic is slow and many maps revisit few intervals
        self.step = lru_cache(maxsize=1 << 16)(self._step)

    def _step(self, s, a):
        plo, phi = self.spec.piece(a)
        if s == ():
            return (a, plo, phi)
        last, lo, hi = s
        ilo, ihi = self.spec.image(last, lo, hi)
        lo, hi = max(ilo, plo), min(ihi, phi)
        if lo >= hi:
            return None
        return (a, lo, hi)


class PwmReverseMachine(Machine):
    """Reads a word backwards: the state is the cylinder of the letters read so far.

    Reading ``a`` in front of a suffix ``u`` gives
    ``<a u> = A_a  intersected with  f_a^{-1} <u>``, so the reversed
    language is decided exactly and deterministically.
    """

    complete = False
    finite = False
    start = ()

    def __init__(self, spec: PwmSpec):
        self.spec = spec
        self.step = lru_cache(maxsize=1 << 16)(self._step)

    def _step(self, s, a):
        plo, phi = self.spec.piece(a)
        if s == ():
            return (plo, phi)
        slope, c = self.spec.pieces[a]
        u, v = (s[0] - c) / slope, (s[1] - c) / slope
        if u > v:
            u, v = v, u
        lo, hi = max(u, plo), min(v, phi)
        if lo >= hi:
            return None
        return (lo, hi)


def cylinder(spec: PwmSpec, w: Word) -> tuple[Fraction, Fraction] | None:
    """The open interval ``<w>`` in the ambient interval, or None if empty."""
    if not w:
        return spec.breakpoints[0], spec.breakpoints[-1]
    lo, hi = spec.piece(w[0])
    # g: the affine map f^k restricted to the current cylinder
    gs, gc = Fraction(1), Fraction(0)
    for prev, a in zip(w, w[1:]):
        s, c = spec.pieces[prev]
        gs, gc = s * gs, s * gc + c
        plo, phi = spec.piece(a)
        u, v = (plo - gc) / gs, (phi - gc) / gs
        if u > v:
            u, v = v, u
        lo, hi = max(lo, u), min(hi, v)
        if lo >= hi:
            return None
    return lo, hi


def boundary_cylinder_count(spec: PwmSpec, n: int) -> int:
    """Admitted n-cylinders whose closure meets an image-boundary point."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = spec.boundary_points()
    k = len(spec.pieces)
    count = 0
    stack: list[Word] = [(a,) for a in reversed(range(k))]
    while stack:
        w = stack.pop()
        cyl = cylinder(spec, w)
        if cyl is None:
            continue
        lo, hi = cyl
        if not any(lo <= p <= hi for p in pts):
            continue
        if len(w) == n:
            count += 1
        else:
            stack.extend(w + (a,) for a in reversed(range(k)))
    return count
