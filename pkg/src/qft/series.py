"""Truncated formal power series with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Number = int | Fraction | float


class PowerSeries:
    """c_0 + c_1 z + ... + c_d z^d, all arithmetic truncated at degree d."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number], degree: int | None = None):
        cs = list(coeffs)
        if degree is not None:
            cs = (cs + [0] * (degree + 1))[:degree + 1]
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs = [_norm(c) for c in cs]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, degree: int) -> "PowerSeries":
        return cls([1], degree)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, PowerSeries):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == [_norm(c) for c in other]
        return NotImplemented

    def __repr__(self):
        return f"PowerSeries({[str(c) for c in self.coeffs]})"

    def truncate(self, degree: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, degree)

    def _pair(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other], self.degree)
        d = min(self.degree, other.degree)
        return self.coeffs[:d + 1], other.coeffs[:d + 1], d

    def __add__(self, other):
        a, b, d = self._pair(other)
        return PowerSeries([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        a, b, d = self._pair(other)
        return PowerSeries([x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries([c * other for c in self.coeffs])
        a, b, d = self._pair(other)
        out = [0] * (d + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(d + 1 - i):
                    out[i + j] += x * b[j]
        return PowerSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "PowerSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = Fraction(1) / c0 if not isinstance(c0, float) else 1.0 / c0
        out = [inv0]
        for n in range(1, len(self.coeffs)):
            s = sum(self.coeffs[k] * out[n - k] for k in range(1, n + 1))
            out.append(-s * inv0)
        return PowerSeries(out)

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return self * other.inverse()
        return PowerSeries([Fraction(c) / other for c in self.coeffs])

    def derivative(self) -> list:
        return [k * c for k, c in enumerate(self.coeffs)][1:]

    def exp(self) -> "PowerSeries":
        """exp(f) for f with zero constant term (f' g = g' recursion)."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a zero constant term")
        d = self.degree
        out = [Fraction(1)] + [Fraction(0)] * d
        # n g_n = sum_{k=1}^{n} k f_k g_{n-k}
        for n in range(1, d + 1):
            s = sum(k * self.coeffs[k] * out[n - k] for k in range(1, n + 1))
            out[n] = Fraction(s) / n
        return PowerSeries(out)

    def log(self) -> "PowerSeries":
        """log(f) for f with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        d = self.degree
        fp = PowerSeries(self.derivative() + [0], d)
        q = (fp * self.inverse()).coeffs
        return PowerSeries([0] + [Fraction(q[k - 1]) / k for k in range(1, d + 1)])

    def evaluate(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def to_json(self) -> list[dict]:
        out = []
        for c in self.coeffs:
            f = Fraction(c)
            out.append({"num": f.numerator, "den": f.denominator})
        return out

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "PowerSeries":
        return cls([Fraction(x["num"], x["den"]) for x in data])


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c
