"""Entropy estimates from count sequences.

A limsup of ``(1/n) log+ count(n)`` cannot be read off finitely many
terms; the two estimators below are desk-scale surrogates.  ``TailMax``
takes the largest normalized logarithm over the last entries,
``SlopeFit`` fits a line to ``log count`` against ``n`` over the same
tail (useful when nonzero counts only occur at sparse lengths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .counting import DEFAULT_BUDGET, CountSequence
from .follower import (constraint_counts, extendable_counts, follower_counts,
                       keller_capacity_counts, language_counts, minimal_forbidden_counts)
from .oracles import LanguageOracle, reverse
from .pwm import boundary_cylinder_count

TAILMAX = "TailMax"
SLOPEFIT = "SlopeFit"

QFT = "QftEvidence"
WEAK_QFT = "WeakQftEvidence"
INCONCLUSIVE = "Inconclusive"


def log_plus(x: float) -> float:
    return math.log(x) if x > 1 else 0.0


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    window: tuple[int, int]
    method: str
    lower_bound_only: bool
    quantity: str = ""

    def as_dict(self) -> dict:
        return {"value": self.value, "window": list(self.window), "method": self.method,
                "lower_bound_only": self.lower_bound_only}


def default_tail(length: int) -> int:
    return max(1, math.ceil(length / 3))


def estimate(seq: CountSequence, method: str = TAILMAX, tail: int | None = None,
             nonzero_only: bool = False) -> EntropyEstimate:
    """Entropy estimate of a count sequence (nats).

    ``nonzero_only`` drops zero counts first, which is how sparse
    sequences are fitted.
    """
    pairs = [(n, c) for n, c in zip(seq.ns, seq.counts) if not nonzero_only or c > 0]
    if not pairs:
        n0 = seq.ns[0] if seq.ns else 0
        return EntropyEstimate(0.0, (n0, n0), method, seq.lower_bound, seq.quantity)
    t = default_tail(len(pairs)) if tail is None else tail
    if t < 1:
        raise ValueError("tail must be >= 1")
    part = pairs[-t:]
    window = (part[0][0], part[-1][0])
    if method == TAILMAX:
        value = max(log_plus(c) / n for n, c in part if n > 0)
    elif method == SLOPEFIT:
        if len(part) < 2:
            n, c = part[0]
            value = log_plus(c) / n
        else:
            x = np.array([n for n, _ in part], dtype=float)
            y = np.array([log_plus(c) for _, c in part])
            value = float(np.polyfit(x, y, 1)[0])
    else:
        raise ValueError(f"unknown method {method!r}")
    return EntropyEstimate(max(value, 0.0), window, method, seq.lower_bound, seq.quantity)


@dataclass
class QftVerdict:
    h_top_est: EntropyEstimate
    hcs_est: EntropyEstimate
    hcs_rev_est: EntropyEstimate
    hcs_sym_est: EntropyEstimate
    hc_est: EntropyEstimate
    margin: float
    verdict: str

    def summary(self) -> str:
        return (f"verdict={self.verdict} h_top={self.h_top_est.value:.12g} "
                f"hcs={self.hcs_est.value:.12g} hcs_rev={self.hcs_rev_est.value:.12g} "
                f"hcs_sym={self.hcs_sym_est.value:.12g} hc={self.hc_est.value:.12g} "
                f"margin={self.margin:.12g}")


def classify(h_top: EntropyEstimate, hcs: EntropyEstimate, hcs_rev: EntropyEstimate,
             hc: EntropyEstimate, margin: float) -> QftVerdict:
    sym = hcs if hcs.value <= hcs_rev.value else hcs_rev
    sym = EntropyEstimate(min(hcs.value, hcs_rev.value), sym.window, sym.method,
                          hcs.lower_bound_only or hcs_rev.lower_bound_only, "hcs_sym")
    if sym.value + margin < h_top.value:
        verdict = QFT
    elif hc.value + margin < h_top.value:
        verdict = WEAK_QFT
    else:
        verdict = INCONCLUSIVE
    return QftVerdict(h_top, hcs, hcs_rev, sym, hc, margin, verdict)


@dataclass
class SuiteResult:
    sequences: dict[str, CountSequence]
    estimates: dict[str, EntropyEstimate]
    verdict: QftVerdict
    params: dict = field(default_factory=dict)

    @property
    def truncated(self) -> bool:
        return any(s.truncated for s in self.sequences.values())


def entropy_suite(o: LanguageOracle, n_max: int, k: int | None = None,
                  horizon: int | None = None, tail: int | None = None, r_max: int = 1,
                  margin: float | None = None, budget: int = DEFAULT_BUDGET,
                  hm_method: str = TAILMAX) -> SuiteResult:
    """All count sequences of an oracle, their estimates and the verdict."""
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    M = horizon if horizon is not None else n_max + 1
    seqs: dict[str, CountSequence] = {
        "h_top": language_counts(o, n_max, budget),
        "hcs": constraint_counts(o, n_max, k, budget),
        "hcs_rev": constraint_counts(reverse(o), n_max, k, budget),
        "hc": extendable_counts(o, min(n_max, M - 1), M),
        "h_M": minimal_forbidden_counts(o, n_max, budget),
        "h_fol": follower_counts(o, n_max, k, budget),
        "cap": keller_capacity_counts(o, n_max, r_max, k, budget),
    }
    # the weak (footnote) reading is reported only where it differs
    weak = extendable_counts(o, min(n_max, M - 1), M, weak=True)
    if weak.counts != seqs["hc"].counts:
        seqs["hc_weak"] = weak
    if o.kind == "pwm":
        spec = o.info["pwm"]
        ns = list(range(1, n_max + 1))
        seqs["h_B"] = CountSequence("boundary", ns, [boundary_cylinder_count(spec, n) for n in ns])
    for name, s in seqs.items():
        s.quantity = name
    ests = {}
    for name, s in seqs.items():
        if name == "h_M":
            ests[name] = estimate(s, hm_method, tail, nonzero_only=hm_method == SLOPEFIT)
        else:
            ests[name] = estimate(s, TAILMAX, tail)
    if margin is None:
        margin = 2.0 / n_max * math.log(max(o.n_symbols, 2))
    verdict = classify(ests["h_top"], ests["hcs"], ests["hcs_rev"], ests["hc"], margin)
    ests["hcs_sym"] = verdict.hcs_sym_est
    return SuiteResult(seqs, ests, verdict,
                       {"n_max": n_max, "depth": k, "horizon": M, "r_max": r_max,
                        "tail": tail if tail is not None else "default"})
