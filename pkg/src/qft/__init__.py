"""Constraint entropies, Markov diagrams and zeta functions of subshifts."""

from __future__ import annotations

__version__ = "0.1.0"

from .diagram import (build_complete_diagram, build_hofbauer_diagram, lift, max_measure,
                      project, scc_decompose)
from .entropy import entropy_suite, estimate
from .errors import QftError
from .follower import (compare_followers, constraint_counts, follower_signature,
                       left_constraints, markov_depth)
from .oracles import (BetaSpec, LanguageOracle, SftSpec, SoficSpec, enumerate_language,
                      full_shift, make_beta, make_block_code, make_pwm, make_sft, make_sofic,
                      product, reverse, union)
from .pwm import PwmSpec
from .series import PowerSeries
from .specio import load_spec
from .words import Alphabet
from .zeta import periodic_counts, truncated_determinant, zeta_inverse_series

__all__ = [
    "Alphabet", "BetaSpec", "LanguageOracle", "PowerSeries", "PwmSpec", "QftError", "SftSpec",
    "SoficSpec", "build_complete_diagram", "build_hofbauer_diagram", "compare_followers",
    "constraint_counts", "entropy_suite", "enumerate_language", "estimate",
    "follower_signature", "full_shift", "left_constraints", "lift", "load_spec",
    "make_beta", "make_block_code", "make_pwm", "make_sft", "make_sofic", "markov_depth",
    "max_measure", "periodic_counts", "product", "project", "reverse", "scc_decompose",
    "truncated_determinant", "union", "zeta_inverse_series",
]
