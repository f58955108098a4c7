from __future__ import annotations

from pathlib import Path

from hypothesis import settings

from qft.oracles import LanguageOracle, SftSpec, SoficSpec, make_sft, make_sofic
from qft.specio import load_spec
from qft.words import Alphabet

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def fixture(name: str):
    return load_spec(FIXTURES / f"{name}.json")


def sft(alphabet: str, *forbidden: str):
    A = Alphabet.of(alphabet)
    return make_sft(SftSpec(A, [A.parse(f) for f in forbidden]))


def even_sofic():
    A = Alphabet.of("012")
    edges = [("E", "E", 0), ("E", "O", 1), ("E", "O", 2), ("O", "E", 1), ("O", "E", 2)]
    return make_sofic(SoficSpec(A, ["E", "O"], edges))


def admits_only(o):
    """The same language without a follower machine (forces depth mode)."""
    return LanguageOracle(o.alphabet, admits=o.admits, kind="plain")


# acceptance lines, printed once at the end of the run
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    ACCEPTANCE[criterion] = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
