"""Alphabets and words.

Symbols are small integers indexing an alphabet table; a word is a tuple
of such integers.  The alphabet handles conversion from and to text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidSpec

Word = tuple[int, ...]
EMPTY: Word = ()


@dataclass(frozen=True)
class Alphabet:
    """Finite alphabet with unique display labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise InvalidSpec("empty alphabet")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidSpec(f"duplicate symbol labels in {self.labels}")

    @classmethod
    def of(cls, labels: Iterable) -> "Alphabet":
        return cls(tuple(str(x) for x in labels))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def symbols(self) -> range:
        return range(len(self.labels))

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidSpec(f"unknown symbol {label!r}") from None

    def parse(self, text: str | Sequence[str]) -> Word:
        """Parse a word.

        Strings are split into characters when all labels are single
        characters, otherwise on whitespace.  Sequences of labels are
        accepted as is.
        """
        if isinstance(text, str):
            if self.single_char and " " not in text:
                parts = list(text)
            else:
                parts = text.split()
        else:
            parts = [str(p) for p in text]
        return tuple(self.index(p) for p in parts)

    def format(self, w: Word) -> str:
        sep = "" if self.single_char else " "
        return sep.join(self.labels[a] for a in w)


def suffixes(w: Word) -> list[Word]:
    """Nonempty suffixes of w from shortest to longest."""
    return [w[len(w) - j:] for j in range(1, len(w) + 1)]


def is_factor(u: Word, w: Word) -> bool:
    m = len(u)
    return any(w[i:i + m] == u for i in range(len(w) - m + 1))
