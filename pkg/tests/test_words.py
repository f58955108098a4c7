from __future__ import annotations

import pytest

from qft.errors import InvalidSpec
from qft.words import Alphabet, is_factor, suffixes


def test_parse_and_format_single_char():
    A = Alphabet.of("012")
    assert A.parse("0120") == (0, 1, 2, 0)
    assert A.format((2, 1)) == "21"


def test_multi_char_labels_split_on_whitespace():
    A = Alphabet(("(0,0)", "(0,1)"))
    w = A.parse("(0,1) (0,0)")
    assert w == (1, 0)
    assert A.format(w) == "(0,1) (0,0)"


def test_empty_word_roundtrip():
    A = Alphabet.of("ab")
    assert A.parse("") == ()
    assert A.format(()) == ""


def test_bad_alphabets():
    with pytest.raises(InvalidSpec):
        Alphabet(())
    with pytest.raises(InvalidSpec):
        Alphabet(("a", "a"))
    with pytest.raises(InvalidSpec):
        Alphabet.of("ab").parse("abc")


def test_suffixes_and_factors():
    assert suffixes((1, 2, 3)) == [(3,), (2, 3), (1, 2, 3)]
    assert is_factor((2, 3), (1, 2, 3))
    assert is_factor((), (1,))
    assert not is_factor((3, 2), (1, 2, 3))
