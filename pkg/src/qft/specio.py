"""JSON shift specifications.

A spec is an object with a ``type`` field:

* ``sft``: ``alphabet`` (list of labels), ``forbidden`` (list of words)
* ``sofic``: ``alphabet``, ``states``, ``edges`` as ``[source, target, label]``
* ``beta``: ``preperiod`` and ``period`` digit lists of the expansion of 1
* ``pwm``: ``breakpoints``, ``pieces`` as ``[slope, intercept]``, optional ``labels``
* ``block``: either ``family`` (``keller`` or ``sigma1``) or ``alphabet`` + ``blocks``
* ``product`` / ``union``: ``left`` and ``right`` sub-specs (inline objects or
  paths relative to the file); ``union`` also takes ``disjoint``
* ``reverse``: ``of``

Words are strings (split per character when every label is one character,
otherwise on whitespace) or lists of labels.  Rationals are integers or
``{"num": p, "den": q}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .blocks import ListedFamily, family
from .errors import InvalidSpec
from .oracles import (BetaSpec, LanguageOracle, SftSpec, SoficSpec, make_beta,
                      make_block_code, make_pwm, make_sft, make_sofic, product, reverse, union)
from .pwm import PwmSpec
from .words import Alphabet


def rational(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise InvalidSpec(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, dict) and set(x) == {"num", "den"}:
        if not all(isinstance(v, int) for v in x.values()) or x["den"] == 0:
            raise InvalidSpec(f"bad rational {x!r}")
        return Fraction(x["num"], x["den"])
    raise InvalidSpec(f"not a rational: {x!r}")


def rational_json(q: Fraction) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def _require(doc: dict, *keys: str):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise InvalidSpec(f"{doc.get('type')} spec is missing {', '.join(missing)}")


def _alphabet(doc: dict) -> Alphabet:
    labels = doc.get("alphabet")
    if not isinstance(labels, list):
        raise InvalidSpec("alphabet must be a list of labels")
    return Alphabet.of(labels)


def oracle_from_spec(doc: Any, base: Path | None = None) -> LanguageOracle:
    if isinstance(doc, str):
        return load_spec((base or Path.cwd()) / doc)
    if not isinstance(doc, dict) or "type" not in doc:
        raise InvalidSpec("a spec must be an object with a 'type' field")
    kind = doc["type"]
    try:
        if kind == "sft":
            _require(doc, "alphabet")
            A = _alphabet(doc)
            return make_sft(SftSpec(A, [A.parse(w) for w in doc.get("forbidden", [])]))
        if kind == "sofic":
            _require(doc, "alphabet", "states", "edges")
            A = _alphabet(doc)
            edges = []
            for e in doc["edges"]:
                if not isinstance(e, list) or len(e) != 3:
                    raise InvalidSpec(f"edge {e!r} must be [source, target, label]")
                edges.append((e[0], e[1], A.index(str(e[2]))))
            return make_sofic(SoficSpec(A, list(doc["states"]), edges))
        if kind == "beta":
            _require(doc, "period")
            return make_beta(BetaSpec(list(doc.get("preperiod", [])), list(doc["period"])))
        if kind == "pwm":
            _require(doc, "breakpoints", "pieces")
            bps = [rational(x) for x in doc["breakpoints"]]
            pieces = []
            for p in doc["pieces"]:
                if not isinstance(p, list) or len(p) != 2:
                    raise InvalidSpec(f"piece {p!r} must be [slope, intercept]")
                pieces.append((rational(p[0]), rational(p[1])))
            return make_pwm(PwmSpec.make(bps, pieces, doc.get("labels")))
        if kind == "block":
            if "family" in doc:
                return make_block_code(family(doc["family"]))
            _require(doc, "alphabet", "blocks")
            A = _alphabet(doc)
            return make_block_code(ListedFamily(A, [A.parse(b) for b in doc["blocks"]]))
        if kind in ("product", "union"):
            _require(doc, "left", "right")
            x = oracle_from_spec(doc["left"], base)
            y = oracle_from_spec(doc["right"], base)
            if kind == "product":
                return product(x, y)
            return union(x, y, disjoint=bool(doc.get("disjoint", False)))
        if kind == "reverse":
            _require(doc, "of")
            return reverse(oracle_from_spec(doc["of"], base))
    except (TypeError, ValueError, KeyError) as e:
        raise InvalidSpec(f"malformed {kind} spec: {e}") from e
    raise InvalidSpec(f"unknown spec type {kind!r}")


def load_spec(path: str | Path) -> LanguageOracle:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as e:
        raise InvalidSpec(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidSpec(f"{path} is not valid JSON: {e}") from e
    o = oracle_from_spec(doc, path.parent)
    o.info.setdefault("name", doc.get("name", path.stem))
    return o
