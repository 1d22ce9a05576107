"""Text syntax for letters, words and configurations.

Grammar (whitespace separates ``key=value`` items, never letters)::

    letter  := "[" field ("," field)* "]" | char
    field   := one or more characters other than "[],=" and whitespace
    word    := letter*
    config  := item (ws item)*
    item    := ("left" | "center" | "right") "=" word | "offset=" int

A one-field letter ``[ab]`` is the plain symbol ``"ab"``; a bare character
``a`` is the symbol ``"a"``.  Two fields give an :class:`SCell`, three a
:class:`CellLetter`.  ``left`` and ``right`` are required; ``center``
defaults to empty and ``offset`` to 0.

    >>> parse_config("left=[B,>,.] center=[B,q0,.] right=[B,>,.] offset=0").center
    (CellLetter(tape='B', ctrl='q0', particle='.'),)
"""

from __future__ import annotations

import re
from typing import Iterable

from .ca_core import Configuration, make_config
from .embed import CellLetter, SCell

_FIELD = r"[^\[\],=\s]+"
_LETTER = re.compile(rf"\[({_FIELD}(?:,{_FIELD})*)\]|([^\[\]\s=,])")
_SPECIAL = set("[],= \t\n")


def _make(fields: list[str]):
    if len(fields) == 1:
        return fields[0]
    if len(fields) == 2:
        return SCell(*fields)
    if len(fields) == 3:
        return CellLetter(*fields)
    raise ValueError(f"letters have 1 to 3 fields, got {len(fields)}")


def parse_letter(text: str):
    word = parse_word(text.strip())
    if len(word) != 1:
        raise ValueError(f"expected one letter, got {len(word)} in {text!r}")
    return word[0]


def parse_word(text: str) -> tuple:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _LETTER.match(text, pos)
        if m is None:
            raise ValueError(f"bad letter at column {pos}: {text[pos:pos + 12]!r}")
        out.append(_make(m.group(1).split(",")) if m.group(1) else m.group(2))
        pos = m.end()
    return tuple(out)


def format_letter(letter) -> str:
    if isinstance(letter, tuple):
        return "[" + ",".join(letter) + "]"
    s = str(letter)
    if len(s) == 1 and s not in _SPECIAL:
        return s
    return f"[{s}]"


def format_word(word: Iterable) -> str:
    return "".join(format_letter(a) for a in word)


def parse_config(text: str, alphabet: Iterable | None = None) -> Configuration:
    items: dict[str, str] = {}
    for item in text.split():
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value, got {item!r}")
        if key not in ("left", "center", "right", "offset"):
            raise ValueError(f"unknown key {key!r}")
        if key in items:
            raise ValueError(f"duplicate key {key!r}")
        items[key] = value
    for key in ("left", "right"):
        if not items.get(key):
            raise ValueError(f"missing or empty {key}=")
    try:
        offset = int(items.get("offset", "0"))
    except ValueError:
        raise ValueError(f"offset must be an integer, got {items['offset']!r}") from None
    return make_config(parse_word(items["left"]), parse_word(items.get("center", "")),
                       parse_word(items["right"]), offset, alphabet)


def format_config(x: Configuration) -> str:
    return (f"left={format_word(x.left)} center={format_word(x.center)} "
            f"right={format_word(x.right)} offset={x.offset}")


def format_cells(x: Configuration, lo: int, hi: int) -> str:
    """Cells ``lo .. hi`` as a word."""
    return format_word(x.window(lo, hi))


__all__ = [
    "format_cells",
    "format_config",
    "format_letter",
    "format_word",
    "parse_config",
    "parse_letter",
    "parse_word",
]

