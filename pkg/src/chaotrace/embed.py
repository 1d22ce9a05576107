"""The reversible machine-simulating automaton and its particle extension.

Cells of ``f_M`` carry an S-letter ``(tape, ctrl)``; cells of ``g`` and
``h = sigma o g^2`` carry an R-letter ``(tape, ctrl, particle)``.  ``ctrl``
is ``"<"``, ``">"``, a state name ``q`` or its tagged copy ``"~q"``; the
particle is one of ``"."``, ``"L"``, ``"R"``, ``"LR"``.

A border separates cells ``i`` and ``i + 1`` unless ``ctrl(i) == "<"`` or
``ctrl(i + 1) == ">"``.  The maximal border-free intervals are the segments;
each one reads ``<^m q >^n`` or ``<^m >^n`` and carries its own machine.

The local rules live in :mod:`chaotrace._kernels` and work on integer
codes; this module owns the letter tables and exposes the rules as
:class:`~chaotrace.ca_core.BlockMapSpec` values with attached inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels as K
from .ca_core import BlockMapSpec, Configuration, make_config, pair_inverses, step
from .rtm import TuringMachine

LEFT, RIGHT = "<", ">"
TAG = "~"
PARTICLES = (".", "L", "R", "LR")
NONE = "."
_RESERVED = set("[],=~<> \t\n")


class SCell(NamedTuple):
    tape: str
    ctrl: str


class CellLetter(NamedTuple):
    tape: str
    ctrl: str
    particle: str = NONE

    @property
    def s(self) -> SCell:
        return SCell(self.tape, self.ctrl)


def tagged(state: str) -> str:
    return TAG + state


def is_state(ctrl: str) -> bool:
    return ctrl not in (LEFT, RIGHT)


def is_tagged(ctrl: str) -> bool:
    return ctrl.startswith(TAG)


def untag(ctrl: str) -> str:
    return ctrl[1:] if is_tagged(ctrl) else ctrl


def flip(ctrl: str) -> str:
    """The involution on ctrl values: ``q <-> ~q``, arrows fixed."""
    if not is_state(ctrl):
        return ctrl
    return untag(ctrl) if is_tagged(ctrl) else tagged(ctrl)


def is_border(left_ctrl: str, right_ctrl: str) -> bool:
    return left_ctrl != LEFT and right_ctrl != RIGHT


def _ctrl_of(letter) -> str:
    return letter[1]


# ---------------------------------------------------------------------------
# the local rule of f_M


def fm_local(M: TuringMachine, left: SCell, cell: SCell, right: SCell) -> SCell:
    """``f_M`` at one cell from its S-neighborhood."""
    a, c = cell
    if c == LEFT:
        # a head to the right may step onto this cell
        rc = right[1]
        if is_state(rc):
            q = untag(rc)
            if is_tagged(rc):
                for quad in M.by_dst[q]:
                    if quad.is_move and quad.offset == 1:
                        return SCell(a, tagged(quad.src))
            else:
                for quad in M.by_src[q]:
                    if quad.is_move and quad.offset == -1:
                        return SCell(a, quad.dst)
        return cell
    if c == RIGHT:
        lc = left[1]
        if is_state(lc):
            q = untag(lc)
            if is_tagged(lc):
                for quad in M.by_dst[q]:
                    if quad.is_move and quad.offset == -1:
                        return SCell(a, tagged(quad.src))
            else:
                for quad in M.by_src[q]:
                    if quad.is_move and quad.offset == 1:
                        return SCell(a, quad.dst)
        return cell

    q = untag(c)
    if not is_tagged(c):
        for quad in M.by_src[q]:
            if quad.is_move:
                if quad.offset == 0:
                    return SCell(a, quad.dst)
                if quad.offset == 1 and right[1] == RIGHT:
                    return SCell(a, LEFT)
                if quad.offset == -1 and left[1] == LEFT:
                    return SCell(a, RIGHT)
                break
            if quad.a == a:
                return SCell(quad.b, quad.dst)
        return SCell(a, tagged(q))
    # tagged heads run the machine backwards and untag on a dead end
    for quad in M.by_dst[q]:
        if quad.is_move:
            if quad.offset == 0:
                return SCell(a, tagged(quad.src))
            if quad.offset == 1 and left[1] == LEFT:
                return SCell(a, RIGHT)
            if quad.offset == -1 and right[1] == RIGHT:
                return SCell(a, LEFT)
            break
        if quad.b == a:
            return SCell(quad.a, tagged(quad.src))
    return SCell(a, q)


def _flip_s(s: SCell) -> SCell:
    return SCell(s[0], flip(s[1]))


def fm_inv_local(M: TuringMachine, left: SCell, cell: SCell, right: SCell) -> SCell:
    """``r o f_M o r`` at one cell."""
    return _flip_s(fm_local(M, _flip_s(left), _flip_s(cell), _flip_s(right)))


# ---------------------------------------------------------------------------
# alphabets


@dataclass(frozen=True, eq=False)
class Alphabets:
    """Letter tables of the construction for one machine."""

    machine: TuringMachine
    ctrls: tuple[str, ...]
    S: tuple[SCell, ...]
    R: tuple[CellLetter, ...]

    @cached_property
    def s_code(self) -> dict:
        return {s: i for i, s in enumerate(self.S)}

    @cached_property
    def r_code(self) -> dict:
        return {r: i for i, r in enumerate(self.R)}

    @property
    def nC(self) -> int:
        return len(self.ctrls)

    @property
    def nQ(self) -> int:
        return len(self.machine.states)

    @cached_property
    def tables(self) -> tuple:
        """``(ctrl, FS, FA, IS, IA, qfc)``: the kernel form of :func:`fm_local`."""
        M = self.machine
        nS, nC = len(self.S), self.nC
        B = M.blank
        ctrl = np.array([s % nC for s in range(nS)], dtype=np.int64)
        tabs = []
        for rule in (fm_local, fm_inv_local):
            FS = np.full((nS, 4), -1, dtype=np.int64)
            FA = np.full((nS, nC), -1, dtype=np.int64)
            for i, s in enumerate(self.S):
                if is_state(s.ctrl):
                    for lb in (0, 1):
                        for rb in (0, 1):
                            left = SCell(B, LEFT if lb else RIGHT)
                            right = SCell(B, RIGHT if rb else LEFT)
                            FS[i, 2 * lb + rb] = self.s_code[rule(M, left, s, right)]
                else:
                    for j, c in enumerate(self.ctrls):
                        nb = SCell(B, c)
                        FA[i, j] = self.s_code[rule(M, nb, s, nb)]
            tabs += [FS, FA]
        qfc = self.ctrls.index(M.final)
        return (ctrl, tabs[0], tabs[1], tabs[2], tabs[3], qfc)

    # projections --------------------------------------------------------

    @staticmethod
    def pi_S(letter: CellLetter) -> SCell:
        return SCell(letter[0], letter[1])

    @staticmethod
    def pi_D(letter: CellLetter) -> str:
        return letter[2]

    @staticmethod
    def embed_S(s: SCell, particle: str = NONE) -> CellLetter:
        return CellLetter(s[0], s[1], particle)

    # integer coding ---------------------------------------------------------

    def encode_S(self, word: Sequence) -> np.ndarray:
        code = self.s_code
        return np.fromiter((code[SCell(*c)] for c in word), dtype=np.int64, count=len(word))

    def encode_R(self, word: Sequence) -> np.ndarray:
        code = self.r_code
        return np.fromiter((code[CellLetter(*c)] for c in word), dtype=np.int64,
                           count=len(word))

    def decode_S(self, codes) -> list[SCell]:
        S = self.S
        return [S[c] for c in codes.tolist()]

    def decode_R(self, codes) -> list[CellLetter]:
        R = self.R
        return [R[c] for c in codes.tolist()]


def _check_names(M: TuringMachine) -> None:
    for q in M.states:
        if not q or q in (LEFT, RIGHT) or q.startswith(TAG) or _RESERVED & set(q):
            raise ValueError(f"state name {q!r} clashes with the letter syntax")
    for a in M.alphabet:
        if not a or _RESERVED & set(a):
            raise ValueError(f"tape letter {a!r} clashes with the letter syntax")


@lru_cache(maxsize=64)
def build_alphabets(M: TuringMachine) -> Alphabets:
    """Alphabets ``S`` (``|Sigma| (2|Q| + 2)`` letters) and ``R = S x D``."""
    rep = M.report
    if not (rep.deterministic and rep.reversible):
        raise ValueError("the construction needs a deterministic reversible machine")
    _check_names(M)
    ctrls = (LEFT, RIGHT) + M.states + tuple(tagged(q) for q in M.states)
    S = tuple(SCell(a, c) for a in M.alphabet for c in ctrls)
    R = tuple(CellLetter(s.tape, s.ctrl, d) for s in S for d in PARTICLES)
    return Alphabets(M, ctrls, S, R)


# ---------------------------------------------------------------------------
# segments


@dataclass(frozen=True)
class Segment:
    """Cells ``start <= i < stop``; ``None`` marks an infinite end."""

    start: int | None
    stop: int | None
    head: tuple[int, str, bool] | None  # (position, state, tagged)


@dataclass(frozen=True)
class SegmentDecomposition:
    """Borders of an eventually periodic configuration.

    ``borders`` lists every ``i`` with a border between ``i`` and ``i + 1``
    in ``[lo, hi)``.  Outside that window the borders repeat: to the left
    of ``lo`` at ``lo - k*p_l + j`` for ``j`` in ``left_tail``, to the right
    of ``hi`` at ``hi + k*p_r + j`` for ``j`` in ``right_tail``.
    ``segments`` are the explicit segments; an end segment is infinite when
    the corresponding tail has no borders.
    """

    lo: int
    hi: int
    borders: tuple[int, ...]
    left_period: int
    right_period: int
    left_tail: tuple[int, ...]
    right_tail: tuple[int, ...]
    segments: tuple[Segment, ...]

    def has_border(self, i: int) -> bool:
        if self.lo <= i < self.hi:
            return i in self.borders
        if i < self.lo:
            return (i - self.lo) % self.left_period in self.left_tail
        return (i - self.hi) % self.right_period in self.right_tail


def segments(x: Configuration) -> SegmentDecomposition:
    pl, pr = len(x.left), len(x.right)
    lo = x.offset - pl
    hi = x.end + pr
    ctrl = {i: _ctrl_of(x.cell(i)) for i in range(lo - pl, hi + pr + 1)}
    borders = tuple(i for i in range(lo, hi) if is_border(ctrl[i], ctrl[i + 1]))
    left_tail = tuple(j for j in range(pl) if is_border(ctrl[lo - pl + j], ctrl[lo - pl + j + 1]))
    right_tail = tuple(j for j in range(pr) if is_border(ctrl[hi + j], ctrl[hi + j + 1]))

    segs = []
    # segments between consecutive window borders, plus the two touching
    # the window edges (infinite when the tail has no borders)
    starts = [None if not left_tail else lo - pl + left_tail[-1] + 1]
    starts += [b + 1 for b in borders]
    stops = [b + 1 for b in borders]
    stops.append(None if not right_tail else hi + right_tail[0] + 1)
    for start, stop in zip(starts, stops):
        a = lo if start is None else start
        b = hi if stop is None else stop
        head = None
        for i in range(a, b):
            c = x.cell(i)[1]
            if is_state(c):
                head = (i, untag(c), is_tagged(c))
                break
        segs.append(Segment(start, stop, head))
    return SegmentDecomposition(lo, hi, borders, pl, pr, left_tail, right_tail, tuple(segs))


# ---------------------------------------------------------------------------
# block maps


def _word_map(alph: Alphabets, kind: str):
    ctrl, FS, FA, IS, IA, qfc = alph.tables
    if kind in ("fm", "fm_inv"):
        S1, A1 = (FS, FA) if kind == "fm" else (IS, IA)

        def batch(word):
            return alph.decode_S(K.fm_word(alph.encode_S(word), ctrl, S1, A1))
        return batch
    k = {"g": 1, "g_inv": -1, "h": 2, "h_inv": -2}[kind]

    def batch(word):
        y = K.g_power_word(alph.encode_R(word), k, ctrl, FS, FA, IS, IA, qfc)
        return alph.decode_R(y)
    return batch


@lru_cache(maxsize=64)
def fm_map(M: TuringMachine) -> BlockMapSpec:
    """``f_M`` on ``S^Z`` (radius 1) with ``r o f_M o r`` attached as inverse."""
    alph = build_alphabets(M)
    letters = frozenset(alph.S)
    f = BlockMapSpec(letters, 1, 1, batch=_word_map(alph, "fm"), name="f_M")
    finv = BlockMapSpec(letters, 1, 1, batch=_word_map(alph, "fm_inv"), name="f_M^-1")
    return pair_inverses(f, finv)[0]


@lru_cache(maxsize=64)
def g_map(M: TuringMachine) -> BlockMapSpec:
    """``g`` on ``R^Z``: memory and anticipation 2; the inverse has radius 1."""
    alph = build_alphabets(M)
    letters = frozenset(alph.R)
    g = BlockMapSpec(letters, 2, 2, batch=_word_map(alph, "g"), name="g")
    ginv = BlockMapSpec(letters, 1, 1, batch=_word_map(alph, "g_inv"), name="g^-1")
    return pair_inverses(g, ginv)[0]


@lru_cache(maxsize=64)
def h_map(M: TuringMachine) -> BlockMapSpec:
    """``h = sigma o g^2`` (cells ``n-3 .. n+5``) and ``g^-2 o sigma^-1``
    (cells ``n-3 .. n+1``)."""
    alph = build_alphabets(M)
    letters = frozenset(alph.R)
    h = BlockMapSpec(letters, 3, 5, batch=_word_map(alph, "h"), name="h")
    hinv = BlockMapSpec(letters, 3, 1, batch=_word_map(alph, "h_inv"), name="h^-1")
    return pair_inverses(h, hinv)[0]


def reverse_mark(x: Configuration) -> Configuration:
    """The involution ``r``: swap every state with its tagged copy."""
    return x.map_letters(lambda c: type(c)(c[0], flip(c[1]), *c[2:]))


def _apply(f: BlockMapSpec, x: Configuration) -> Configuration:
    return step(f, x)


def fm_step(M: TuringMachine, x: Configuration) -> Configuration:
    return _apply(fm_map(M), x)


def fm_inverse(M: TuringMachine, x: Configuration) -> Configuration:
    return _apply(fm_map(M).inverse, x)


def g_step(M: TuringMachine, x: Configuration) -> Configuration:
    return _apply(g_map(M), x)


def g_inverse(M: TuringMachine, x: Configuration) -> Configuration:
    return _apply(g_map(M).inverse, x)


def h_step(M: TuringMachine, x: Configuration) -> Configuration:
    return _apply(h_map(M), x)


def h_inverse(M: TuringMachine, x: Configuration) -> Configuration:
    return _apply(h_map(M).inverse, x)


def h_power(M: TuringMachine, x: Configuration, t: int) -> Configuration:
    """``h^t(x)`` for any integer ``t``; uses the coded runner when possible."""
    if t == 0:
        return x
    if len(x.left) == 1 and len(x.right) == 1:
        return CodedConfig.from_config(M, x).h(t).to_config()
    f = h_map(M) if t > 0 else h_map(M).inverse
    for _ in range(abs(t)):
        x = _apply(f, x)
    return x


# ---------------------------------------------------------------------------
# inputs


def encode_tm_input(M: TuringMachine, w: Sequence[str], n: int) -> Configuration:
    """Head ``(B, q0)`` at 0, ``w`` on ``1..|w|`` under ``>``, and ``<`` on
    ``-n < i < 0``; uniform ``(B, >)`` elsewhere.  No particles."""
    w = list(w)
    if n < len(w):
        raise ValueError("encode_tm_input needs n >= |w|")
    if n < 1:
        raise ValueError("encode_tm_input needs n >= 1")
    for a in w:
        if a not in M.alphabet:
            raise ValueError(f"letter {a!r} not in the machine alphabet")
    B = M.blank
    bg = CellLetter(B, RIGHT)
    center = [CellLetter(B, LEFT)] * (n - 1) + [CellLetter(B, M.initial)]
    center += [CellLetter(a, RIGHT) for a in w]
    return make_config((bg,), center, (bg,), -(n - 1))


# ---------------------------------------------------------------------------
# fast runner for uniform backgrounds


class CodedConfig:
    """Integer-coded configuration with uniform backgrounds.

    ``cells[k]`` is the code of cell ``offset + k``; ``lbg``/``rbg`` are the
    background codes.
    """

    __slots__ = ("alph", "lbg", "rbg", "cells", "offset")

    def __init__(self, alph: Alphabets, lbg: int, cells: np.ndarray, rbg: int, offset: int):
        self.alph = alph
        self.lbg, self.rbg = int(lbg), int(rbg)
        self.cells = cells
        self.offset = offset

    @classmethod
    def from_config(cls, M: TuringMachine, x: Configuration) -> "CodedConfig":
        if len(x.left) != 1 or len(x.right) != 1:
            raise ValueError("coded runner needs uniform backgrounds")
        alph = build_alphabets(M)
        code = alph.r_code
        return cls(alph, code[x.left[0]], alph.encode_R(x.center), code[x.right[0]], x.offset)

    def to_config(self) -> Configuration:
        R = self.alph.R
        return make_config((R[self.lbg],), self.alph.decode_R(self.cells), (R[self.rbg],),
                           self.offset)

    def cell(self, i: int) -> int:
        k = i - self.offset
        if k < 0:
            return self.lbg
        if k >= len(self.cells):
            return self.rbg
        return int(self.cells[k])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Codes of cells ``lo .. hi`` inclusive."""
        out = np.empty(hi - lo + 1, dtype=np.int64)
        a = self.offset
        b = a + len(self.cells)
        out[: max(0, min(a, hi + 1) - lo)] = self.lbg
        out[max(0, b - lo):] = self.rbg
        s, e = max(lo, a), min(hi + 1, b)
        if s < e:
            out[s - lo:e - lo] = self.cells[s - a:e - a]
        return out

    def _bg_image(self, b: int, k: int) -> int:
        word = np.full(5, b, dtype=np.int64)
        return int(K.g_power_word(word, k, *self.alph.tables)[0])

    def g(self, k: int) -> "CodedConfig":
        """``g^k`` (``k`` may be negative)."""
        tables = self.alph.tables
        lbg, rbg, cells, off = self.lbg, self.rbg, self.cells, self.offset
        sgn = 1 if k > 0 else -1
        r = 2 if k > 0 else 1
        if k and self._bg_image(lbg, sgn) == lbg and self._bg_image(rbg, sgn) == rbg:
            # fixed backgrounds: one padded kernel call
            pad = 2 * r * abs(k)
            word = np.concatenate((np.full(pad, lbg, dtype=np.int64), cells,
                                   np.full(pad, rbg, dtype=np.int64)))
            cells = K.g_power_word(word, k, *tables)
            cells, off = _trim(cells, off - pad + r * abs(k), lbg, rbg)
            return CodedConfig(self.alph, lbg, cells, rbg, off)
        for _ in range(abs(k)):
            word = np.concatenate((np.full(2 * r, lbg, dtype=np.int64), cells,
                                   np.full(2 * r, rbg, dtype=np.int64)))
            cells = K.g_power_word(word, sgn, *tables)
            off -= r
            lbg, rbg = self._bg_image(lbg, sgn), self._bg_image(rbg, sgn)
            cells, off = _trim(cells, off, lbg, rbg)
        return CodedConfig(self.alph, lbg, cells, rbg, off)

    def h(self, t: int) -> "CodedConfig":
        """``h^t = (sigma o g^2)^t``; ``sigma`` commutes with ``g``."""
        y = self.g(2 * t)
        return CodedConfig(self.alph, y.lbg, y.cells, y.rbg, y.offset - t)


def _trim(cells: np.ndarray, off: int, lbg: int, rbg: int) -> tuple[np.ndarray, int]:
    n = len(cells)
    i = 0
    while i < n and cells[i] == lbg:
        i += 1
    j = n
    while j > i and cells[j - 1] == rbg:
        j -= 1
    if i == 0 and j == n:
        return cells, off
    return cells[i:j], off + i


__all__ = [
    "Alphabets",
    "CellLetter",
    "CodedConfig",
    "SCell",
    "Segment",
    "SegmentDecomposition",
    "build_alphabets",
    "encode_tm_input",
    "fm_inv_local",
    "fm_inverse",
    "fm_local",
    "fm_map",
    "fm_step",
    "g_inverse",
    "g_map",
    "g_step",
    "h_inverse",
    "h_map",
    "h_power",
    "h_step",
    "is_border",
    "reverse_mark",
    "segments",
]
