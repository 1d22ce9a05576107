"""Itineraries, trace languages and bounded prediction solvers.

The radius-``n`` partition labels a configuration by its window
``[-n, n]``; the itinerary of ``x`` under a CA ``f`` is the sequence of
labels of ``x, f(x), f^2(x), ...``.  Labels are plain tuples of letters.

The solvers only ever answer "found" with a certificate that has been
re-checked by direct simulation; "not found" means nothing beyond the
searched bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .automata import (
    Dfa,
    LabelPattern,
    LassoWord,
    LetterPattern,
    MullerAutomaton,
    Omega,
    Regex,
    Sym,
    atoms,
    compile,
    concat,
    is_pattern,
    muller_accepts_lasso,
    omega,
    star,
    sym,
    word,
)
from .ca_core import Configuration, make_config, primitive_root, step, uniform
from .embed import (
    LEFT,
    NONE,
    RIGHT,
    CellLetter,
    build_alphabets,
    encode_tm_input,
    h_map,
    h_power,
)
from .normalize import NormalizedMachine, check_assumptions
from .rtm import TuringMachine, initial_id, run, trace_run

#: letter pattern for "any letter without a left-moving particle"
NO_LEFT = LetterPattern(("*", "*", "!L/LR"))
SEPARATOR = "#"


def _machine(M) -> TuringMachine:
    return M.machine if isinstance(M, NormalizedMachine) else M


@dataclass(frozen=True)
class ClopenPartition:
    """The partition of configurations by their ``[-radius, radius]`` window."""

    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def label(self, x: Configuration) -> tuple:
        return x.window(-self.radius, self.radius)

    def n_labels(self, alphabet_size: int) -> int:
        return alphabet_size ** self.width

    def is_label(self, token, alphabet: Iterable | None = None) -> bool:
        if type(token) is not tuple or len(token) != self.width:
            return False
        return alphabet is None or all(a in set(alphabet) for a in token)


# ---------------------------------------------------------------------------
# itineraries


def _fixed_background(alph, x: Configuration) -> int | None:
    if x.left != x.right or len(x.left) != 1:
        return None
    b = alph.r_code[x.left[0]]
    word = np.full(5, b, dtype=np.int64)
    return b if K.g_word(word, *alph.tables[:3], alph.tables[5])[0] == b else None


def _h_label_codes(M: TuringMachine, x: Configuration, n: int, T: int) -> np.ndarray:
    alph = build_alphabets(M)
    ctrl, FS, FA, _, _, qfc = alph.tables
    bg = _fixed_background(alph, x)
    if bg is not None:
        return K.h_labels_uniform(alph.encode_R(x.center), x.offset, bg, T, n,
                                  ctrl, FS, FA, qfc)
    lo, hi = -n - 3 * (T - 1), n + 5 * (T - 1)
    cells = alph.encode_R(x.window(lo, hi))
    return K.h_labels(cells, T, n, ctrl, FS, FA, qfc)


def itinerary(f, x: Configuration, n: int, T: int) -> tuple:
    """The first ``T`` labels of the radius-``n`` itinerary of ``x``.

    ``f`` is a :class:`BlockMapSpec` or a machine, standing for its CA ``h``;
    the latter is evaluated by the compiled kernel on the dependency cone.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    if T == 0:
        return ()
    if isinstance(f, (TuringMachine, NormalizedMachine)):
        M = _machine(f)
        R = build_alphabets(M).R
        codes = _h_label_codes(M, x, n, T)
        return tuple(tuple(R[c] for c in row) for row in codes)
    out = []
    for t in range(T):
        out.append(x.window(-n, n))
        if t < T - 1:
            x = step(f, x)
    return tuple(out)


def middles(labels: Sequence[tuple]) -> tuple:
    return tuple(lab[len(lab) // 2] for lab in labels)


# ---------------------------------------------------------------------------
# the languages


def _letter(tape: str, ctrl: str, particle: str = NONE) -> CellLetter:
    return CellLetter(tape, ctrl, particle)


def _check_word(M: TuringMachine, w: Sequence[str]) -> list[str]:
    w = list(w)
    for a in w:
        if a not in M.alphabet:
            raise ValueError(f"letter {a!r} not in the machine alphabet")
    return w


def lw_regex(M, w: Sequence[str]) -> Regex:
    """The finite-time language: border, ``<``-run, the initial head, the
    input, a ``>``-run and finally a right-moving particle."""
    M = _machine(M)
    w = _check_word(M, w)
    B = M.blank
    return concat(
        sym(_letter(B, RIGHT)),
        star(sym(_letter(B, LEFT))),
        sym(_letter(B, M.initial)),
        word(_letter(a, RIGHT) for a in w),
        star(sym(_letter(B, RIGHT))),
        sym(_letter(B, RIGHT, "R")),
    )


def lw_omega(M, w: Sequence[str]) -> Omega:
    """The infinite-time language: head next to the border, the input, the
    separator and then a ``(0*1)^ω`` tail, without particles."""
    M = _machine(M)
    missing = [a for a in ("0", "1", SEPARATOR) if a not in M.alphabet]
    if missing:
        raise ValueError(f"machine alphabet lacks {missing}")
    w = _check_word(M, w)
    if any(a not in ("0", "1") for a in w):
        raise ValueError("input must be binary")
    B = M.blank
    prefix = concat(
        sym(_letter(B, RIGHT)),
        sym(_letter(B, M.initial)),
        word(_letter(a, RIGHT) for a in w),
        sym(_letter(SEPARATOR, RIGHT)),
    )
    body = concat(star(sym(_letter("0", RIGHT))), sym(_letter("1", RIGHT)))
    return omega(prefix, body)


def lift(r: Regex, n: int = 1) -> Regex:
    """Middle-letter expression to label expression: every letter becomes
    the labels with that middle and no left-moving particle elsewhere."""

    def go(node):
        if isinstance(node, Sym):
            side = (NO_LEFT,) * n
            return Sym(LabelPattern(side + (node.atom,) + side))
        if isinstance(node, Omega):
            return Omega(go(node.prefix), go(node.body))
        parts = getattr(node, "parts", None)
        if parts is not None:
            return type(node)(tuple(go(p) for p in parts))
        inner = getattr(node, "inner", None)
        if inner is not None:
            return type(node)(go(inner))
        return node

    return go(r)


def uw_regex(M, w: Sequence[str], n: int = 1) -> Regex:
    return lift(lw_regex(M, w), n)


def uw_omega(M, w: Sequence[str], n: int = 1) -> Omega:
    return lift(lw_omega(M, w), n)


def _has_left(label: tuple) -> bool:
    return any(isinstance(a, CellLetter) and "L" in a.particle for a in label)


def uw_check(M, labels: Sequence[tuple], w: Sequence[str]) -> bool:
    """Does some prefix of ``labels`` have its middles in the finite-time
    language while no letter of it carries a left-moving particle?"""
    d = compile(lw_regex(M, w))
    q = d.start
    if q in d.accepting:
        return True
    for lab in labels:
        if _has_left(lab):
            return False
        q = d.step(q, lab[len(lab) // 2])
        if q in d.accepting:
            return True
    return False


# ---------------------------------------------------------------------------
# halting witnesses


@dataclass(frozen=True)
class HaltingWitness:
    x: Configuration      # the encoded input
    y: Configuration      # h^-n(x)
    n: int
    halting_time: int
    T: int                # labels needed for acceptance
    labels: tuple


@dataclass(frozen=True)
class NotHaltingWithinBound:
    bound: int

    def __bool__(self) -> bool:
        return False


def witness_from_halting(M, w: Sequence[str], bound: int) -> HaltingWitness | NotHaltingWithinBound:
    """Encode ``w`` and pull it back ``n`` steps, where the machine reaches
    its final state after exactly ``2n + 2`` steps; the returned itinerary
    prefix passes :func:`uw_check`."""
    M = _machine(M)
    w = _check_word(M, w)
    rep = check_assumptions(M, w, bound)
    if rep.halted_at is None:
        return NotHaltingWithinBound(bound)
    if not rep.all_pass:
        raise ValueError("machine is not normalized for this input: " + "; ".join(rep.lines()))
    res = run(M, w, bound)
    if not res.in_final:
        # stuck without reaching the final state: no particle is ever emitted
        return NotHaltingWithinBound(bound)
    T_halt = res.steps
    n = T_halt // 2 - 1
    if n < max(len(w), 1):
        raise ValueError(f"halting time {T_halt} too short for |w| = {len(w)}")
    x = encode_tm_input(M, w, n)
    y = h_power(M, x, -n)
    T = n + T_halt + 4
    while True:
        labels = itinerary(M, y, 1, T)
        if uw_check(M, labels, w):
            break
        if T > 8 * (T_halt + n + 4):
            raise RuntimeError("constructed witness never reached the accepting particle")
        T *= 2
    # shortest accepting prefix
    d = compile(lw_regex(M, w))
    q = d.start
    for k, lab in enumerate(labels):
        q = d.step(q, lab[1])
        if q in d.accepting:
            labels = labels[: k + 1]
            break
    return HaltingWitness(x, y, n, T_halt, len(labels), labels)


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class FiniteWitness:
    config: Configuration
    start: int          # the accepted factor starts at this time
    labels: tuple       # the accepted label word
    family: str


@dataclass(frozen=True)
class LassoWitness:
    config: Configuration
    lasso: LassoWord
    family: str
    verified_steps: int
    certificate: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class PredictionResult:
    verdict: str                      # "WitnessFound" or "NotFoundWithinBounds"
    witness: FiniteWitness | LassoWitness | None = None
    candidates: int = 0

    @property
    def found(self) -> bool:
        return self.verdict == WITNESS_FOUND


WITNESS_FOUND = "WitnessFound"
NOT_FOUND = "NotFoundWithinBounds"


def _check_query_atoms(atom_list, n: int, R: set) -> None:
    w = 2 * n + 1
    for a in atom_list:
        letters = a.letters if isinstance(a, LabelPattern) else a
        if type(letters) is not tuple or len(letters) != w:
            raise ValueError(f"query token {a!r} is not a radius-{n} label")
        for c in letters:
            if not is_pattern(c) and c not in R:
                raise ValueError(f"query letter {c!r} is not in the CA alphabet")


def _word_lex(letters: Sequence[str], max_len: int, min_len: int = 0):
    for k in range(min_len, max_len + 1):
        yield from product(letters, repeat=k)


def _finite_catalog(M: TuringMachine, n: int, width: int, horizon: int, center_width: int):
    """Candidate configurations in search order, as ``(family, config)``."""
    alph = build_alphabets(M)
    B = M.blank
    for ctrl in (RIGHT, LEFT):
        bg = _letter(B, ctrl)
        fam = f"uniform({ctrl})"
        yield fam, uniform(bg)
        for k in range(1, center_width + 1):
            for center in product(alph.R, repeat=k):
                if all(c == bg for c in center):
                    continue
                for off in range(-n - k + 1, n + 1):
                    yield fam, make_config((bg,), center, (bg,), off)
    inputs = [a for a in M.alphabet if a != B]
    for w in _word_lex(sorted(inputs), width):
        for m in range(max(len(w), 1), max(len(w), 1) + horizon // 2 + 1):
            x = encode_tm_input(M, w, m)
            yield f"input({''.join(w)},{m})", h_power(M, x, -m)


class _LabelClassifier:
    """Maps rows of label codes to DFA classes, caching per distinct label."""

    def __init__(self, d: Dfa | MullerAutomaton, R: Sequence, width: int):
        self.d, self.R, self.width = d, R, width
        self.N = len(R)
        self.cache: dict[int, int] = {}

    def __call__(self, codes: np.ndarray) -> np.ndarray:
        keys = np.zeros(codes.shape[0], dtype=np.int64)
        for j in range(self.width):
            keys = keys * self.N + codes[:, j]
        uniq, inv = np.unique(keys, return_inverse=True)
        out = np.empty(len(uniq), dtype=np.int64)
        for k, key in enumerate(uniq.tolist()):
            c = self.cache.get(key)
            if c is None:
                row = codes[np.flatnonzero(keys == key)[0]]
                c = self.d.classes.classify(tuple(self.R[v] for v in row))
                c = -1 if c is None else c
                self.cache[key] = c
            out[k] = c
        return out[inv]


def predict_finite(M, n: int, query: Regex, width: int, horizon: int,
                   center_width: int = 1) -> PredictionResult:
    """Search for a configuration whose radius-``n`` itinerary has a factor
    in ``query`` within ``horizon`` steps.

    The catalog holds the uniform ``(B,>)`` and ``(B,<)`` backgrounds with
    every center of up to ``center_width`` letters near the origin, then the
    encoded inputs of up to ``width`` letters pulled back by ``h``.
    """
    M = _machine(M)
    alph = build_alphabets(M)
    _check_query_atoms(atoms(query), n, set(alph.R))
    d = compile(query)
    if d.start not in d.live():
        return PredictionResult(NOT_FOUND, None, 0)
    classify = _LabelClassifier(d, alph.R, 2 * n + 1)
    delta = np.array(d.delta, dtype=np.int64)
    acc = np.zeros(d.n_states, dtype=np.bool_)
    acc[list(d.accepting)] = True
    count = 0
    for fam, x in _finite_catalog(M, n, width, horizon, center_width):
        count += 1
        codes = _h_label_codes(M, x, n, horizon)
        i, j = K.dfa_factor_scan(delta, acc, d.start, classify(codes))
        if j < 0:
            continue
        labels = itinerary(M, x, n, j)[i:j]
        # independent re-check: generic block-map stepping
        again = itinerary(h_map(M), x, n, j)[i:j]
        if again != labels or not d.accepts(labels):
            raise AssertionError("witness failed re-verification")
        return PredictionResult(WITNESS_FOUND, FiniteWitness(x, i, labels, fam), count)
    return PredictionResult(NOT_FOUND, None, count)


# ---------------------------------------------------------------------------
# infinite time


def _cyclic_orbit(M: TuringMachine, cells: np.ndarray, n: int, horizon: int):
    """Radius-``n`` labels over one temporal period of a spatially periodic
    point, or ``None`` if the orbit does not close within ``horizon``."""
    tables = build_alphabets(M).tables
    p = len(cells)
    idx = [(i % p) for i in range(-n, n + 1)]
    start = cells.tobytes()
    cur = cells
    rows = []
    for _ in range(horizon):
        rows.append(tuple(int(cur[i]) for i in idx))
        cur = np.roll(K.g_cyclic(cur, 2, *tables), -1)
        if cur.tobytes() == start:
            return rows
    return None


@dataclass(frozen=True)
class DriftCertificate:
    """The machine run from ``input # tail^ω`` recurs: at first arrival on
    cells ``p1 < p2`` (times ``t1 < t2``) it is in the same state with the
    same tail phase and never returns left of ``p1`` in between."""

    t1: int
    t2: int
    p1: int
    p2: int
    heads: tuple  # head positions at times 0 .. t2


def drift_certificate(M: TuringMachine, w: Sequence[str], tail: Sequence[str],
                      max_steps: int) -> DriftCertificate | None:
    conf = initial_id(M, list(w) + [SEPARATOR], tail)
    tail_start = len(w) + 2
    tr = trace_run(M, conf, max_steps)
    heads, states = tr.heads, tr.states
    seen: dict[tuple, list[tuple[int, int]]] = {}
    far = heads[0] - 1
    for t, p in enumerate(heads):
        if p <= far:
            continue
        far = p
        if p < tail_start:
            continue
        key = (states[t], (p - tail_start) % len(tail))
        for t1, p1 in seen.get(key, ()):
            if min(heads[t1:t + 1]) >= p1:
                return DriftCertificate(t1, t, p1, p, tuple(heads[:t + 1]))
        seen.setdefault(key, []).append((t, p))
    return None


def _head_max(cert: DriftCertificate, s: int) -> int:
    """Largest head position over times ``0 .. s``."""
    heads = cert.heads
    if s <= cert.t2:
        return max(heads[:s + 1])
    dt, dp = cert.t2 - cert.t1, cert.p2 - cert.p1

    def head(u):
        k, r = divmod(u - cert.t1, dt)
        return heads[cert.t1 + r] + k * dp

    return max(head(u) for u in range(max(cert.t1, s - dt + 1), s + 1))


def _drift_lasso(M: TuringMachine, w, tail, n: int, horizon: int):
    cert = drift_certificate(M, w, tail, 50 * horizon)
    if cert is None:
        return None
    dt, dp = cert.t2 - cert.t1, cert.p2 - cert.p1
    if 2 * dp > dt:
        return None  # the window would not outrun the head
    B = M.blank
    tail_start = len(w) + 2
    x = make_config((_letter(B, RIGHT),),
                    [_letter(B, M.initial)] + [_letter(a, RIGHT) for a in w]
                    + [_letter(SEPARATOR, RIGHT)],
                    tuple(_letter(a, RIGHT) for a in tail), 0)

    def clear(i):
        # window of h^i(x) is untouched by the head and inside the tail
        return i - n >= tail_start and i - n >= _head_max(cert, 2 * i) + 2

    i = max(0, -(-(cert.t1 + dt) // 2))
    run_len = 0
    while run_len < dt:
        if clear(i + run_len):
            run_len += 1
        else:
            i, run_len = i + run_len + 1, 0
    y = h_power(M, x, -n)
    prefix = itinerary(h_map(M), y, n, n + i)
    loop = tuple(x.window(k - n, k + n) for k in range(i, i + len(tail)))
    lasso = LassoWord(prefix, loop)
    return y, lasso, cert


def _verify_lasso(M: TuringMachine, y: Configuration, lasso: LassoWord, n: int, steps: int) -> bool:
    labels = itinerary(h_map(M), y, n, steps)
    return all(lab == lasso.letter(t) for t, lab in enumerate(labels))


def predict_infinite(M, n: int, A: MullerAutomaton, period: int, horizon: int,
                     width: int = 2) -> PredictionResult:
    """Search for a configuration whose full radius-``n`` itinerary is
    accepted by ``A``.

    Two families are tried: spatially periodic points of period at most
    ``period`` (their orbits are finite), then, when the machine has a
    separator letter, encoded runs ``input # tail^ω`` with inputs of up to
    ``width`` letters and tails of up to ``period`` letters whose machine
    run is certified to drift right forever.
    """
    M = _machine(M)
    alph = build_alphabets(M)
    R = alph.R
    count = 0
    for p in range(1, period + 1):
        for cells in product(range(len(R)), repeat=p):
            count += 1
            rows = _cyclic_orbit(M, np.array(cells, dtype=np.int64), n, horizon)
            if rows is None:
                continue
            loop = tuple(tuple(R[k] for k in row) for row in rows)
            lasso = LassoWord((), loop)
            if not muller_accepts_lasso(A, lasso):
                continue
            x = make_config([R[k] for k in cells], (), [R[k] for k in cells], 0)
            steps = max(horizon, 2 * len(loop))
            if not (_verify_lasso(M, x, lasso, n, min(steps, 4 * len(loop) + 8))
                    and h_power(M, x, len(loop)) == x):
                raise AssertionError("periodic witness failed re-verification")
            return PredictionResult(WITNESS_FOUND,
                                    LassoWitness(x, lasso, "periodic", len(loop)), count)
    if SEPARATOR in M.alphabet:
        letters = sorted(a for a in M.alphabet if a not in (M.blank, SEPARATOR))
        for w in _word_lex(letters, width):
            for tail in _word_lex(letters, period, 1):
                if primitive_root(tail) != tuple(tail):
                    continue
                count += 1
                found = _drift_lasso(M, w, tail, n, horizon)
                if found is None:
                    continue
                y, lasso, cert = found
                if not muller_accepts_lasso(A, lasso):
                    continue
                steps = max(horizon, len(lasso.prefix) + 2 * len(lasso.loop))
                if not _verify_lasso(M, y, lasso, n, steps):
                    raise AssertionError("drift witness failed re-verification")
                info = {"input": "".join(w), "tail": "".join(tail), "t1": cert.t1,
                        "t2": cert.t2, "p1": cert.p1, "p2": cert.p2}
                return PredictionResult(WITNESS_FOUND,
                                        LassoWitness(y, lasso, "drift", steps, info), count)
    return PredictionResult(NOT_FOUND, None, count)


__all__ = [
    "ClopenPartition",
    "DriftCertificate",
    "FiniteWitness",
    "HaltingWitness",
    "LassoWitness",
    "NOT_FOUND",
    "NO_LEFT",
    "NotHaltingWithinBound",
    "PredictionResult",
    "WITNESS_FOUND",
    "drift_certificate",
    "itinerary",
    "lift",
    "lw_omega",
    "lw_regex",
    "middles",
    "predict_finite",
    "predict_infinite",
    "uw_check",
    "uw_omega",
    "uw_regex",
    "witness_from_halting",
]
