"""Constructive checks of the chaos properties and the simulation claims.

Everything here builds an explicit object (a configuration, an orbit, a
pair of runs) and then re-checks it by direct simulation; the returned
reports carry the outcome of those checks rather than assumptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels as K
from .ca_core import Configuration, iterate, make_config, periodic, step, step_inverse
from .embed import (
    LEFT,
    NONE,
    RIGHT,
    CellLetter,
    CodedConfig,
    SCell,
    build_alphabets,
    encode_tm_input,
    fm_map,
    g_map,
    h_map,
    h_power,
    reverse_mark,
    segments,
    tagged,
)
from .normalize import NormalizedMachine, check_assumptions, phase_name
from .rtm import TuringMachine, initial_id, trace_run


def _machine(M) -> TuringMachine:
    return M.machine if isinstance(M, NormalizedMachine) else M


def corrected_wall(M) -> tuple[CellLetter, CellLetter]:
    """``(B,>)(B,<)``: borders on both sides of the pair that never move."""
    B = _machine(M).blank
    return (CellLetter(B, RIGHT, NONE), CellLetter(B, LEFT, NONE))


def literal_wall(M) -> tuple[CellLetter, CellLetter]:
    """``(B,<)(B,>)``: a headless segment, which can merge with its
    neighbours and so does not isolate the middle word."""
    B = _machine(M).blank
    return (CellLetter(B, LEFT, NONE), CellLetter(B, RIGHT, NONE))


# ---------------------------------------------------------------------------
# transitivity


@dataclass(frozen=True)
class TransitivityWitness:
    u: tuple
    v: tuple
    x: Configuration
    y: Configuration
    steps: int
    source_ok: bool
    target_ok: bool
    transcript: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.source_ok and self.target_ok


def _check_word(M: TuringMachine, word: Sequence, name: str) -> tuple:
    R = set(build_alphabets(M).R)
    out = tuple(CellLetter(*a) for a in word)
    for a in out:
        if a not in R:
            raise ValueError(f"{name} contains {a!r}, which is not a letter of R")
    return out


def transitivity_witness(M, u: Sequence, v: Sequence, wall: Sequence | None = None,
                         generic: bool = False) -> TransitivityWitness:
    """Configurations ``x`` and ``y = h^(n+4)(x')`` with ``x`` showing ``u``
    and ``y`` showing ``v`` on cells ``2 .. n+1``, where ``n = |u|``.

    ``x`` is ``wall u wall`` on cells ``0 .. n+3`` over the uniform
    ``(B,>)`` background.  ``y`` is ``h^(n+4)(x)`` with cells ``0 .. n+3``
    overwritten by ``wall v wall``.  Both claims are then checked by
    running ``h^-(n+4)`` on ``y``.  ``generic=True`` does that run with the
    letter-level block map instead of the coded runner.
    """
    M = _machine(M)
    u, v = _check_word(M, u, "u"), _check_word(M, v, "v")
    if len(u) != len(v):
        raise ValueError(f"u and v must have equal length, got {len(u)} and {len(v)}")
    wall = corrected_wall(M) if wall is None else tuple(CellLetter(*a) for a in wall)
    if len(wall) != 2:
        raise ValueError("a wall has two letters")
    n = len(u)
    steps = n + 4
    bg = CellLetter(M.blank, RIGHT, NONE)
    x = make_config((bg,), wall + u + wall, (bg,), 0)
    hx = h_power(M, x, steps)
    lo, hi = min(hx.offset, 0), max(hx.end, n + 4)
    body = list(hx.window(lo, hi - 1))
    body[-lo:-lo + n + 4] = wall + v + wall
    y = make_config(hx.left, body, hx.right, lo)

    if generic:
        back = iterate(h_map(M).inverse, y, steps)
    else:
        back = h_power(M, y, -steps)
    src = back.window(2, n + 1) if n else ()
    tgt = y.window(2, n + 1) if n else ()
    source_ok = tuple(src) == u
    target_ok = tuple(tgt) == v
    transcript = (
        f"n = {n}, steps = {steps}",
        f"h^-{steps}(y) on [2, {n + 1}] {'equals' if source_ok else 'differs from'} u",
        f"y on [2, {n + 1}] {'equals' if target_ok else 'differs from'} v",
    )
    return TransitivityWitness(u, v, x, y, steps, source_ok, target_ok, transcript)


# ---------------------------------------------------------------------------
# periodic points


@dataclass(frozen=True)
class PeriodicPoint:
    config: Configuration
    period: int
    start: int  # first cell of the cylinder word
    construction: str

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class PeriodicNotFound:
    max_period: int
    tried: tuple[str, ...]

    def __bool__(self) -> bool:
        return False


def h_return_time(M, x: Configuration, max_t: int) -> int:
    """Smallest ``t`` in ``1 .. max_t`` with ``h^t(x) = x`` for a spatially
    periodic ``x``, or ``-1``."""
    M = _machine(M)
    if not x.is_periodic:
        raise ValueError("return times are computed for spatially periodic configurations")
    alph = build_alphabets(M)
    ctrl, FS, FA, _, _, qfc = alph.tables
    cells = alph.encode_R(x.window(0, len(x.left) - 1))
    return int(K.h_cyclic_return(cells, max_t, ctrl, FS, FA, qfc))


def periodic_point(M, cylinder: Sequence, max_period: int) -> PeriodicPoint | PeriodicNotFound:
    """A point of period at most ``max_period`` whose window starting at
    ``-(len(cylinder) // 2)`` is ``cylinder``.

    The cylinder is periodized as is, and failing that between two walls.
    The period is re-checked letter by letter on ``h^p(x)``.
    """
    M = _machine(M)
    c = _check_word(M, cylinder, "cylinder")
    start = -(len(c) // 2)
    wall = corrected_wall(M)
    tried = []
    candidates = [("plain", c)] if c else []
    candidates.append(("walled", wall + c + wall))
    for name, word in candidates:
        shift = 2 if name == "walled" else 0
        x = periodic(word, start - shift)
        tried.append(name)
        p = h_return_time(M, x, max_period)
        if p < 0:
            continue
        if iterate(h_map(M), x, p) != x:
            raise AssertionError("return time not confirmed by the block map")
        if c and x.window(start, start + len(c) - 1) != c:
            raise AssertionError("periodic point left the cylinder")
        return PeriodicPoint(x, p, start, name)
    return PeriodicNotFound(max_period, tuple(tried))


# ---------------------------------------------------------------------------
# TM <-> CA


@dataclass(frozen=True)
class EquivalenceReport:
    word: tuple[str, ...]
    steps: int
    halting_time: int | None
    checked: int
    divergence: tuple[int, str] | None  # (CA time, description)
    mapped_checked: int = 0

    @property
    def ok(self) -> bool:
        return self.divergence is None

    def lines(self) -> list[str]:
        w = "".join(self.word) or "(empty)"
        head = f"input {w}: CA times 0..{self.steps} ({self.checked} checked)"
        if self.halting_time is not None:
            head += f", halts at {self.halting_time}"
        if self.mapped_checked:
            head += f", {self.mapped_checked} original steps mapped"
        if self.divergence is None:
            return [head + ": agree"]
        t, what = self.divergence
        return [head + f": first divergence at CA time {t}: {what}"]


def _heads(alph, c: CodedConfig) -> list[tuple[int, str]]:
    R = alph.R
    out = []
    for i, v in enumerate(c.cells.tolist()):
        ctrl = R[v].ctrl
        if ctrl not in (LEFT, RIGHT):
            out.append((c.offset + i, ctrl))
    return out


def tm_ca_equivalence(M, w: Sequence[str], steps: int) -> EquivalenceReport:
    """Run ``M`` directly and through ``g`` from ``encode_tm_input`` and
    compare head position and state at every CA time ``0 .. steps``.

    Before halting (time ``T``) the CA shows the machine at the same time.
    Afterwards it shows the tagged machine retracing: at CA time
    ``T + 1 + k`` the tagged state of machine time ``T - k``, and the whole
    pattern repeats with period ``2T + 2``.  For a
    :class:`NormalizedMachine` the original machine is also compared at the
    mapped times.
    """
    norm = M if isinstance(M, NormalizedMachine) else None
    M = _machine(M)
    w = tuple(w)
    alph = build_alphabets(M)
    c = CodedConfig.from_config(M, encode_tm_input(M, w, max(len(w), 1, steps)))
    tr = trace_run(M, initial_id(M, w), steps)
    T = len(tr.fired) if tr.halted else None

    def expected(t: int) -> tuple[int, str]:
        if T is None:
            return tr.heads[t], tr.states[t]
        t %= 2 * T + 2
        if t <= T:
            return tr.heads[t], tr.states[t]
        s = 2 * T + 1 - t
        return tr.heads[s], tagged(tr.states[s])

    divergence = None
    checked = 0
    for t in range(steps + 1):
        got = _heads(alph, c)
        want = [expected(t)]
        if got != want:
            divergence = (t, f"CA shows {got}, machine {want}")
            break
        checked += 1
        if t < steps:
            c = c.g(1)

    mapped = 0
    if norm is not None and divergence is None:
        orig = trace_run(norm.original, initial_id(norm.original, w), steps)
        for s in range(len(orig.states)):
            t = norm.step_map(w, s)
            if t > steps or (T is not None and t > T):
                break
            head, state = expected(t)
            want = (orig.heads[s], phase_name(orig.states[s], 0))
            if (head, state) != want:
                divergence = (t, f"normalized run at {(head, state)}, original step {s} at {want}")
                break
            mapped += 1
    return EquivalenceReport(w, steps, T, checked, divergence, mapped)


# ---------------------------------------------------------------------------
# property suite


@dataclass(frozen=True)
class SuiteSizes:
    """Case counts for :func:`run_property_suite`."""

    configs: int = 20
    width: int = 16
    exhaustive: int = 1
    conj_period: int = 1
    steps: int = 8
    cone_k: int = 12
    pairs: int = 5
    cylinders: int = 5
    words: int = 3
    max_period: int = 5000

    @classmethod
    def minimal(cls) -> "SuiteSizes":
        return cls(configs=4, width=8, exhaustive=1, conj_period=1, steps=4, cone_k=6,
                   pairs=2, cylinders=2, words=2, max_period=2000)

    @classmethod
    def full(cls) -> "SuiteSizes":
        return cls(configs=200, width=64, exhaustive=2, conj_period=2, steps=24, cone_k=48,
                   pairs=100, cylinders=50, words=8, max_period=20000)


@dataclass(frozen=True)
class PropertyResult:
    module: str
    name: str
    cases: int
    failures: int
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def line(self, seed: int) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{status} {self.module}.{self.name} cases={self.cases} seed={seed}"
        if self.counterexample:
            text += f" first-counterexample: {self.counterexample}"
        return text


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    machine: str
    results: tuple[PropertyResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def text(self) -> str:
        lines = [f"property suite: machine={self.machine} seed={self.seed}"]
        lines += [r.line(self.seed) for r in self.results]
        failed = sum(not r.ok for r in self.results)
        lines.append(f"{len(self.results) - failed} passed, {failed} failed")
        return "\n".join(lines) + "\n"


FAULTS = ("g_inverse",)


class _Ctx:
    def __init__(self, M: TuringMachine, rng: np.random.Generator, sizes: SuiteSizes,
                 fault: str | None):
        self.M = M
        self.rng = rng
        self.sizes = sizes
        self.alph = build_alphabets(M)
        ctrl, FS, FA, IS, IA, qfc = self.alph.tables
        if fault == "g_inverse":
            # send every inverse head update to one fixed letter
            IS = IS.copy()
            IS[IS >= 0] = IS[IS >= 0].min()
        elif fault is not None:
            raise ValueError(f"unknown fault {fault!r}; known: {', '.join(FAULTS)}")
        self.tables = (ctrl, FS, FA, IS, IA, qfc)

    def letters(self, k: int) -> tuple:
        R = self.alph.R
        return tuple(R[i] for i in self.rng.integers(0, len(R), size=k))

    def codes(self, k: int) -> np.ndarray:
        return self.rng.integers(0, len(self.alph.R), size=k).astype(np.int64)

    def config(self) -> Configuration:
        w = int(self.rng.integers(0, self.sizes.width + 1))
        left, right = self.letters(1), self.letters(1)
        return make_config(left, self.letters(w), right, int(self.rng.integers(-w - 1, 2)))

    def input_word(self, max_len: int) -> tuple[str, ...]:
        sigma = [a for a in self.M.alphabet if a != self.M.blank] or [self.M.blank]
        k = int(self.rng.integers(0, max_len + 1))
        return tuple(sigma[i] for i in self.rng.integers(0, len(sigma), size=k))


def _fmt(obj) -> str:
    from .literals import format_config, format_word

    if isinstance(obj, Configuration):
        return format_config(obj)
    if isinstance(obj, tuple) and obj and isinstance(obj[0], tuple):
        return format_word(obj)
    return repr(obj)


def _collect(module: str, name: str, cases) -> PropertyResult:
    # items are (ok, example) or, for batched kernels, (ok, example, cases, failures)
    n = bad = 0
    first = None
    for item in cases:
        ok, example = item[:2]
        count, fails = item[2:] if len(item) == 4 else (1, int(not ok))
        n += count
        bad += fails
        if not ok:
            if first is None:
                first = example() if callable(example) else example
    return PropertyResult(module, name, n, bad, first)


# ca-core -------------------------------------------------------------------


def _p_inverse_pair(ctx: _Ctx):
    g = g_map(ctx.M)
    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        yield step_inverse(g, step(g, x)) == x, lambda x=x: _fmt(x)


def _p_shift_commutes(ctx: _Ctx):
    g = g_map(ctx.M)
    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        yield step(g, x.shifted(1)) == step(g, x).shifted(1), lambda x=x: _fmt(x)


def _p_iterate_matches_steps(ctx: _Ctx):
    h = h_map(ctx.M)
    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        if len(x.left) != 1 or len(x.right) != 1:
            continue
        k = int(ctx.rng.integers(-3, 4))
        y = iterate(h, x, k) if k >= 0 else iterate(h.inverse, x, -k)
        yield h_power(ctx.M, x, k) == y, lambda x=x, k=k: f"k={k} {_fmt(x)}"


# embed ---------------------------------------------------------------------


def _p_g_reversibility(ctx: _Ctx):
    ctrl, FS, FA, IS, IA, qfc = ctx.tables
    R = ctx.alph.R
    bg = ctx.alph.r_code[CellLetter(ctx.M.blank, RIGHT, NONE)]
    letters = np.arange(len(R), dtype=np.int64)
    for length in range(1, ctx.sizes.exhaustive + 1):
        total, failures, first = K.exhaust_g_roundtrip(letters, length, bg, ctrl, FS, FA,
                                                       IS, IA, qfc)
        yield failures == 0, f"exhaustive length {length}, case {first}", total, failures
    for _ in range(ctx.sizes.configs):
        x = ctx.codes(int(ctx.rng.integers(7, ctx.sizes.width + 8)))
        y = K.g_inv_word(K.g_word(x, ctrl, FS, FA, qfc), ctrl, IS, IA, qfc)
        z = K.g_word(K.g_inv_word(x, ctrl, IS, IA, qfc), ctrl, FS, FA, qfc)
        ok = np.array_equal(y, x[3:-3]) and np.array_equal(z, x[3:-3])
        yield ok, lambda x=x: _fmt(tuple(R[i] for i in x.tolist()))


def _s_track(x: Configuration) -> Configuration:
    return x.map_letters(lambda c: SCell(c[0], c[1]))


def _p_conjugacy(ctx: _Ctx):
    ctrl, FS, FA, IS, IA, qfc = ctx.tables
    letters = np.arange(len(ctx.alph.S), dtype=np.int64)
    cases, failures, fp, fi = K.exhaust_fm_conjugacy(letters, ctx.sizes.conj_period,
                                                     ctrl, FS, FA, IS, IA)
    yield failures == 0, f"period {fp}, case {fi}", cases, failures
    f = fm_map(ctx.M)
    for _ in range(ctx.sizes.configs):
        x = _s_track(ctx.config())
        lhs = reverse_mark(step(f, reverse_mark(x)))
        yield lhs == step_inverse(f, x), lambda x=x: _fmt(x)


def _p_borders_static(ctx: _Ctx):
    g = g_map(ctx.M)
    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        y = step(g, x)
        lo, hi = min(x.offset, y.offset) - 4, max(x.end, y.end) + 4
        sx, sy = segments(x), segments(y)
        ok = all(sx.has_border(i) == sy.has_border(i) for i in range(lo, hi))
        yield ok, lambda x=x: _fmt(x)


def _p_s_track(ctx: _Ctx):
    """The S-track of g is f_M on the S-track."""
    g, f = g_map(ctx.M), fm_map(ctx.M)
    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        yield _s_track(step(g, x)) == step(f, _s_track(x)), lambda x=x: _fmt(x)


def _p_cone(ctx: _Ctx):
    K_ = ctx.sizes.cone_k
    for _ in range(ctx.sizes.words):
        w = ctx.input_word(3)
        rep = check_assumptions(ctx.M, w, K_)
        if not (rep.move_timing and rep.quiet_start):
            continue
        x = encode_tm_input(ctx.M, w, max(len(w), 1))
        base = CodedConfig.from_config(ctx.M, x)
        reach = K_ // 3 + 2
        ref = [ctx.alph.R[c][:2] for c in base.window(-reach, reach).tolist()]
        for k in range(-K_, K_ + 1):
            y = base.g(k)
            row = [ctx.alph.R[c][:2] for c in y.window(-reach, reach).tolist()]
            bad = [l for l in range(-reach, reach + 1)
                   if 3 * abs(l) >= abs(k) and row[l + reach] != ref[l + reach]]
            yield not bad, lambda w=w, k=k, bad=bad: f"w={''.join(w)!r} k={k} cell={bad[:1]}"


# trace ---------------------------------------------------------------------


def _p_itinerary_kernel(ctx: _Ctx):
    from .trace import itinerary

    h = h_map(ctx.M)
    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        n = int(ctx.rng.integers(0, 3))
        T = int(ctx.rng.integers(1, ctx.sizes.steps + 1))
        yield itinerary(ctx.M, x, n, T) == itinerary(h, x, n, T), \
            lambda x=x, n=n, T=T: f"n={n} T={T} {_fmt(x)}"


def _p_itinerary_locality(ctx: _Ctx):
    from .trace import itinerary

    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        if len(x.left) != 1 or len(x.right) != 1:
            continue
        n = int(ctx.rng.integers(0, 3))
        T = int(ctx.rng.integers(1, ctx.sizes.steps + 1))
        lo, hi = -n - 3 * (T - 1), n + 5 * (T - 1)
        junk = ctx.letters(2)
        body = ctx.letters(3) + x.window(lo, hi) + ctx.letters(3)
        z = make_config(junk[:1], body, junk[1:], lo - 3)
        yield itinerary(ctx.M, x, n, T) == itinerary(ctx.M, z, n, T), \
            lambda x=x, n=n, T=T: f"n={n} T={T} {_fmt(x)}"


def _p_prefix(ctx: _Ctx):
    from .trace import itinerary

    for _ in range(ctx.sizes.configs):
        x = ctx.config()
        n = int(ctx.rng.integers(0, 3))
        T = int(ctx.rng.integers(2, ctx.sizes.steps + 2))
        yield itinerary(ctx.M, x, n, T)[:-1] == itinerary(ctx.M, x, n, T - 1), \
            lambda x=x: _fmt(x)


def _p_halting_witness(ctx: _Ctx):
    from .trace import itinerary, uw_check, witness_from_halting

    for _ in range(ctx.sizes.words):
        w = ctx.input_word(2)
        if not check_assumptions(ctx.M, w, 400).all_pass:
            continue
        wit = witness_from_halting(ctx.M, w, 400)
        if not wit:
            continue
        labels = itinerary(ctx.M, wit.y, 1, len(wit.labels))
        clean = all(c[2] == NONE for lab in labels[:2 * wit.n] for c in lab)
        yield labels == wit.labels and uw_check(ctx.M, labels, w) and clean, \
            f"w={''.join(w)!r}"


# verify --------------------------------------------------------------------


def _p_transitivity(ctx: _Ctx):
    for _ in range(ctx.sizes.pairs):
        n = int(ctx.rng.integers(0, 5))
        u, v = ctx.letters(n), ctx.letters(n)
        wit = transitivity_witness(ctx.M, u, v)
        yield wit.ok, lambda u=u, v=v: f"u={_fmt(u)} v={_fmt(v)}"


def _p_periodic(ctx: _Ctx):
    for _ in range(ctx.sizes.cylinders):
        c = ctx.letters(int(ctx.rng.integers(1, 7)))
        pt = periodic_point(ctx.M, c, ctx.sizes.max_period)
        yield bool(pt), lambda c=c: f"cylinder={_fmt(c)}"


def _p_tm_ca(ctx: _Ctx):
    if ctx.M.by_dst[ctx.M.initial]:
        return
    for _ in range(ctx.sizes.words):
        w = ctx.input_word(3)
        rep = tm_ca_equivalence(ctx.M, w, ctx.sizes.steps * 6)
        yield rep.ok, lambda rep=rep: rep.lines()[0]


PROPERTIES: tuple[tuple[str, str, Callable], ...] = (
    ("ca-core", "inverse_pair", _p_inverse_pair),
    ("ca-core", "shift_commutes", _p_shift_commutes),
    ("ca-core", "iterate_matches_steps", _p_iterate_matches_steps),
    ("embed", "g_reversibility", _p_g_reversibility),
    ("embed", "conjugacy", _p_conjugacy),
    ("embed", "borders_static", _p_borders_static),
    ("embed", "s_track_is_fm", _p_s_track),
    ("embed", "cone", _p_cone),
    ("trace", "itinerary_kernel", _p_itinerary_kernel),
    ("trace", "itinerary_locality", _p_itinerary_locality),
    ("trace", "itinerary_prefix", _p_prefix),
    ("trace", "halting_witness", _p_halting_witness),
    ("verify", "transitivity", _p_transitivity),
    ("verify", "periodic_points", _p_periodic),
    ("verify", "tm_ca_equivalence", _p_tm_ca),
)


def run_property_suite(M, seed: int = 0, sizes: SuiteSizes | None = None,
                       fault: str | None = None, name: str | None = None) -> SuiteReport:
    """Run every property in a fixed order.  Each property draws from its
    own generator seeded by ``(seed, index)``, so results do not depend on
    which other properties ran."""
    sizes = sizes or SuiteSizes()
    machine = _machine(M)
    results = []
    for idx, (module, pname, fn) in enumerate(PROPERTIES):
        rng = np.random.default_rng([seed, idx])
        ctx = _Ctx(machine, rng, sizes, fault)
        results.append(_collect(module, pname, fn(ctx)))
    return SuiteReport(seed, name or "machine", tuple(results))


__all__ = [
    "EquivalenceReport",
    "FAULTS",
    "PeriodicNotFound",
    "PeriodicPoint",
    "PropertyResult",
    "SuiteReport",
    "SuiteSizes",
    "TransitivityWitness",
    "corrected_wall",
    "h_return_time",
    "literal_wall",
    "periodic_point",
    "run_property_suite",
    "tm_ca_equivalence",
    "transitivity_witness",
]
