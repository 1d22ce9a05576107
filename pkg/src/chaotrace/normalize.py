"""Normal form for reversible machines driving the cellular automaton.

The automaton construction assumes a machine that

(i)   fires move quadruples only at step indices congruent to 2 mod 3,
(ii)  makes no move within two steps of its initial state, in either time
      direction,
(iii) takes at least ``2|w| + 2`` steps before halting on input ``w``,
(iv)  halts after an even number of steps, or never.

:func:`normalize` produces such a machine from any deterministic reversible
machine whose initial state has no incoming and whose final state has no
outgoing quadruples.  Every original state is unrolled into six phase
states: five identity rewrites followed by the original action, so moves
land on steps ``6t + 5`` and every halting time is a multiple of six.  An
optional reversible sweep over the input is run first, which supplies the
lower bound on the running time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .rtm import (
    DIRECTIONS,
    MOVE,
    Quadruple,
    TuringMachine,
    applicable,
    initial_id,
    tm_step,
    trace_run,
    STUCK,
)

PHASES = 6
SWEEP_STATES = ("start", "right", "check", "left", "back")


def phase_name(state: str, phase: int) -> str:
    return f"{state}.{phase}"


@dataclass(frozen=True)
class NormalizedMachine:
    """A normalized machine together with its origin and step mapping."""

    machine: TuringMachine
    original: TuringMachine
    sweep: bool
    sweep_names: tuple[str, ...] = ()

    def sweep_length(self, word: Sequence[str]) -> int:
        """Steps of the (un-phased) input sweep on ``word``."""
        if not self.sweep:
            return 0
        k = 0
        while k < len(word) and word[k] != self.original.blank:
            k += 1
        return 1 + 4 * (k + 1)

    def step_map(self, word: Sequence[str], t: int) -> int:
        """Normalized time at which original time ``t`` is reached."""
        return PHASES * (self.sweep_length(word) + t)

    def origin(self, state: str) -> tuple[str, int]:
        """Split a normalized state name into (un-phased state, phase)."""
        base, _, phase = state.rpartition(".")
        return base, int(phase)


def _fresh(names: set[str], base: str) -> str:
    name = base
    while name in names:
        name = "_" + name
    return name


def _accepted(machine: TuringMachine, state: str) -> list[str]:
    quads = machine.by_src[state]
    if any(q.is_move for q in quads):
        return list(machine.alphabet)
    return [q.a for q in quads]


def _with_sweep(machine: TuringMachine) -> tuple[TuringMachine, tuple[str, ...]]:
    taken = set(machine.states)
    names = []
    for s in SWEEP_STATES:
        n = _fresh(taken, "sw_" + s)
        taken.add(n)
        names.append(n)
    start, right, check, left, back = names
    blank = machine.blank
    quads = [Quadruple(start, blank, blank, right), Quadruple(right, MOVE, "+", check),
             Quadruple(check, blank, blank, left), Quadruple(left, MOVE, "-", back),
             Quadruple(back, blank, blank, machine.initial)]
    for a in machine.alphabet:
        if a != blank:
            quads.append(Quadruple(check, a, a, right))
            quads.append(Quadruple(back, a, a, left))
    swept = TuringMachine(tuple(names) + machine.states, machine.alphabet, start,
                          machine.final, blank, tuple(quads) + machine.quads)
    return swept, tuple(names)


def normalize(machine: TuringMachine, sweep: bool = True) -> NormalizedMachine:
    """Return an equivalent machine satisfying assumptions (i)-(iv).

    With ``sweep=False`` the input sweep is omitted, so (iii) is not
    guaranteed; this is the form used for right-infinite inputs where a
    sweep would never return.
    """
    rep = machine.report
    if not (rep.deterministic and rep.reversible):
        raise ValueError("normalize requires a deterministic reversible machine")
    if machine.by_dst[machine.initial]:
        raise ValueError("the initial state must have no incoming quadruples")
    if machine.by_src[machine.final]:
        raise ValueError("the final state must have no outgoing quadruples")
    if machine.initial == machine.final:
        raise ValueError("initial and final states must differ")

    base, sweep_names = _with_sweep(machine) if sweep else (machine, ())
    states: list[str] = []
    quads: list[Quadruple] = []
    for q in base.states:
        if q == base.final:
            states.append(phase_name(q, 0))
            continue
        letters = _accepted(base, q)
        states += [phase_name(q, i) for i in range(PHASES)]
        for i in range(PHASES - 1):
            quads += [Quadruple(phase_name(q, i), a, a, phase_name(q, i + 1)) for a in letters]
        quads += [Quadruple(phase_name(q, PHASES - 1), quad.a, quad.b, phase_name(quad.dst, 0))
                  for quad in base.by_src[q]]
    result = TuringMachine(tuple(states), base.alphabet, phase_name(base.initial, 0),
                           phase_name(base.final, 0), base.blank, tuple(quads))
    rep = result.report
    assert rep.deterministic and rep.reversible, rep.lines()
    return NormalizedMachine(result, machine, sweep, sweep_names)


# ---------------------------------------------------------------------------
# assumption checks


@dataclass(frozen=True)
class AssumptionResult:
    status: str  # "pass", "fail" or "undetermined"
    witness: int | None = None

    def __bool__(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class AssumptionReport:
    move_timing: AssumptionResult
    quiet_start: AssumptionResult
    min_steps: AssumptionResult
    even_halt: AssumptionResult
    halted_at: int | None

    @property
    def all_pass(self) -> bool:
        return all(map(bool, (self.move_timing, self.quiet_start, self.min_steps, self.even_halt)))

    def lines(self) -> list[str]:
        out = []
        for name in ("move_timing", "quiet_start", "min_steps", "even_halt"):
            r = getattr(self, name)
            extra = "" if r.witness is None else f" (step {r.witness})"
            out.append(f"{name}: {r.status}{extra}")
        return out


def check_assumptions(machine: TuringMachine, word: Sequence[str], bound: int,
                      tail: Sequence[str] | None = None) -> AssumptionReport:
    """Simulate up to ``bound`` steps and check assumptions (i)-(iv)."""
    conf = initial_id(machine, word, tail)
    tr = trace_run(machine, conf, bound)
    moves = [t for t, q in enumerate(tr.fired) if q.is_move]

    bad = [t for t in moves if t % 3 != 2]
    timing = AssumptionResult("fail", bad[0]) if bad else AssumptionResult("pass")

    # backward from the initial description: two steps, no moves
    quiet = AssumptionResult("pass")
    back = conf
    for k in range(1, 3):
        quads = applicable(machine, back.state, back.read(back.head), forward=False)
        if not quads:
            break
        if quads[0].is_move:
            quiet = AssumptionResult("fail", -k)
            break
        back = tm_step(machine, back, forward=False)
        if back is STUCK:
            break
    if quiet:
        move_set = set(moves)
        for t, state in enumerate(tr.states):
            if state != machine.initial:
                continue
            near = [s for s in (t - 2, t - 1, t, t + 1) if s in move_set]
            if near:
                quiet = AssumptionResult("fail", near[0])
                break

    halted_at = len(tr.fired) if tr.halted else None
    need = 2 * len(word) + 2
    if halted_at is None:
        min_steps = AssumptionResult("pass" if bound >= need else "undetermined")
        even = AssumptionResult("undetermined")
    else:
        min_steps = AssumptionResult("pass") if halted_at >= need else AssumptionResult("fail", halted_at)
        even = AssumptionResult("pass") if halted_at % 2 == 0 else AssumptionResult("fail", halted_at)
    return AssumptionReport(timing, quiet, min_steps, even, halted_at)


__all__ = [
    "DIRECTIONS",
    "NormalizedMachine",
    "AssumptionReport",
    "AssumptionResult",
    "check_assumptions",
    "normalize",
    "phase_name",
    "PHASES",
]
