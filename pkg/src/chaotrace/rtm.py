"""Reversible Turing machines in the quadruple formalism.

A quadruple ``[q1, a, b, q2]`` either rewrites the scanned letter ``a`` to
``b`` (both tape letters) or, when ``a == "/"``, moves the head in the
direction ``b`` in ``{"+", "0", "-"}``.  Machines are run on two-way
infinite tapes with the input placed immediately right of the head.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

MOVE = "/"
DIRECTIONS = {"+": 1, "0": 0, "-": -1}


class Quadruple(NamedTuple):
    src: str
    a: str
    b: str
    dst: str

    @property
    def is_move(self) -> bool:
        return self.a == MOVE

    @property
    def offset(self) -> int:
        return DIRECTIONS[self.b]

    def __str__(self) -> str:
        return f"[{self.src},{self.a},{self.b},{self.dst}]"


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: str
    final: str
    blank: str
    quads: tuple[Quadruple, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "quads", tuple(Quadruple(*q) for q in self.quads))
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate tape letters")
        if self.initial not in self.states or self.final not in self.states:
            raise ValueError("initial and final states must belong to the state set")
        if self.blank not in self.alphabet:
            raise ValueError("blank letter must belong to the alphabet")
        if MOVE in self.alphabet:
            raise ValueError(f"{MOVE!r} is reserved and cannot be a tape letter")
        states, letters = set(self.states), set(self.alphabet)
        for q in self.quads:
            if q.src not in states or q.dst not in states:
                raise ValueError(f"quadruple {q} uses an unknown state")
            if q.is_move:
                if q.b not in DIRECTIONS:
                    raise ValueError(f"quadruple {q} has an invalid direction")
            elif q.a not in letters or q.b not in letters:
                raise ValueError(f"quadruple {q} uses an unknown letter")

    @cached_property
    def by_src(self) -> dict[str, tuple[Quadruple, ...]]:
        out: dict[str, list[Quadruple]] = {q: [] for q in self.states}
        for quad in self.quads:
            out[quad.src].append(quad)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def by_dst(self) -> dict[str, tuple[Quadruple, ...]]:
        out: dict[str, list[Quadruple]] = {q: [] for q in self.states}
        for quad in self.quads:
            out[quad.dst].append(quad)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def report(self) -> "ValidationReport":
        return validate(self)

    @property
    def deterministic(self) -> bool:
        return self.report.deterministic

    @property
    def reversible(self) -> bool:
        return self.report.reversible


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    deterministic: bool
    reversible: bool
    domain_conflicts: tuple[tuple[Quadruple, Quadruple], ...]
    range_conflicts: tuple[tuple[Quadruple, Quadruple], ...]

    def lines(self) -> list[str]:
        out = [f"deterministic: {self.deterministic}", f"reversible: {self.reversible}"]
        out += [f"domain overlap: {p} {q}" for p, q in self.domain_conflicts]
        out += [f"range overlap: {p} {q}" for p, q in self.range_conflicts]
        return out


def overlap_in_domain(p: Quadruple, q: Quadruple) -> bool:
    # a move quadruple overlaps everything leaving the same state
    return p.src == q.src and (p.is_move or q.is_move or p.a == q.a)


def overlap_in_range(p: Quadruple, q: Quadruple) -> bool:
    return p.dst == q.dst and (p.is_move or q.is_move or p.b == q.b)


def validate(machine: TuringMachine) -> ValidationReport:
    quads = list(dict.fromkeys(machine.quads))
    dom, rng = [], []
    for i, p in enumerate(quads):
        for q in quads[i + 1 :]:
            if overlap_in_domain(p, q):
                dom.append((p, q))
            if overlap_in_range(p, q):
                rng.append((p, q))
    return ValidationReport(not dom, not rng, tuple(dom), tuple(rng))


# ---------------------------------------------------------------------------
# instantaneous descriptions and stepping


@dataclass(frozen=True)
class InstantaneousDescription:
    """Machine configuration: tape contents, head position and state.

    ``cells`` lists only the positions that differ from the background.
    The background is the blank, except that an optional ``tail``
    ``(start, word)`` repeats ``word`` periodically from ``start`` onwards.
    """

    cells: tuple[tuple[int, str], ...]
    head: int
    state: str
    blank: str
    tail: tuple[int, tuple[str, ...]] | None = None

    def background(self, pos: int) -> str:
        if self.tail is not None and pos >= self.tail[0]:
            start, word = self.tail
            return word[(pos - start) % len(word)]
        return self.blank

    def read(self, pos: int) -> str:
        return self.tape.get(pos, self.background(pos))

    @cached_property
    def tape(self) -> dict[int, str]:
        return dict(self.cells)

    def replace(self, *, head: int | None = None, state: str | None = None,
                writes: Mapping[int, str] | None = None) -> "InstantaneousDescription":
        tape = dict(self.cells)
        for pos, letter in (writes or {}).items():
            if letter == self.background(pos):
                tape.pop(pos, None)
            else:
                tape[pos] = letter
        return InstantaneousDescription(
            tuple(sorted(tape.items())),
            self.head if head is None else head,
            self.state if state is None else state,
            self.blank,
            self.tail,
        )


def initial_id(machine: TuringMachine, word: Sequence[str],
               tail: Sequence[str] | None = None) -> InstantaneousDescription:
    """Head at 0 in the initial state, ``word`` on cells 1..|word|.

    ``tail`` (optional) is repeated forever right after the word.
    """
    for letter in list(word) + list(tail or ()):
        if letter not in machine.alphabet:
            raise ValueError(f"letter {letter!r} not in the machine alphabet")
    t = None
    if tail:
        t = (len(word) + 1, tuple(tail))
    base = InstantaneousDescription((), 0, machine.initial, machine.blank, t)
    return base.replace(writes={i + 1: c for i, c in enumerate(word)})


class Stuck:
    """Returned by :func:`tm_step` when no quadruple applies."""

    def __repr__(self) -> str:
        return "STUCK"


STUCK = Stuck()


class AmbiguousStepError(RuntimeError):
    """More than one quadruple applies: the machine is not deterministic
    (forward) or not reversible (backward)."""


def applicable(machine: TuringMachine, state: str, letter: str,
               forward: bool = True) -> list[Quadruple]:
    if forward:
        return [q for q in machine.by_src[state] if q.is_move or q.a == letter]
    return [q for q in machine.by_dst[state] if q.is_move or q.b == letter]


def tm_step(machine: TuringMachine, conf: InstantaneousDescription,
            forward: bool = True) -> InstantaneousDescription | Stuck:
    quads = applicable(machine, conf.state, conf.read(conf.head), forward)
    if not quads:
        return STUCK
    if len(quads) > 1:
        kind = "forward" if forward else "backward"
        raise AmbiguousStepError(f"{kind} step ambiguous: {', '.join(map(str, quads))}")
    (q,) = quads
    if forward:
        if q.is_move:
            return conf.replace(head=conf.head + q.offset, state=q.dst)
        return conf.replace(state=q.dst, writes={conf.head: q.b})
    if q.is_move:
        return conf.replace(head=conf.head - q.offset, state=q.src)
    return conf.replace(state=q.src, writes={conf.head: q.a})


# ---------------------------------------------------------------------------
# running


@dataclass(frozen=True)
class Halted:
    steps: int
    final_id: InstantaneousDescription
    in_final: bool


@dataclass(frozen=True)
class Running:
    steps: int
    last_id: InstantaneousDescription


@dataclass
class Trace:
    """Step-by-step record of a forward run (mutable, built by :func:`trace_run`)."""

    states: list[str] = field(default_factory=list)
    heads: list[int] = field(default_factory=list)
    fired: list[Quadruple] = field(default_factory=list)
    halted: bool = False
    tape: dict[int, str] = field(default_factory=dict)


def trace_run(machine: TuringMachine, conf: InstantaneousDescription, max_steps: int,
              stop_at_final: bool = True) -> Trace:
    """Run forward, recording the state and head before every step.

    ``states[t]``/``heads[t]`` describe time ``t``; ``fired[t]`` is the
    quadruple applied between time ``t`` and ``t + 1``.
    """
    tape = dict(conf.cells)
    bg = conf.background
    head, state = conf.head, conf.state
    tr = Trace([state], [head])
    by_src = machine.by_src
    for _ in range(max_steps):
        if stop_at_final and state == machine.final:
            tr.halted = True
            break
        letter = tape.get(head)
        if letter is None:
            letter = bg(head)
        quads = [q for q in by_src[state] if q.is_move or q.a == letter]
        if not quads:
            tr.halted = True
            break
        if len(quads) > 1:
            raise AmbiguousStepError(f"forward step ambiguous: {', '.join(map(str, quads))}")
        q = quads[0]
        if q.is_move:
            head += q.offset
        else:
            tape[head] = q.b
        state = q.dst
        tr.fired.append(q)
        tr.states.append(state)
        tr.heads.append(head)
    else:
        if stop_at_final and state == machine.final:
            tr.halted = True
        elif not [q for q in by_src[state]
                  if q.is_move or q.a == tape.get(head, bg(head))]:
            tr.halted = True
    tr.tape = tape
    return tr


def _to_id(conf: InstantaneousDescription, tr: Trace) -> InstantaneousDescription:
    base = InstantaneousDescription((), tr.heads[-1], tr.states[-1], conf.blank, conf.tail)
    return base.replace(writes=tr.tape)


def run(machine: TuringMachine, word: Sequence[str], max_steps: int,
        tail: Sequence[str] | None = None) -> Halted | Running:
    """Run from the standard initial description.

    Halting means the machine is stuck or has entered its final state,
    whichever happens first.
    """
    conf = initial_id(machine, word, tail)
    tr = trace_run(machine, conf, max_steps)
    final = _to_id(conf, tr)
    if tr.halted:
        return Halted(len(tr.fired), final, final.state == machine.final)
    return Running(len(tr.fired), final)


# ---------------------------------------------------------------------------
# text format


def parse_machine(text: str, allow_invalid: bool = False) -> TuringMachine:
    """Parse the plain-text machine format (see README).

    Header lines are ``key: values``; every other non-empty line is a
    quadruple ``q1 a b q2``.  ``;`` starts a comment.
    """
    header: dict[str, list[str]] = {}
    quads = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if ":" in line.split()[0]:
            key, _, rest = line.partition(":")
            header[key.strip()] = rest.split()
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        quads.append(Quadruple(*parts))
    try:
        machine = TuringMachine(
            states=tuple(header["states"]),
            alphabet=tuple(header["alphabet"]),
            initial=header["initial"][0],
            final=header["final"][0],
            blank=header["blank"][0],
            quads=tuple(quads),
        )
    except KeyError as exc:
        raise ValueError(f"missing header field {exc.args[0]!r}") from None
    if not allow_invalid:
        rep = machine.report
        if not (rep.deterministic and rep.reversible):
            raise ValueError("invalid machine:\n" + "\n".join(rep.lines()))
    return machine


def format_machine(machine: TuringMachine) -> str:
    lines = [
        f"states: {' '.join(machine.states)}",
        f"alphabet: {' '.join(machine.alphabet)}",
        f"initial: {machine.initial}",
        f"final: {machine.final}",
        f"blank: {machine.blank}",
    ]
    lines += [" ".join(q) for q in machine.quads]
    return "\n".join(lines) + "\n"


def make_machine(states: Iterable[str], alphabet: Iterable[str], initial: str, final: str,
                 blank: str, quads: Iterable[Sequence[str]]) -> TuringMachine:
    return TuringMachine(tuple(states), tuple(alphabet), initial, final, blank,
                         tuple(Quadruple(*q) for q in quads))
