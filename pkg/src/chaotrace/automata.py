"""Regular expressions, DFAs and deterministic Muller automata.

Tokens are opaque hashable values: plain symbols, letter tuples, or
*labels* (plain tuples of letters).  Besides concrete tokens a regex may
use patterns, which stand for every token they match:

* a letter pattern ``[*,~q,!L/LR]`` has fields ``*`` (anything), ``!a/b``
  (anything except ``a`` and ``b``) or a literal value;
* a label pattern ``<[*,*,!L/LR][B,>,.][*,*,!L/LR]>`` matches label tuples
  position by position.

All atoms of one expression must be pairwise disjoint.  The automata then
run over *classes*: the atoms themselves plus a catch-all ``OTHER`` class,
or the tokens of an explicitly declared finite alphabet.

Regex syntax (whitespace is ignored)::

    union   := concat ("|" concat)*
    concat  := postfix+
    postfix := primary ("*" | "^ω" | "^w")*
    primary := "(" union ")" | "∅" | "@empty" | "ε" | "@eps" | letter | label
    letter  := "[" field ("," field)* "]" | any other single character
    label   := "<" letter+ ">"

``^ω`` may only close the whole expression: ``prefix body^ω``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .literals import _FIELD, _make, format_letter

Token = Hashable


# ---------------------------------------------------------------------------
# patterns


def _field_ok(pat: str, value: str) -> bool:
    if pat == "*":
        return True
    if pat.startswith("!"):
        return value not in pat[1:].split("/")
    return pat == value


def _fields_overlap(p: str, q: str) -> bool:
    # field domains are treated as unbounded
    if p == "*" or q == "*":
        return True
    if p.startswith("!") and q.startswith("!"):
        return True
    if p.startswith("!"):
        return q not in p[1:].split("/")
    if q.startswith("!"):
        return p not in q[1:].split("/")
    return p == q


def _is_pattern_field(f: str) -> bool:
    return f == "*" or f.startswith("!")


def _fields_of(letter) -> tuple:
    return tuple(letter) if isinstance(letter, tuple) else (letter,)


@dataclass(frozen=True)
class LetterPattern:
    fields: tuple[str, ...]

    def matches(self, token) -> bool:
        if isinstance(token, (LetterPattern, LabelPattern)) or type(token) is tuple:
            return False
        vals = _fields_of(token)
        return len(vals) == len(self.fields) and all(map(_field_ok, self.fields, vals))

    def __str__(self) -> str:
        return "[" + ",".join(self.fields) + "]"


@dataclass(frozen=True)
class LabelPattern:
    letters: tuple  # LetterPattern or concrete letters

    def matches(self, token) -> bool:
        if type(token) is not tuple or len(token) != len(self.letters):
            return False
        return all(_letter_match(p, t) for p, t in zip(self.letters, token))

    def __str__(self) -> str:
        return "<" + "".join(_atom_text(a) for a in self.letters) + ">"


def _letter_match(p, t) -> bool:
    return p.matches(t) if isinstance(p, LetterPattern) else p == t


def _letters_overlap(p, q) -> bool:
    if isinstance(p, LetterPattern) and isinstance(q, LetterPattern):
        return len(p.fields) == len(q.fields) and all(map(_fields_overlap, p.fields, q.fields))
    if isinstance(p, LetterPattern):
        return p.matches(q)
    if isinstance(q, LetterPattern):
        return q.matches(p)
    return p == q


def is_pattern(atom) -> bool:
    return isinstance(atom, (LetterPattern, LabelPattern))


def atom_matches(atom, token) -> bool:
    if is_pattern(atom):
        return atom.matches(token)
    return atom == token


def atoms_overlap(a, b) -> bool:
    if isinstance(a, LabelPattern) or isinstance(b, LabelPattern):
        la = a.letters if isinstance(a, LabelPattern) else a
        lb = b.letters if isinstance(b, LabelPattern) else b
        if type(la) is not tuple and not isinstance(a, LabelPattern):
            return False
        if type(lb) is not tuple and not isinstance(b, LabelPattern):
            return False
        return len(la) == len(lb) and all(map(_letters_overlap, la, lb))
    if type(a) is tuple or type(b) is tuple:
        return a == b
    return _letters_overlap(a, b)


class _Other:
    """The class of tokens matched by no atom."""

    def __repr__(self) -> str:
        return "OTHER"

    def __reduce__(self):
        return "OTHER"


OTHER = _Other()


# ---------------------------------------------------------------------------
# AST


class Regex:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Sym(Regex):
    atom: Token


@dataclass(frozen=True)
class Concat(Regex):
    parts: tuple


@dataclass(frozen=True)
class Union(Regex):
    parts: tuple


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Omega(Regex):
    """``prefix . body^omega``."""

    prefix: Regex
    body: Regex


def sym(atom) -> Sym:
    return Sym(atom)


def concat(*parts: Regex) -> Regex:
    flat: list[Regex] = []
    for p in parts:
        if isinstance(p, Concat):
            flat.extend(p.parts)
        elif not isinstance(p, Epsilon):
            flat.append(p)
    if not flat:
        return Epsilon()
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def union(*parts: Regex) -> Regex:
    flat: list[Regex] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Union) else (p,))
    if not flat:
        return Empty()
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(flat))


def star(r: Regex) -> Regex:
    return Star(r)


def word(tokens: Iterable) -> Regex:
    return concat(*(Sym(t) for t in tokens))


def omega(prefix: Regex, body: Regex) -> Omega:
    return Omega(prefix, body)


def atoms(r: Regex) -> list:
    """Distinct atoms of ``r`` in first-occurrence order."""
    out: dict = {}

    def walk(node):
        if isinstance(node, Sym):
            out.setdefault(node.atom, None)
        elif isinstance(node, (Concat, Union)):
            for p in node.parts:
                walk(p)
        elif isinstance(node, Star):
            walk(node.inner)
        elif isinstance(node, Omega):
            walk(node.prefix)
            walk(node.body)

    walk(r)
    return list(out)


def has_omega(r: Regex) -> bool:
    if isinstance(r, Omega):
        return True
    if isinstance(r, (Concat, Union)):
        return any(map(has_omega, r.parts))
    if isinstance(r, Star):
        return has_omega(r.inner)
    return False


# ---------------------------------------------------------------------------
# printing


def _atom_text(atom) -> str:
    if isinstance(atom, (LetterPattern, LabelPattern)):
        return str(atom)
    if type(atom) is tuple:
        return "<" + "".join(_atom_text(a) for a in atom) + ">"
    text = format_letter(atom)
    if len(text) == 1 and text in _OPERATORS:
        return f"[{text}]"
    return text


_OPERATORS = set("()|*^<>[]@∅ε ")


def to_text(r: Regex) -> str:
    def go(node, prec: int) -> str:
        # prec: 0 union context, 1 concat context, 2 postfix operand
        if isinstance(node, Empty):
            return "∅"
        if isinstance(node, Epsilon):
            return "ε"
        if isinstance(node, Sym):
            return _atom_text(node.atom)
        if isinstance(node, Union):
            s = "|".join(go(p, 0) for p in node.parts)
            return f"({s})" if prec > 0 else s
        if isinstance(node, Concat):
            s = "".join(go(p, 1) for p in node.parts)
            return f"({s})" if prec > 1 else s
        if isinstance(node, Star):
            return go(node.inner, 2) + "*"
        if isinstance(node, Omega):
            head = "" if isinstance(node.prefix, Epsilon) else go(node.prefix, 1)
            return head + go(node.body, 2) + "^ω"
        raise TypeError(node)

    return go(r, 0)


# ---------------------------------------------------------------------------
# parsing


class RegexSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class _OmegaMark(Regex):
    inner: Regex


_BRACKET = re.compile(rf"\[({_FIELD}(?:,{_FIELD})*)\]")


def _letter_from_fields(fields: list[str]):
    if any(map(_is_pattern_field, fields)):
        return LetterPattern(tuple(fields))
    return _make(fields)


class _Parser:
    def __init__(self, text: str, alphabet):
        self.s = text
        self.i = 0
        self.alphabet = alphabet

    def error(self, msg: str):
        raise RegexSyntaxError(f"{msg} at column {self.i}: {self.s[self.i:self.i + 16]!r}")

    def skip(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def parse(self) -> Regex:
        r = self.union()
        if self.peek():
            self.error("unexpected input")
        return _place_omega(r)

    def union(self) -> Regex:
        parts = [self.concat()]
        while self.peek() == "|":
            self.i += 1
            parts.append(self.concat())
        return union(*parts)

    def concat(self) -> Regex:
        parts = []
        while self.peek() and self.peek() not in "|)":
            parts.append(self.postfix())
        if not parts:
            self.error("empty expression (write ε for the empty word)")
        return concat(*parts)

    def postfix(self) -> Regex:
        r = self.primary()
        while True:
            c = self.peek()
            if c == "*":
                self.i += 1
                r = Star(r)
            elif c == "^":
                if self.s.startswith("^ω", self.i) or self.s.startswith("^w", self.i):
                    self.i += 2
                    r = _OmegaMark(r)
                else:
                    self.error("expected ^ω")
            else:
                return r

    def primary(self) -> Regex:
        c = self.peek()
        if c == "(":
            self.i += 1
            r = self.union()
            if self.peek() != ")":
                self.error("expected )")
            self.i += 1
            return r
        if c == "∅":
            self.i += 1
            return Empty()
        if c == "ε":
            self.i += 1
            return Epsilon()
        if c == "@":
            for name, node in (("@empty", Empty()), ("@eps", Epsilon())):
                if self.s.startswith(name, self.i):
                    self.i += len(name)
                    return node
            self.error("unknown @-keyword")
        if c == "<":
            self.i += 1
            letters = []
            while self.peek() != ">":
                if not self.peek():
                    self.error("unterminated label")
                letters.append(self.letter())
            self.i += 1
            if not letters:
                self.error("empty label")
            tok = (LabelPattern(tuple(letters)) if any(map(is_pattern, letters))
                   else tuple(letters))
            return Sym(self.check(tok))
        if not c or c in ")|*^>]":
            self.error("expected an atom")
        return Sym(self.check(self.letter()))

    def letter(self):
        self.skip()
        m = _BRACKET.match(self.s, self.i)
        if m is not None:
            self.i = m.end()
            return _letter_from_fields(m.group(1).split(","))
        c = self.s[self.i]
        if c in _OPERATORS:
            self.error("expected a letter")
        self.i += 1
        return c

    def check(self, tok):
        if self.alphabet is not None and not is_pattern(tok) and tok not in self.alphabet:
            self.error(f"unknown token {_atom_text(tok)}")
        return tok


def _place_omega(r: Regex) -> Regex:
    def count(node) -> int:
        if isinstance(node, _OmegaMark):
            return 1 + count(node.inner)
        if isinstance(node, (Concat, Union)):
            return sum(map(count, node.parts))
        if isinstance(node, Star):
            return count(node.inner)
        return 0

    n = count(r)
    if n == 0:
        return r
    if n > 1:
        raise RegexSyntaxError("at most one ^ω is allowed")
    if isinstance(r, _OmegaMark):
        return Omega(Epsilon(), r.inner)
    if isinstance(r, Concat) and isinstance(r.parts[-1], _OmegaMark):
        if count(r.parts[-1].inner) == 0:
            return Omega(concat(*r.parts[:-1]), r.parts[-1].inner)
    raise RegexSyntaxError("^ω must close the whole expression")


def parse_regex(text: str, alphabet: Iterable | None = None) -> Regex:
    alpha = None if alphabet is None else set(alphabet)
    return _Parser(text, alpha).parse()


# ---------------------------------------------------------------------------
# NFA (Thompson) and DFA


class _NFA:
    def __init__(self):
        self.eps: list[list[int]] = []
        self.moves: list[list[tuple]] = []

    def new(self) -> int:
        self.eps.append([])
        self.moves.append([])
        return len(self.eps) - 1

    def build(self, r: Regex) -> tuple[int, int]:
        s, t = self.new(), self.new()
        if isinstance(r, Empty):
            pass
        elif isinstance(r, Epsilon):
            self.eps[s].append(t)
        elif isinstance(r, Sym):
            self.moves[s].append((r.atom, t))
        elif isinstance(r, Concat):
            cur = s
            for p in r.parts:
                a, b = self.build(p)
                self.eps[cur].append(a)
                cur = b
            self.eps[cur].append(t)
        elif isinstance(r, Union):
            for p in r.parts:
                a, b = self.build(p)
                self.eps[s].append(a)
                self.eps[b].append(t)
        elif isinstance(r, Star):
            a, b = self.build(r.inner)
            self.eps[s] += [a, t]
            self.eps[b] += [a, t]
        else:
            raise ValueError("ω-expressions need omega_compile")
        return s, t

    def closure(self, states: Iterable[int]) -> frozenset:
        seen = set(states)
        stack = list(seen)
        while stack:
            for n in self.eps[stack.pop()]:
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        return frozenset(seen)


class _Classes:
    """Token classification shared by DFAs and Muller automata."""

    def __init__(self, classes: tuple, atom_list: Sequence, declared: bool):
        self.classes = classes
        self.declared = declared
        self.index = {}
        self.patterns = []
        for i, c in enumerate(classes):
            if c is OTHER:
                continue
            if is_pattern(c):
                self.patterns.append((c, i))
            else:
                self.index[c] = i
        self.other = classes.index(OTHER) if OTHER in classes else None

    def classify(self, token) -> int | None:
        i = self.index.get(token)
        if i is not None:
            return i
        for p, j in self.patterns:
            if p.matches(token):
                return j
        return self.other

    def __eq__(self, other) -> bool:
        return isinstance(other, _Classes) and self.classes == other.classes

    def __hash__(self) -> int:
        return hash(self.classes)


def _check_disjoint(atom_list: Sequence) -> None:
    for a, b in combinations(atom_list, 2):
        if atoms_overlap(a, b):
            raise ValueError(f"atoms {_atom_text(a)} and {_atom_text(b)} overlap: "
                             "not in implemented fragment (atoms must be disjoint)")


def _make_classes(atom_list: Sequence, alphabet: Iterable | None) -> _Classes:
    if alphabet is not None:
        alpha = tuple(alphabet)
        for a in atom_list:
            if not is_pattern(a) and a not in set(alpha):
                raise ValueError(f"token {_atom_text(a)} is not in the declared alphabet")
        return _Classes(alpha, atom_list, True)
    _check_disjoint(atom_list)
    return _Classes(tuple(atom_list) + (OTHER,), atom_list, False)


def _class_moves(cls: _Classes, atom_list: Sequence) -> list[list]:
    """For every class, the atoms an NFA may read on it."""
    out = []
    for c in cls.classes:
        if c is OTHER:
            out.append([])
        elif cls.declared:
            out.append([a for a in atom_list if atom_matches(a, c)])
        else:
            out.append([c])
    return out


@dataclass(frozen=True, eq=False)
class Dfa:
    """Complete DFA over token classes; state 0 need not be the start."""

    classes: _Classes
    delta: tuple[tuple[int, ...], ...]
    start: int
    accepting: frozenset

    @property
    def alphabet(self) -> tuple:
        return self.classes.classes

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def step(self, state: int, token) -> int:
        c = self.classes.classify(token)
        if c is None:
            return self.sink
        return self.delta[state][c]

    @property
    def sink(self) -> int:
        # the dead state, created on demand by the subset construction
        for q, row in enumerate(self.delta):
            if q not in self.accepting and all(t == q for t in row):
                return q
        raise ValueError("DFA has no dead state")

    def run(self, tokens: Iterable, state: int | None = None) -> int:
        q = self.start if state is None else state
        for t in tokens:
            q = self.step(q, t)
        return q

    def accepts(self, tokens: Iterable) -> bool:
        return self.run(tokens) in self.accepting

    def complement(self) -> "Dfa":
        return Dfa(self.classes, self.delta, self.start,
                   frozenset(range(self.n_states)) - self.accepting)

    def live(self) -> frozenset:
        """States from which an accepting state is reachable."""
        rev: list[set] = [set() for _ in self.delta]
        for q, row in enumerate(self.delta):
            for t in row:
                rev[t].add(q)
        seen = set(self.accepting)
        stack = list(seen)
        while stack:
            for p in rev[stack.pop()]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)


def _subset(nfa: _NFA, start: int, final: int, cls: _Classes, moves: list[list]) -> Dfa:
    s0 = nfa.closure([start])
    index = {s0: 0}
    order = [s0]
    delta: list[list[int]] = []
    k = 0
    while k < len(order):
        cur = order[k]
        row = []
        for atoms_on in moves:
            nxt = set()
            for q in cur:
                for atom, t in nfa.moves[q]:
                    if atom in atoms_on:
                        nxt.add(t)
            key = nfa.closure(nxt)
            if key not in index:
                index[key] = len(order)
                order.append(key)
            row.append(index[key])
        delta.append(row)
        k += 1
    # make sure a dead state exists so unknown tokens have somewhere to go
    dead = frozenset()
    if dead not in index:
        index[dead] = len(order)
        order.append(dead)
        delta.append([index[dead]] * len(moves))
    acc = frozenset(i for i, s in enumerate(order) if final in s)
    return Dfa(cls, tuple(map(tuple, delta)), 0, acc)


def compile(r: Regex, alphabet: Iterable | None = None) -> Dfa:  # noqa: A001
    """DFA for a regex without ``^ω``.

    With ``alphabet`` the DFA runs over exactly those tokens (patterns are
    expanded against them); otherwise over the atoms plus ``OTHER``.
    """
    if has_omega(r):
        raise ValueError("ω-expression given to compile; use omega_compile")
    atom_list = atoms(r)
    cls = _make_classes(atom_list, alphabet)
    return _compile_over(r, cls, atom_list)


def compile_many(regexes: Sequence[Regex], alphabet: Iterable | None = None) -> list[Dfa]:
    """Compile several regexes over one common class alphabet, so their
    DFAs can be combined with :func:`product_empty`."""
    atom_list: list = []
    for r in regexes:
        if has_omega(r):
            raise ValueError("ω-expression given to compile_many")
        atom_list += [a for a in atoms(r) if a not in atom_list]
    cls = _make_classes(atom_list, alphabet)
    return [_compile_over(r, cls, atom_list) for r in regexes]


def _compile_over(r: Regex, cls: _Classes, atom_list: Sequence) -> Dfa:
    nfa = _NFA()
    s, t = nfa.build(r)
    return _subset(nfa, s, t, cls, _class_moves(cls, atom_list))


def product_empty(a: Dfa, b: Dfa) -> tuple[bool, tuple | None]:
    """Is ``L(a) & L(b)`` empty?  Otherwise also return a shortest witness,
    given as a word of classes."""
    if a.classes != b.classes:
        raise ValueError("alphabet mismatch")
    start = (a.start, b.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        p, q = node = queue.popleft()
        if p in a.accepting and q in b.accepting:
            out = []
            while parent[node] is not None:
                node, c = parent[node]
                out.append(a.alphabet[c])
            return False, tuple(reversed(out))
        for c in range(len(a.alphabet)):
            nxt = (a.delta[p][c], b.delta[q][c])
            if nxt not in parent:
                parent[nxt] = (node, c)
                queue.append(nxt)
    return True, None


# ---------------------------------------------------------------------------
# Muller automata


@dataclass(frozen=True)
class MeetsFamily:
    """``F = {S : S meets acc}``: Büchi acceptance as a Muller family."""

    acc: frozenset

    def __contains__(self, states) -> bool:
        return bool(self.acc & frozenset(states))


@dataclass(frozen=True)
class ExplicitFamily:
    sets: frozenset  # of frozensets

    def __contains__(self, states) -> bool:
        return frozenset(states) in self.sets


@dataclass(frozen=True, eq=False)
class MullerAutomaton:
    classes: _Classes
    delta: tuple[tuple[int, ...], ...]
    start: int
    family: MeetsFamily | ExplicitFamily
    sink: int | None = None

    @property
    def alphabet(self) -> tuple:
        return self.classes.classes

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def step(self, state: int, token) -> int:
        c = self.classes.classify(token)
        if c is None:
            if self.sink is None:
                raise ValueError(f"token {token!r} outside the automaton alphabet")
            return self.sink
        return self.delta[state][c]


def make_muller(alphabet: Sequence, delta: Sequence[Sequence[int]], start: int,
                family) -> MullerAutomaton:
    """A Muller automaton over an explicit finite alphabet."""
    cls = _Classes(tuple(alphabet), (), True)
    if not isinstance(family, (MeetsFamily, ExplicitFamily)):
        family = ExplicitFamily(frozenset(frozenset(s) for s in family))
    return MullerAutomaton(cls, tuple(map(tuple, delta)), start, family)


@dataclass(frozen=True)
class LassoWord:
    """The ω-word ``prefix . loop^ω``."""

    prefix: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")

    def letter(self, i: int):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.loop[(i - len(self.prefix)) % len(self.loop)]


def lasso_inf_set(A: MullerAutomaton, x: LassoWord) -> frozenset:
    q = A.start
    for t in x.prefix:
        q = A.step(q, t)
    first_seen: dict[int, int] = {}
    starts = []
    while q not in first_seen:
        first_seen[q] = len(starts)
        starts.append(q)
        for t in x.loop:
            q = A.step(q, t)
    inf = set()
    for s in starts[first_seen[q]:]:
        p = s
        for t in x.loop:
            p = A.step(p, t)
            inf.add(p)
    return frozenset(inf)


def muller_accepts_lasso(A: MullerAutomaton, x: LassoWord) -> bool:
    return lasso_inf_set(A, x) in A.family


def _is_prefix_code(d: Dfa) -> bool:
    """No accepted word is a proper prefix of another accepted word."""
    live = d.live()
    for q in d.accepting:
        if any(t in live for t in d.delta[q]):
            return False
    return True


def omega_compile(r: Regex, alphabet: Iterable | None = None) -> MullerAutomaton:
    """Deterministic Muller automaton for ``prefix . body^ω``.

    Implemented fragment: prefix and body are prefix codes and the body
    does not contain the empty word.  Then the decomposition of an accepted
    ω-word is unique and greedy, so a deterministic Büchi automaton suffices:
    run the prefix, then the body repeatedly, flagging each completed body.
    """
    if not isinstance(r, Omega):
        raise ValueError("omega_compile needs an expression of the form prefix body^ω")
    atom_list = atoms(r)
    cls = _make_classes(atom_list, alphabet)
    P = _compile_over(r.prefix, cls, atom_list)
    Bd = _compile_over(r.body, cls, atom_list)
    if Bd.start in Bd.accepting:
        raise ValueError("ω-body contains the empty word: not in implemented fragment")
    if not _is_prefix_code(P) or not _is_prefix_code(Bd):
        raise ValueError("prefix or ω-body is not a prefix code: not in implemented fragment")
    p_live, b_live = P.live(), Bd.live()
    n = len(cls.classes)
    DEAD = ("dead",)

    def norm(state):
        if state == DEAD:
            return state
        mode, q, _ = state
        live = p_live if mode == "P" else b_live
        return state if q in live else DEAD

    start = ("B", Bd.start, False) if P.start in P.accepting else ("P", P.start, False)
    start = norm(start)
    index = {start: 0}
    order = [start]
    delta = []
    k = 0
    while k < len(order):
        st = order[k]
        row = []
        for c in range(n):
            if st == DEAD:
                nxt = DEAD
            elif st[0] == "P":
                q = P.delta[st[1]][c]
                nxt = ("B", Bd.start, False) if q in P.accepting else ("P", q, False)
            else:
                q = Bd.delta[st[1]][c]
                nxt = ("B", Bd.start, True) if q in Bd.accepting else ("B", q, False)
            nxt = norm(nxt)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row.append(index[nxt])
        delta.append(tuple(row))
        k += 1
    if DEAD not in index:
        index[DEAD] = len(order)
        order.append(DEAD)
        delta.append(tuple([index[DEAD]] * n))
    buchi = frozenset(i for i, s in enumerate(order) if s != DEAD and s[2])
    return MullerAutomaton(cls, tuple(delta), 0, MeetsFamily(buchi), sink=index[DEAD])


# ---------------------------------------------------------------------------
# text serialization


def _class_text(c) -> str:
    return "@other" if c is OTHER else _atom_text(c)


def _parse_class(text: str):
    if text == "@other":
        return OTHER
    r = parse_regex(text)
    if not isinstance(r, Sym):
        raise ValueError(f"not a single token: {text!r}")
    return r.atom


def dfa_to_text(d: Dfa) -> str:
    lines = ["dfa", f"states: {d.n_states}", f"start: {d.start}",
             "accept: " + " ".join(map(str, sorted(d.accepting))),
             "alphabet: " + " ".join(_class_text(c) for c in d.alphabet)]
    for q, row in enumerate(d.delta):
        lines.append(f"{q}: " + " ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def muller_to_text(A: MullerAutomaton) -> str:
    lines = ["muller", f"states: {A.n_states}", f"start: {A.start}"]
    if isinstance(A.family, MeetsFamily):
        lines.append("buchi: " + " ".join(map(str, sorted(A.family.acc))))
    else:
        for s in sorted(sorted(x) for x in A.family.sets):
            lines.append("family: " + " ".join(map(str, s)))
    if A.sink is not None:
        lines.append(f"sink: {A.sink}")
    lines.append("alphabet: " + " ".join(_class_text(c) for c in A.alphabet))
    for q, row in enumerate(A.delta):
        lines.append(f"{q}: " + " ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def automaton_from_text(text: str) -> Dfa | MullerAutomaton:
    """Inverse of :func:`dfa_to_text` / :func:`muller_to_text`.

    The alphabet line lists one token per whitespace-free item.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    kind = lines[0]
    head: dict[str, str] = {}
    rows: dict[int, tuple] = {}
    families = []
    for ln in lines[1:]:
        key, _, rest = ln.partition(":")
        key, rest = key.strip(), rest.strip()
        if key.isdigit():
            rows[int(key)] = tuple(int(v) for v in rest.split())
        elif key == "family":
            families.append(frozenset(int(v) for v in rest.split()))
        else:
            head[key] = rest
    classes = tuple(_parse_class(t) for t in head["alphabet"].split())
    declared = OTHER not in classes
    cls = _Classes(classes, (), declared) if declared else _Classes(classes, classes[:-1], False)
    delta = tuple(rows[q] for q in range(int(head["states"])))
    start = int(head["start"])
    if kind == "dfa":
        acc = frozenset(int(v) for v in head.get("accept", "").split())
        return Dfa(cls, delta, start, acc)
    if kind != "muller":
        raise ValueError(f"unknown automaton kind {kind!r}")
    if "buchi" in head:
        fam = MeetsFamily(frozenset(int(v) for v in head["buchi"].split()))
    else:
        fam = ExplicitFamily(frozenset(families))
    sink = int(head["sink"]) if "sink" in head else None
    return MullerAutomaton(cls, delta, start, fam, sink)


__all__ = [
    "Concat",
    "Dfa",
    "Empty",
    "Epsilon",
    "ExplicitFamily",
    "LabelPattern",
    "LassoWord",
    "LetterPattern",
    "MeetsFamily",
    "MullerAutomaton",
    "OTHER",
    "Omega",
    "Regex",
    "RegexSyntaxError",
    "Star",
    "Sym",
    "Union",
    "atoms",
    "automaton_from_text",
    "compile",
    "compile_many",
    "concat",
    "dfa_to_text",
    "lasso_inf_set",
    "make_muller",
    "muller_accepts_lasso",
    "muller_to_text",
    "omega",
    "omega_compile",
    "parse_regex",
    "product_empty",
    "star",
    "sym",
    "to_text",
    "union",
    "word",
]
