"""Eventually periodic configurations and block maps acting on them.

A :class:`Configuration` is a bi-infinite word ``...LLL C RRR...`` given by
a left period ``L`` repeated to minus infinity, a finite center ``C``
starting at ``offset`` and a right period ``R`` repeated to plus infinity.
Block maps send such words to words of the same kind, so every operation
here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Callable, Hashable, Iterable, Sequence

Letter = Hashable
Word = tuple


def primitive_root(word: Sequence[Letter]) -> tuple:
    """Shortest ``p`` with ``word == p * k`` (prefix-function period test)."""
    n = len(word)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1] if n else 0
    if p and n % p == 0:
        return tuple(word[:p])
    return tuple(word)


def _rotl(word: tuple, k: int = 1) -> tuple:
    k %= len(word)
    return word[k:] + word[:k]


def _canonical(left: tuple, center: tuple, right: tuple, offset: int):
    left, right = primitive_root(left), primitive_root(right)
    # absorb center letters continuing the periodic rays
    i, j = 0, len(center)
    while i < j and center[i] == left[i % len(left)]:
        i += 1
    left = _rotl(left, i)
    offset += i
    while j > i and center[j - 1] == right[(j - 1 - len(center)) % len(right)]:
        j -= 1
    right = _rotl(right, j - len(center))
    center = center[i:j]
    if not center:
        # extend the left ray as far as it goes; fully periodic words are
        # anchored at offset 0
        steps = 0
        limit = len(left) + len(right)
        while left != right and right[0] == left[0] and steps <= limit:
            left, right = _rotl(left), _rotl(right)
            offset += 1
            steps += 1
        if left == right:
            left = right = _rotl(left, -offset)
            offset = 0
    return left, center, right, offset


@dataclass(frozen=True)
class Configuration:
    """Canonical eventually periodic configuration; build with :func:`make_config`."""

    left: tuple
    center: tuple
    right: tuple
    offset: int

    @property
    def end(self) -> int:
        return self.offset + len(self.center)

    def cell(self, i: int) -> Letter:
        if i < self.offset:
            return self.left[(i - self.offset) % len(self.left)]
        if i >= self.end:
            return self.right[(i - self.end) % len(self.right)]
        return self.center[i - self.offset]

    def __getitem__(self, i: int) -> Letter:
        return self.cell(i)

    def window(self, lo: int, hi: int) -> tuple:
        return window(self, lo, hi)

    def shifted(self, k: int) -> "Configuration":
        """``sigma^k``: the result has ``cell(i) == self.cell(i + k)``."""
        return make_config(self.left, self.center, self.right, self.offset - k)

    def letters(self) -> set:
        return set(self.left) | set(self.center) | set(self.right)

    @property
    def is_periodic(self) -> bool:
        return not self.center and self.left == self.right

    def map_letters(self, fn: Callable[[Letter], Letter]) -> "Configuration":
        return make_config(tuple(map(fn, self.left)), tuple(map(fn, self.center)),
                           tuple(map(fn, self.right)), self.offset)


def make_config(left: Iterable[Letter], center: Iterable[Letter], right: Iterable[Letter],
                offset: int = 0, alphabet: Iterable[Letter] | None = None) -> Configuration:
    left, center, right = tuple(left), tuple(center), tuple(right)
    if not left or not right:
        raise ValueError("periods must be nonempty")
    if alphabet is not None:
        alpha = alphabet if isinstance(alphabet, (set, frozenset)) else set(alphabet)
        stray = [a for a in left + center + right if a not in alpha]
        if stray:
            raise ValueError(f"letters outside the alphabet: {stray[:3]!r}")
    return Configuration(*_canonical(left, center, right, offset))


def uniform(letter: Letter) -> Configuration:
    return make_config((letter,), (), (letter,), 0)


def periodic(word: Sequence[Letter], offset: int = 0) -> Configuration:
    """The spatially periodic configuration with ``cell(offset + i) == word[i % len]``."""
    word = tuple(word)
    return make_config(word, (), word, offset)


def embed_word(word: Sequence[Letter], background: Letter, offset: int = 0) -> Configuration:
    return make_config((background,), tuple(word), (background,), offset)


def window(x: Configuration, lo: int, hi: int) -> tuple:
    if lo > hi:
        raise ValueError("window needs lo <= hi")
    return tuple(x.cell(i) for i in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# block maps


@dataclass(eq=False)
class BlockMapSpec:
    """A cellular automaton ``f(x)_n = rule(x[n - memory .. n + anticipation])``.

    ``batch`` optionally maps a word of length ``L`` to the ``L - memory -
    anticipation`` image letters in one call; it must agree with ``rule``.
    """

    alphabet: frozenset | None
    memory: int
    anticipation: int
    rule: Callable[[tuple], Letter] | None = None
    batch: Callable[[Sequence[Letter]], Sequence[Letter]] | None = None
    inverse: "BlockMapSpec | None" = field(default=None, repr=False)
    name: str = "f"

    def __post_init__(self):
        if self.memory < 0 or self.anticipation < 0:
            raise ValueError("memory and anticipation must be nonnegative")
        if self.rule is None and self.batch is None:
            raise ValueError("need a local rule or a batch evaluator")

    @property
    def width(self) -> int:
        return self.memory + self.anticipation + 1

    def apply_word(self, word: Sequence[Letter]) -> list:
        """Image letters for positions ``memory .. len(word) - anticipation - 1``."""
        if self.batch is not None:
            return list(self.batch(word))
        word = tuple(word)
        k = self.width
        return [self.rule(word[i:i + k]) for i in range(len(word) - k + 1)]

    def local(self, neighborhood: Sequence[Letter]) -> Letter:
        if len(neighborhood) != self.width:
            raise ValueError("neighborhood has the wrong length")
        if self.rule is not None:
            return self.rule(tuple(neighborhood))
        return self.apply_word(neighborhood)[0]

    def __call__(self, x: Configuration) -> Configuration:
        return step(self, x)


def pair_inverses(f: BlockMapSpec, g: BlockMapSpec) -> tuple[BlockMapSpec, BlockMapSpec]:
    """Attach ``g`` as the inverse of ``f`` and vice versa."""
    f.inverse, g.inverse = g, f
    return f, g


def identity_map(alphabet: Iterable[Letter] | None = None) -> BlockMapSpec:
    alpha = None if alphabet is None else frozenset(alphabet)
    f = BlockMapSpec(alpha, 0, 0, rule=lambda w: w[0], batch=lambda w: w, name="id")
    f.inverse = f
    return f


def shift_map(alphabet: Iterable[Letter] | None = None, k: int = 1) -> BlockMapSpec:
    """``sigma^k`` (left shift for ``k > 0``) with its inverse attached."""
    alpha = None if alphabet is None else frozenset(alphabet)

    def make(j: int) -> BlockMapSpec:
        if j >= 0:
            return BlockMapSpec(alpha, 0, j, rule=lambda w: w[-1],
                                batch=lambda w, j=j: w[j:], name=f"shift{j}")
        return BlockMapSpec(alpha, -j, 0, rule=lambda w: w[0],
                            batch=lambda w, j=j: w[: len(w) + j], name=f"shift{j}")

    return pair_inverses(make(k), make(-k))[0]


def _check_alphabet(f: BlockMapSpec, x: Configuration) -> None:
    if f.alphabet is None:
        return
    stray = x.letters() - f.alphabet
    if stray:
        raise ValueError(f"configuration letters outside the alphabet of {f.name}: "
                         f"{sorted(map(repr, stray))[:3]}")


def step(f: BlockMapSpec, x: Configuration, check: bool = True) -> Configuration:
    """Exact image ``f(x)``; the backgrounds are mapped period by period."""
    if check:
        _check_alphabet(f, x)
    m, a = f.memory, f.anticipation
    pl, pr = len(x.left), len(x.right)
    lo = x.offset - a - pl
    hi = x.end + m + pr  # exclusive
    word = [x.cell(i) for i in range(lo - m, hi + a)]
    image = f.apply_word(word)
    left = tuple(image[:pl])
    right = tuple(image[len(image) - pr:])
    center = tuple(image[pl:len(image) - pr])
    return make_config(left, center, right, x.offset - a)


def step_inverse(f: BlockMapSpec, x: Configuration, check: bool = True) -> Configuration:
    if f.inverse is None:
        raise ValueError(f"{f.name} has no attached inverse")
    return step(f.inverse, x, check)


def iterate(f: BlockMapSpec, x: Configuration, t: int) -> Configuration:
    if t < 0:
        if f.inverse is None:
            raise ValueError(f"{f.name} has no attached inverse")
        f, t = f.inverse, -t
    _check_alphabet(f, x)
    for _ in range(t):
        x = step(f, x, check=False)
    return x


def orbit(f: BlockMapSpec, x: Configuration, t: int) -> list[Configuration]:
    """``[x, f(x), ..., f^t(x)]``."""
    out = [x]
    for _ in range(t):
        out.append(step(f, out[-1], check=False))
    return out


def compose(f: BlockMapSpec, g: BlockMapSpec) -> BlockMapSpec:
    """``f o g`` evaluated lazily by chaining; inverses compose in reverse."""
    if f.alphabet is not None and g.alphabet is not None and f.alphabet != g.alphabet:
        raise ValueError("cannot compose block maps over different alphabets")
    alpha = f.alphabet if f.alphabet is not None else g.alphabet

    def batch(word: Sequence[Letter]) -> list:
        return f.apply_word(g.apply_word(word))

    h = BlockMapSpec(alpha, f.memory + g.memory, f.anticipation + g.anticipation,
                     batch=batch, name=f"{f.name}.{g.name}")
    if f.inverse is not None and g.inverse is not None:
        inv_alpha = alpha

        def inv_batch(word: Sequence[Letter]) -> list:
            return g.inverse.apply_word(f.inverse.apply_word(word))

        hinv = BlockMapSpec(inv_alpha, f.inverse.memory + g.inverse.memory,
                            f.inverse.anticipation + g.inverse.anticipation,
                            batch=inv_batch, name=f"({h.name})^-1")
        pair_inverses(h, hinv)
    return h


def power(f: BlockMapSpec, n: int) -> BlockMapSpec:
    if n < 0:
        if f.inverse is None:
            raise ValueError(f"{f.name} has no attached inverse")
        return power(f.inverse, -n)
    if n == 0:
        return identity_map(f.alphabet)
    out = f
    for _ in range(n - 1):
        out = compose(out, f)
    return out


def image_period(f: BlockMapSpec, period: Sequence[Letter]) -> tuple:
    """Image of the spatially periodic word ``period^Z`` (one period, aligned)."""
    p = len(period)
    m, a = f.memory, f.anticipation
    word = [period[(i - m) % p] for i in range(p + m + a)]
    return tuple(f.apply_word(word))


def agree_on(x: Configuration, y: Configuration, cells: Iterable[int]) -> bool:
    return all(x.cell(i) == y.cell(i) for i in cells)


def span(x: Configuration, y: Configuration | None = None) -> tuple[int, int]:
    """A cell range covering every center cell plus one period on each side."""
    lo = x.offset - len(x.left)
    hi = x.end + len(x.right)
    if y is not None:
        lo2, hi2 = span(y)
        lo, hi = min(lo, lo2), max(hi, hi2)
    return lo, hi


def background_lcm(x: Configuration) -> int:
    return lcm(len(x.left), len(x.right))

