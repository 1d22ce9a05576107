import random

import pytest
from hypothesis import given, strategies as st

from chaotrace import samples
from chaotrace.ca_core import iterate, make_config, step, uniform
from chaotrace.embed import (
    LEFT,
    RIGHT,
    CellLetter,
    CodedConfig,
    SCell,
    build_alphabets,
    encode_tm_input,
    fm_map,
    g_inverse,
    g_map,
    g_step,
    h_map,
    h_power,
    h_step,
    is_border,
    reverse_mark,
    segments,
)
from chaotrace.literals import parse_config
from chaotrace.rtm import make_machine
from conftest import configs, r_configs
from oracles import fm_window, scan_borders


def test_alphabet_sizes():
    M = make_machine(["q0", "q1", "qf"], ["B", "1"], "q0", "qf", "B", [])
    alph = build_alphabets(M)
    assert (len(alph.S), len(alph.R)) == (16, 64)
    assert len(build_alphabets(samples.REDUCED).R) == 24


def test_border_rule():
    for a in (LEFT, RIGHT, "q", "~q"):
        for b in (LEFT, RIGHT, "q", "~q"):
            assert is_border(a, b) == (a != LEFT and b != RIGHT)


def test_marked_borders():
    # ... > > | < < q > > | < < ...
    x = parse_config("left=[B,>] center=[B,<][B,<][B,q][B,>][B,>] right=[B,<]")
    assert segments(x).borders == (-1, 4)
    seg = segments(x).segments[1]
    assert (seg.start, seg.stop, seg.head) == (0, 5, (2, "q", False))


def test_uniform_right_is_one_segment():
    d = segments(uniform(SCell("B", RIGHT)))
    assert d.borders == () and d.left_tail == () and d.right_tail == ()
    assert len(d.segments) == 1 and d.segments[0].head is None


def test_borders_against_scan():
    rng = random.Random(11)
    ctrls = [LEFT, RIGHT, "q", "~q"]
    for _ in range(500):
        word = [rng.choice(ctrls) for _ in range(12)]
        # cell -1 is a head: a border always follows it unless word[0] is '>'
        x = make_config([SCell("B", "q")], [SCell("B", c) for c in word], [SCell("B", "q")])
        d = segments(x)
        start = 0
        while start < 12 and not d.has_border(start - 1):
            start += 1
        found = {start + j for j in scan_borders(word[start:])}
        assert found == {i for i in range(start, 11) if d.has_border(i)}, word


# f_M ------------------------------------------------------------------------


def _random_s_word(rng, alph, n):
    return [rng.choice(alph.S) for _ in range(n)]


@pytest.mark.parametrize("name", ["halt", "reduced"])
def test_fm_against_segment_rules(name, halt, reduced):
    M = halt.machine if name == "halt" else reduced
    alph = build_alphabets(M)
    f = fm_map(M)
    rng = random.Random(7)
    for _ in range(400):
        word = _random_s_word(rng, alph, 14)
        got = f.apply_word(word)
        want = fm_window(M, word)
        # the oracle leaves out head moves from cells outside the window
        assert got[1:-1] == want[1:-1], word


def test_fm_rewrite_example():
    M = make_machine(["q", "r"], ["a", "b"], "q", "r", "a", [("q", "a", "b", "r")])
    f = fm_map(M)
    out = f.apply_word([SCell("a", LEFT), SCell("a", "q"), SCell("a", RIGHT)])
    assert out == [SCell("b", "r")]


def test_fm_move_blocked_by_border_tags():
    M = make_machine(["q", "r"], ["a"], "q", "r", "a", [("q", "/", "+", "r")])
    f = fm_map(M)
    # the head is the rightmost cell of its segment
    out = f.apply_word([SCell("a", LEFT), SCell("a", "q"), SCell("a", LEFT)])
    assert out == [SCell("a", "~q")]
    out = f.apply_word([SCell("a", LEFT), SCell("a", "q"), SCell("a", RIGHT), SCell("a", RIGHT)])
    assert out == [SCell("a", LEFT), SCell("a", "r")]


def test_reverse_mark_head_free_identity():
    x = make_config([SCell("B", LEFT)], [SCell("B", RIGHT)] * 3, [SCell("B", LEFT)])
    assert reverse_mark(x) == x


@given(r_configs(samples.REDUCED))
def test_reverse_mark_involution(x):
    assert reverse_mark(reverse_mark(x)) == x


def _s_configs(M):
    return configs(build_alphabets(M).S, max_center=10, max_period=2)


@given(_s_configs(samples.REDUCED))
def test_conjugacy_reduced(x):
    f = fm_map(samples.REDUCED)
    assert reverse_mark(step(f, reverse_mark(x))) == step(f.inverse, x)
    assert step(f.inverse, step(f, x)) == x


def test_conjugacy_halt_windows(halt):
    M = halt.machine
    f = fm_map(M)
    alph = build_alphabets(M)
    rng = random.Random(2)
    for _ in range(300):
        x = make_config([rng.choice(alph.S)], _random_s_word(rng, alph, 10),
                        [rng.choice(alph.S)])
        assert reverse_mark(step(f, reverse_mark(x))) == step(f.inverse, x)


# g and h --------------------------------------------------------------------


def test_particle_moves_inside_segment():
    M = samples.REDUCED
    x = parse_config("left=[B,>,.] center=[B,<,.][B,<,R][B,<,.][B,>,.][B,>,.][B,>,.] right=[B,<,.]")
    y = g_step(M, x)
    assert [c.particle for c in y.window(0, 5)] == list("..R...")


def test_particle_bounces_at_border():
    M = samples.REDUCED
    x = parse_config("left=[B,>,.] center=[B,<,.][B,<,.][B,<,.][B,>,.][B,>,.][B,>,R] right=[B,<,.]")
    y = g_step(M, x)
    assert y.cell(5) == CellLetter("B", RIGHT, "L")
    assert all(c.particle == "." for c in y.window(-3, 4))


def test_entering_final_emits_particle():
    M = samples.REDUCED
    x = parse_config("left=[B,>,.] center=[B,<,.][B,q0,.][B,>,.][B,>,.] right=[B,<,.]")
    y = g_step(M, x)
    assert y.cell(2) == CellLetter("B", "qf", "R")


@given(r_configs(samples.REDUCED))
def test_g_round_trip_reduced(x):
    M = samples.REDUCED
    assert g_inverse(M, g_step(M, x)) == x
    assert g_step(M, g_inverse(M, x)) == x


def test_g_round_trip_halt(halt):
    M = halt.machine
    R = build_alphabets(M).R
    rng = random.Random(4)
    for _ in range(200):
        x = make_config([rng.choice(R)], [rng.choice(R) for _ in range(rng.randint(0, 20))],
                        [rng.choice(R)], rng.randint(-5, 5))
        assert g_inverse(M, g_step(M, x)) == x


@given(r_configs(samples.REDUCED), st.integers(-6, 6))
def test_g_commutes_with_shift(x, k):
    M = samples.REDUCED
    assert g_step(M, x.shifted(k)) == g_step(M, x).shifted(k)


@given(r_configs(samples.REDUCED))
def test_borders_static_under_g(x):
    y = g_step(samples.REDUCED, x)
    sx, sy = segments(x), segments(y)
    lo, hi = min(x.offset, y.offset) - 5, max(x.end, y.end) + 5
    assert all(sx.has_border(i) == sy.has_border(i) for i in range(lo, hi))


@given(r_configs(samples.REDUCED))
def test_s_track_follows_fm(x):
    M = samples.REDUCED
    s = lambda c: c.map_letters(lambda a: SCell(a[0], a[1]))
    assert s(g_step(M, x)) == step(fm_map(M), s(x))


def test_segments_evolve_independently(halt):
    # changing one segment leaves the other segments' evolution untouched
    M = halt.machine
    a = parse_config("left=[B,>,.] center=[B,<,.][B,q0.0,.][B,>,.][B,>,.] right=[B,>,.]")
    b = parse_config("left=[B,>,.] center=[B,<,.][B,<,.][B,>,.][B,>,.] right=[B,>,.]")
    # two copies side by side, borders at -1 and 3
    wall = list(a.window(0, 3))
    x1 = make_config(a.left, wall + wall, a.right)
    x2 = make_config(a.left, wall + list(b.window(0, 3)), a.right)
    y1, y2 = iterate(g_map(M), x1, 12), iterate(g_map(M), x2, 12)
    assert y1.window(0, 3) == y2.window(0, 3)


def test_h_fixes_background():
    bg = uniform(CellLetter("B", RIGHT))
    for M in (samples.REDUCED, samples.SAMPLE_HALT):
        assert h_step(M, bg) == bg


def test_h_is_shifted_g_squared(halt):
    M = halt.machine
    x = encode_tm_input(M, "01", 3)
    assert h_step(M, x) == g_step(M, g_step(M, x)).shifted(1)


def test_h_power_round_trip(halt):
    M = halt.machine
    rng = random.Random(9)
    for n in range(0, 17, 4):
        x = encode_tm_input(M, "".join(rng.choice("01") for _ in range(2)), 3)
        assert h_power(M, h_power(M, x, -n), n) == x
        assert h_power(M, x, n) == iterate(h_map(M), x, n)


def test_coded_runner_matches_generic(halt):
    M = halt.machine
    x = encode_tm_input(M, "101", 4)
    c = CodedConfig.from_config(M, x)
    assert c.g(7).to_config() == iterate(g_map(M), x, 7)
    assert c.g(-5).to_config() == iterate(g_map(M), x, -5)


def test_encode_example():
    M = samples.SAMPLE_HALT
    x = encode_tm_input(M, "", 1)
    assert x.left == x.right == (CellLetter("B", RIGHT),)
    assert x.center == (CellLetter("B", "q0"),) and x.offset == 0
    y = encode_tm_input(M, "01", 3)
    assert y.window(-3, 4) == (
        CellLetter("B", RIGHT), CellLetter("B", LEFT), CellLetter("B", LEFT),
        CellLetter("B", "q0"), CellLetter("0", RIGHT), CellLetter("1", RIGHT),
        CellLetter("B", RIGHT), CellLetter("B", RIGHT))


def test_encode_errors():
    M = samples.SAMPLE_HALT
    with pytest.raises(ValueError):
        encode_tm_input(M, "011", 2)
    with pytest.raises(ValueError):
        encode_tm_input(M, "2", 3)
