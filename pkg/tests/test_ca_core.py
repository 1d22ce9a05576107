import random

import pytest
from hypothesis import given, strategies as st

from chaotrace.ca_core import (
    BlockMapSpec,
    compose,
    identity_map,
    iterate,
    make_config,
    periodic,
    shift_map,
    step,
    step_inverse,
    uniform,
    window,
)
from conftest import configs

AB = "AB"
ABCD = "ABCD"


def xor_map():
    return BlockMapSpec(frozenset("01"), 0, 1, rule=lambda w: str(int(w[0]) ^ int(w[1])))


def rotate_map():
    """A reversible map over ABCD: a letter permutation composed with a shift."""
    perm = dict(zip(ABCD, "BCDA"))
    inv = {v: k for k, v in perm.items()}
    f = BlockMapSpec(frozenset(ABCD), 0, 1, rule=lambda w: perm[w[1]])
    g = BlockMapSpec(frozenset(ABCD), 1, 0, rule=lambda w: inv[w[0]])
    f.inverse, g.inverse = g, f
    return f


def test_uniform_from_empty_center():
    x = make_config("A", "", "A", 0)
    assert x == uniform("A")
    assert all(x.cell(i) == "A" for i in range(-5, 6))


def test_center_absorbed_by_background():
    assert make_config("A", "B", "A", 0) == make_config("A", "AB", "A", -1)


def test_periodic_cells():
    x = make_config("AB", "", "AB", 0)
    assert (x.cell(0), x.cell(1), x.cell(-1)) == ("A", "B", "B")


@given(st.lists(st.sampled_from(AB), min_size=1, max_size=4), st.integers(-20, 20))
def test_periodic_cells_modular(word, offset):
    x = periodic(word, offset)
    for i in range(-12, 13):
        assert x.cell(i) == word[(i - offset) % len(word)]


def test_empty_period_rejected():
    with pytest.raises(ValueError):
        make_config("", "A", "A")


def test_mixed_alphabet_rejected():
    with pytest.raises(ValueError):
        make_config("A", "Z", "A", alphabet="AB")


def test_identity_step():
    x = make_config("AB", "BBA", "A", 3)
    assert step(identity_map(), x) == x
    assert step_inverse(identity_map(), x) == x


def test_shift_step():
    x = make_config("AB", "BBAAB", "BA", -2)
    s = shift_map()
    y = step(s, x)
    assert all(y.cell(i) == x.cell(i + 1) for i in range(-15, 15))
    assert step_inverse(s, x) == step(shift_map(k=-1), x)


def test_xor_rule():
    x = make_config("0", "1", "0", 0)
    y = step(xor_map(), x)
    expected = [str(int(x.cell(i)) ^ int(x.cell(i + 1))) for i in range(-10, 10)]
    assert list(window(y, -10, 9)) == expected
    assert y.center == ("1", "1") and y.offset == -1


def test_iterate_basics():
    x = make_config("AB", "BBA", "A", 3)
    s = shift_map()
    assert iterate(s, x, 0) == x
    assert iterate(s, x, 3).cell(0) == x.cell(3)
    with pytest.raises(ValueError):
        iterate(xor_map(), make_config("0", "", "0"), -1)


def test_window_examples():
    assert window(uniform("A"), -2, 2) == tuple("AAAAA")
    assert window(make_config("A", "B", "A", 0), -1, 1) == tuple("ABA")
    with pytest.raises(ValueError):
        window(uniform("A"), 2, 1)


def test_window_matches_cells():
    rng = random.Random(3)
    center = [rng.choice(ABCD) for _ in range(20)]
    x = make_config("AC", center, "DBB", -7)
    assert window(x, -30, 30) == tuple(x.cell(i) for i in range(-30, 31))


def test_compose_examples():
    rng = random.Random(5)
    f = rotate_map()
    idf = compose(identity_map(ABCD), f)
    for _ in range(50):
        w = [rng.choice(ABCD) for _ in range(10)]
        assert idf.apply_word(w) == f.apply_word(w)
    s = compose(shift_map(ABCD), shift_map(ABCD, -1))
    x = make_config("AB", "CDDA", "C", 1)
    assert step(s, x) == x
    g = rotate_map()
    h = compose(shift_map(ABCD), compose(g, g))
    for _ in range(20):
        x = make_config("A", [rng.choice(ABCD) for _ in range(8)], "BC", rng.randint(-5, 5))
        assert step(h, x) == step(shift_map(ABCD), step(g, step(g, x)))
        assert step_inverse(h, step(h, x)) == x


@given(configs(ABCD, max_center=24, max_period=3))
def test_inverse_pair(x):
    f = rotate_map()
    assert step_inverse(f, step(f, x)) == x
    assert step(f, step_inverse(f, x)) == x


@given(configs(ABCD), st.integers(-8, 8))
def test_shift_commutes(x, k):
    f = rotate_map()
    assert step(f, x.shifted(k)) == step(f, x).shifted(k)


@given(configs(AB), st.integers(-5, 5))
def test_redescription_is_invisible(x, pad):
    # pad the center with background letters: same cells, same object
    left = x.left * 3
    y = make_config(x.left, left + x.center, x.right, x.offset - len(left))
    assert y == x
    assert make_config(y.left, y.center, y.right, y.offset) == y


@given(configs(AB), st.integers(0, 4), st.integers(0, 4))
def test_iterate_additive(x, s, t):
    f = rotate_map()
    x = x.map_letters(lambda a: {"A": "A", "B": "C"}[a])
    assert iterate(f, x, s + t) == iterate(f, iterate(f, x, s), t)
