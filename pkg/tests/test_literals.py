import pytest
from hypothesis import given

from chaotrace import samples
from chaotrace.embed import CellLetter, SCell
from chaotrace.files import bundle_text, load_machine, parse_bundle, parse_query
from chaotrace.literals import (
    format_config,
    format_letter,
    format_word,
    parse_config,
    parse_letter,
    parse_word,
)
from chaotrace.normalize import normalize
from conftest import r_configs


def test_letters():
    assert parse_letter("[a,~q,LR]") == CellLetter("a", "~q", "LR")
    assert parse_letter("[B,>]") == SCell("B", ">")
    assert parse_letter("x") == "x" and parse_letter("[ab]") == "ab"
    assert format_letter(CellLetter("B", ">", ".")) == "[B,>,.]"


def test_words():
    w = parse_word("a[B,<,R][xy]b")
    assert w == ("a", CellLetter("B", "<", "R"), "xy", "b")
    assert parse_word(format_word(w)) == w


def test_config_errors():
    for bad in ["left=a", "left=a right=", "left=a right=b offset=x", "left=a right=b foo=1",
                "left=a left=b right=c", "center=a"]:
        with pytest.raises(ValueError):
            parse_config(bad)


@given(r_configs(samples.REDUCED))
def test_config_round_trip(x):
    assert parse_config(format_config(x)) == x


def test_bundle_round_trip(tmp_path):
    for M in (normalize(samples.SAMPLE_HALT), normalize(samples.SAMPLE_LOOP, sweep=False),
              samples.REDUCED):
        text = bundle_text(M)
        assert bundle_text(parse_bundle(text)) == text
        p = tmp_path / "m.bundle"
        p.write_text(text)
        assert bundle_text(load_machine(str(p))) == text


def test_bundle_size_mismatch():
    text = bundle_text(samples.REDUCED).replace("R: 24", "R: 25")
    with pytest.raises(ValueError):
        parse_bundle(text)


def test_query_parsing():
    q = parse_query("; U(0)\nmachine: sample:halt\nradius: 1\nlanguage: uw 0\n")
    assert (q.machine, q.kind, q.radius, q.language) == ("sample:halt", "finite", 1, ("uw", "0"))
    q = parse_query("radius: 1\nhorizon: 9\n---\n<[B,>,.][B,>,.][B,>,.]>^ω\n")
    assert q.kind == "infinite" and q.horizon == 9 and q.body is not None


def test_query_errors():
    for bad in ["language: uw 0\n", "radius: x\nlanguage: uw 0\n", "radius: 1\n",
                "radius: 1\nlanguage: uw 0\n---\na\n", "radius: 1\ncolour: red\nlanguage: uw\n",
                "radius: 1\nlanguage: zz 0\n"]:
        with pytest.raises(ValueError):
            parse_query(bad)
