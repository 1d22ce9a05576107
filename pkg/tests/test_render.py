import pytest

from chaotrace.ca_core import uniform
from chaotrace.embed import RIGHT, CellLetter, encode_tm_input, h_power
from chaotrace.render import (
    RenderSpec,
    dump_from_ascii,
    dump_from_svg,
    dump_rows,
    render,
    render_ascii,
    spacetime,
)
from chaotrace.trace import witness_from_halting

BG = CellLetter("B", RIGHT, ".")


def test_uniform_field(halt):
    spec = RenderSpec(-3, 3, 0, 5)
    rows = spacetime(halt, uniform(BG), spec)
    assert len({tuple(r) for r in rows.values()}) == 1
    body = render_ascii(halt, uniform(BG), spec).splitlines()[2:8]
    assert len({line[3:] for line in body}) == 1


def test_time_runs_upwards(halt):
    text = render_ascii(halt, uniform(BG), RenderSpec(0, 1, 0, 3))
    times = [int(l.split()[0]) for l in text.splitlines()[2:6]]
    assert times == [3, 2, 1, 0]


def test_formats_agree(halt):
    x = encode_tm_input(halt.machine, "01", 3)
    for ca in ("g", "h"):
        spec = RenderSpec(-4, 8, 0, 20, ca=ca)
        rows = spacetime(halt, x, spec)
        a = dump_from_ascii(halt, render(halt, x, spec))
        s = dump_from_svg(render(halt, x, RenderSpec(-4, 8, 0, 20, format="svg", ca=ca)))
        assert a == s == dump_rows(rows, -4)


def test_layers_filter_svg(halt):
    x = encode_tm_input(halt.machine, "0", 2)
    svg = render(halt, x, RenderSpec(0, 3, 0, 2, format="svg", layers=("tape",)))
    assert "data-ctrl" not in svg and "data-tape" in svg


def test_right_moving_diagonal_after_halting(halt):
    # g run from the encoded input: the final state emits an R particle
    x = encode_tm_input(halt.machine, "", 23)
    rows = spacetime(halt, x, RenderSpec(-2, 30, 0, 60))
    t_halt = 48
    assert not any(c.particle != "." for t in range(t_halt) for c in rows[t])
    emitted = [i for i, c in enumerate(rows[t_halt], -2) if c.particle == "R"]
    assert len(emitted) == 1
    p = emitted[0]
    for k in range(1, 8):
        assert rows[t_halt + k][p + k + 2].particle == "R"


def test_witness_renders(halt):
    wit = witness_from_halting(halt, "", 1000)
    text = render(halt, wit.y, RenderSpec(-3, 3, 0, wit.T - 1, ca="h"))
    assert "/" in text


def test_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec(3, 1, 0, 1)
    with pytest.raises(ValueError):
        RenderSpec(0, 1, 5, 1)
    with pytest.raises(ValueError):
        RenderSpec(0, 1, 0, 1, format="png")
    with pytest.raises(ValueError):
        RenderSpec(0, 1, 0, 1, layers=("colour",))
