import itertools

import pytest
from hypothesis import assume, given, strategies as st

from chaotrace import samples
from chaotrace.normalize import check_assumptions, normalize, phase_name
from chaotrace.rtm import (
    STUCK,
    Halted,
    Quadruple,
    Running,
    format_machine,
    initial_id,
    make_machine,
    overlap_in_domain,
    overlap_in_range,
    parse_machine,
    run,
    tm_step,
    trace_run,
    validate,
)


def machine(quads, states=("q", "r", "s"), alphabet=("a", "b", "c")):
    return make_machine(states, alphabet, states[0], states[-1], alphabet[0], quads)


def test_singleton_is_deterministic_and_reversible():
    rep = validate(machine([("q", "a", "a", "q")]))
    assert rep.deterministic and rep.reversible


def test_move_overlaps_rewrite_in_domain():
    rep = validate(machine([("q", "a", "b", "r"), ("q", "/", "+", "s")]))
    assert not rep.deterministic


def test_range_overlap():
    rep = validate(machine([("q", "a", "c", "r"), ("s", "b", "c", "r")]))
    assert rep.deterministic and not rep.reversible
    assert rep.range_conflicts == ((Quadruple("q", "a", "c", "r"), Quadruple("s", "b", "c", "r")),)


def _overlap_by_definition(p, q, first, second):
    # quadruples overlap when they share the state and their letter
    # conditions can hold at once; a move has no letter condition
    if getattr(p, first) != getattr(q, first):
        return False
    lp = None if p.is_move else (p.a if first == "src" else p.b)
    lq = None if q.is_move else (q.a if first == "src" else q.b)
    return lp is None or lq is None or lp == lq


quad_st = st.builds(
    lambda s, kind, a, b, d, t: Quadruple(s, "/", d, t) if kind else Quadruple(s, a, b, t),
    st.sampled_from("qrs"), st.booleans(), st.sampled_from("abc"), st.sampled_from("abc"),
    st.sampled_from("+0-"), st.sampled_from("qrs"))


@given(quad_st, quad_st)
def test_overlap_predicates(p, q):
    assert overlap_in_domain(p, q) == _overlap_by_definition(p, q, "src", "src")
    assert overlap_in_range(p, q) == _overlap_by_definition(p, q, "dst", "dst")


def test_rewrite_step():
    M = machine([("q", "a", "b", "r")])
    c = tm_step(M, initial_id(M, []).replace(writes={0: "a"}))
    assert (c.read(0), c.state, c.head) == ("b", "r", 0)


def test_move_step():
    M = machine([("q", "/", "+", "r")])
    c = tm_step(M, initial_id(M, ["b"]))
    assert (c.head, c.state, c.tape) == (1, "r", {1: "b"})


def test_stuck():
    M = machine([("q", "b", "b", "r")])
    assert tm_step(M, initial_id(M, [])) is STUCK


@st.composite
def reversible_machines(draw):
    quads = draw(st.lists(quad_st, max_size=6, unique=True))
    M = machine(quads)
    assume(M.deterministic and M.reversible)
    return M


@given(reversible_machines(), st.lists(st.sampled_from("abc"), max_size=4), st.integers(0, 12))
def test_step_round_trip(M, w, k):
    conf = initial_id(M, w)
    for _ in range(k):
        nxt = tm_step(M, conf)
        if nxt is STUCK:
            break
        assert tm_step(M, nxt, forward=False) == conf
        conf = nxt


def test_empty_machine_halts_immediately():
    M = machine([])
    for w in ["", "a", "bc"]:
        r = run(M, w, 10)
        assert isinstance(r, Halted) and r.steps == 0


def test_sample_halt_language():
    M = samples.SAMPLE_HALT
    for n in range(5):
        for w in itertools.product("01", repeat=n):
            r = run(M, w, 200)
            assert isinstance(r, Halted) == samples.halt_language("".join(w))


def test_sample_halt_times_pinned():
    # regression values, first computed by this simulator
    M = samples.SAMPLE_HALT
    times = {w: run(M, w, 200).steps for w in ["", "0", "11", "101"]}
    assert times == {"": 3, "0": 5, "11": 7, "101": 9}


def test_sample_loop_never_halts():
    r = run(samples.SAMPLE_LOOP, "", 10_000)
    assert isinstance(r, Running) and r.steps == 10_000


def test_trace_run_records_every_step():
    M = samples.SAMPLE_HALT
    tr = trace_run(M, initial_id(M, "0"), 50)
    assert tr.halted
    assert len(tr.states) == len(tr.heads) == len(tr.fired) + 1
    assert tr.states[0] == "q0" and tr.states[-1] == "qf"


def test_text_round_trip():
    for M in (samples.SAMPLE_HALT, samples.SAMPLE_LOOP, samples.REDUCED):
        assert parse_machine(format_machine(M)) == M


def test_parse_rejects_conflict():
    text = "states: q r s\nalphabet: a b c\ninitial: q\nfinal: s\nblank: a\nq a c r\ns b c r\n"
    with pytest.raises(ValueError, match="range overlap"):
        parse_machine(text)
    assert not parse_machine(text, allow_invalid=True).reversible


def test_parse_errors():
    with pytest.raises(ValueError, match="4 fields"):
        parse_machine("states: q\nalphabet: a\ninitial: q\nfinal: q\nblank: a\nq a a\n")
    with pytest.raises(ValueError, match="missing header"):
        parse_machine("states: q\nalphabet: a\n")


# normalization ------------------------------------------------------------


@pytest.fixture(scope="module")
def N():
    return normalize(samples.SAMPLE_HALT)


def test_normalized_is_valid(N):
    assert N.machine.deterministic and N.machine.reversible
    again = normalize(N.machine, sweep=False)
    assert again.machine.deterministic and again.machine.reversible


def test_normalized_sizes(N):
    # six phases per non-final state (8 - 1 original, 5 sweep) plus qf.0
    assert len(N.machine.states) == 6 * 12 + 1
    assert N.machine.final == phase_name("qf", 0)


def words(max_len):
    for n in range(max_len + 1):
        yield from itertools.product("01", repeat=n)


def test_assumptions_hold_after_normalize(N):
    for w in words(4):
        rep = check_assumptions(N.machine, w, 10_000)
        halts = samples.halt_language("".join(w))
        assert bool(rep.move_timing) and bool(rep.quiet_start), (w, rep.lines())
        assert bool(rep.min_steps)
        if halts:
            assert rep.all_pass, (w, rep.lines())
        else:
            assert rep.even_halt.status == "undetermined"


def test_halting_preserved(N):
    for w in words(4):
        a = isinstance(run(samples.SAMPLE_HALT, w, 200), Halted)
        b = isinstance(run(N.machine, w, 10_000), Halted)
        assert a == b


def test_normalized_halting_times_pinned(N):
    times = {w: run(N.machine, w, 10_000).steps for w in ["", "0", "11", "101"]}
    assert times == {"": 48, "0": 84, "11": 120, "101": 156}


def test_step_map_tracks_original_states(N):
    M = samples.SAMPLE_HALT
    for w in ["", "0", "11", "101", "1"]:
        orig = trace_run(M, initial_id(M, w), 30)
        new = trace_run(N.machine, initial_id(N.machine, w), 10_000)
        for s in range(len(orig.states)):
            t = N.step_map(w, s)
            if t >= len(new.states):
                break
            assert new.states[t] == phase_name(orig.states[s], 0)
            assert new.heads[t] == orig.heads[s]


def test_early_move_fails_timing():
    M = make_machine(["q", "f"], ["B"], "q", "f", "B", [("q", "/", "+", "f")])
    rep = check_assumptions(M, "", 10)
    assert rep.move_timing.status == "fail" and rep.move_timing.witness == 0


def test_odd_halting_fails_even_check():
    M = make_machine(["q", "r", "s", "f"], ["B", "x"], "q", "f", "B",
                     [("q", "B", "x", "r"), ("r", "x", "B", "s"), ("s", "B", "x", "f")])
    rep = check_assumptions(M, "", 10)
    assert rep.halted_at == 3
    assert rep.even_halt.status == "fail" and rep.even_halt.witness == 3


def test_normalize_rejects_invalid():
    bad = machine([("q", "a", "c", "r"), ("s", "b", "c", "r")])
    with pytest.raises(ValueError):
        normalize(bad)
