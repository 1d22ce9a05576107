import random

import pytest

from chaotrace import samples
from chaotrace.automata import (
    LabelPattern,
    LassoWord,
    atoms,
    compile,
    muller_accepts_lasso,
    omega_compile,
    parse_regex,
    to_text,
)
from chaotrace.ca_core import identity_map, iterate, make_config, uniform
from chaotrace.embed import RIGHT, CellLetter, build_alphabets, encode_tm_input, h_map, h_power
from chaotrace.normalize import normalize
from chaotrace.rtm import make_machine
from chaotrace.trace import (
    NOT_FOUND,
    WITNESS_FOUND,
    ClopenPartition,
    drift_certificate,
    itinerary,
    lift,
    lw_omega,
    lw_regex,
    middles,
    predict_finite,
    predict_infinite,
    uw_check,
    uw_regex,
    witness_from_halting,
)

BG = CellLetter("B", RIGHT, ".")


def test_empty_itinerary(halt):
    assert itinerary(halt, uniform(BG), 1, 0) == ()


def test_identity_itinerary_is_constant():
    x = make_config("a", "bca", "c", -1)
    labels = itinerary(identity_map(), x, 1, 5)
    assert labels == (x.window(-1, 1),) * 5


def test_itinerary_kernel_matches_recomputation(halt):
    M = halt.machine
    R = build_alphabets(M).R
    rng = random.Random(8)
    for _ in range(200):
        x = make_config([BG], [rng.choice(R) for _ in range(rng.randint(1, 6))], [BG],
                        rng.randint(-4, 2))
        T = rng.randint(1, 6)
        fast = itinerary(M, x, 1, T)
        assert fast == itinerary(h_map(M), x, 1, T)
        assert fast == tuple(h_power(M, x, t).window(-1, 1) for t in range(T))


def test_itinerary_locality(halt):
    # labels depend only on the dependency cone of the window
    M = halt.machine
    x = encode_tm_input(M, "01", 3)
    far = make_config(x.left, list(x.window(-3, 4)) + [BG] * 20 + [CellLetter("1", RIGHT)],
                      x.right, -3)
    assert itinerary(M, x, 1, 3) == itinerary(M, far, 1, 3)


def test_clopen_partition_label(halt):
    C = ClopenPartition(2)
    x = encode_tm_input(halt.machine, "0", 2)
    assert C.width == 5 and C.label(x) == x.window(-2, 2)


def test_lw_regex_shape(halt):
    text = to_text(lw_regex(halt, "01"))
    assert text == "[B,>,.][B,<,.]*[B,sw_start.0,.][0,>,.][1,>,.][B,>,.]*[B,>,R]"
    assert to_text(lw_regex(halt, "")) == "[B,>,.][B,<,.]*[B,sw_start.0,.][B,>,.]*[B,>,R]"
    assert parse_regex(text) == lw_regex(halt, "01")


def test_lw_regex_rejects_foreign_letter(halt):
    with pytest.raises(ValueError):
        lw_regex(halt, "2")


def test_lw_regex_accepts_witness_middles(halt):
    wit = witness_from_halting(halt, "0", 10_000)
    d = compile(lw_regex(halt, "0"))
    mids = middles(wit.labels)
    assert d.accepts(mids)
    altered = list(mids)
    altered[1] = CellLetter("1", *mids[1][1:])
    assert not d.accepts(altered)


def test_uw_regex_lifts_lw(halt):
    r = uw_regex(halt, "0")
    assert all(isinstance(a, LabelPattern) for a in atoms(r))


def test_uw_check_examples(halt):
    bg_labels = (((BG,) * 3),) * 30
    assert not uw_check(halt, bg_labels, "")
    wit = witness_from_halting(halt, "", 10_000)
    assert uw_check(halt, wit.labels, "")
    spoiled = list(wit.labels)
    spoiled[3] = (CellLetter("B", RIGHT, "LR"),) + spoiled[3][1:]
    assert not uw_check(halt, spoiled, "")


@pytest.mark.parametrize("w", ["", "0", "11"])
def test_witness_from_halting(halt, w):
    wit = witness_from_halting(halt, w, 10_000)
    assert wit.halting_time == 2 * wit.n + 2
    assert wit.y == h_power(halt.machine, encode_tm_input(halt.machine, w, wit.n), -wit.n)
    labels = itinerary(halt, wit.y, 1, wit.T)
    assert labels == wit.labels and uw_check(halt, labels, w)
    # the first 2n labels carry no particle at all
    assert all(c.particle == "." for lab in labels[: 2 * wit.n] for c in lab)


def test_no_witness_when_not_halting(halt):
    assert not witness_from_halting(halt, "1", 2_000)
    N = normalize(samples.SAMPLE_LOOP)
    for bound in (100, 1_000):
        assert not witness_from_halting(N, "", bound)


def test_witness_needs_normalized_machine():
    with pytest.raises(ValueError):
        witness_from_halting(samples.REDUCED, "", 100)


def test_predict_empty_language(halt):
    r = predict_finite(halt, 1, parse_regex("∅"), width=1, horizon=10)
    assert r.verdict == NOT_FOUND and r.candidates == 0


def test_predict_background_label(halt):
    q = parse_regex("<[B,>,.][B,>,.][B,>,.]>")
    r = predict_finite(halt, 1, q, width=0, horizon=1)
    assert r.verdict == WITNESS_FOUND
    assert r.witness.config == uniform(BG) and r.witness.labels == ((BG,) * 3,)


def test_predict_u_accepted_and_rejected(halt):
    r = predict_finite(halt, 1, uw_regex(halt, "0"), width=1, horizon=140)
    assert r.found
    wit = r.witness
    labels = itinerary(halt, wit.config, 1, wit.start + len(wit.labels))[wit.start:]
    assert uw_check(halt, labels, "0")
    r = predict_finite(halt, 1, uw_regex(halt, "1"), width=1, horizon=140)
    assert r.verdict == NOT_FOUND


def test_predict_rejects_wrong_radius(halt):
    with pytest.raises(ValueError):
        predict_finite(halt, 2, parse_regex("<[B,>,.][B,>,.][B,>,.]>"), width=0, horizon=1)


# infinite time ------------------------------------------------------------


def test_lw_omega_shape(loop_nosweep):
    assert to_text(lw_omega(loop_nosweep, "10")) == (
        "[B,>,.][B,q0.0,.][1,>,.][0,>,.][#,>,.]([0,>,.]*[1,>,.])^ω")
    assert to_text(lw_omega(loop_nosweep, "")) == "[B,>,.][B,q0.0,.][#,>,.]([0,>,.]*[1,>,.])^ω"


def test_lw_omega_needs_separator(halt):
    with pytest.raises(ValueError):
        lw_omega(halt, "1")


def test_infinite_rejecting_everything(loop_nosweep):
    A = omega_compile(parse_regex("∅<[B,>,.][B,>,.][B,>,.]>^ω"))
    r = predict_infinite(loop_nosweep, 1, A, period=1, horizon=20, width=0)
    assert r.verdict == NOT_FOUND


def test_infinite_constant_background(halt):
    A = omega_compile(parse_regex("<[B,>,.][B,>,.][B,>,.]>^ω"))
    r = predict_infinite(halt, 1, A, period=1, horizon=10)
    assert r.found and r.witness.config == uniform(BG)
    assert r.witness.lasso.loop == ((BG,) * 3,)


def test_drift_certificate(loop_nosweep):
    cert = drift_certificate(loop_nosweep.machine, "10", "1", 2_000)
    assert cert is not None and cert.p2 > cert.p1 and cert.t2 > cert.t1
    stops = make_machine(["q0", "qf"], ["B", "#", "1"], "q0", "qf", "B", [("q0", "/", "+", "qf")])
    assert drift_certificate(stops, "", "1", 50) is None


def test_eq2_demo(loop_nosweep):
    A = omega_compile(lift(lw_omega(loop_nosweep, "10"), 1))
    r = predict_infinite(loop_nosweep, 1, A, period=1, horizon=60)
    assert r.found and r.witness.family == "drift"
    y, lasso = r.witness.config, r.witness.lasso
    labels = itinerary(loop_nosweep, y, 1, 60 + len(lasso.prefix))
    assert all(lab == lasso.letter(t) for t, lab in enumerate(labels))
    assert muller_accepts_lasso(A, lasso)
    assert muller_accepts_lasso(A, LassoWord(lasso.prefix + lasso.loop, lasso.loop))
