import pytest

from chaotrace import samples
from chaotrace.cli import main
from chaotrace.rtm import format_machine


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def machine_file(tmp_path):
    p = tmp_path / "halt.tm"
    p.write_text(format_machine(samples.SAMPLE_HALT))
    return p


def test_compile_reports_and_is_deterministic(capsys, machine_file, tmp_path):
    a, b = tmp_path / "a.bundle", tmp_path / "b.bundle"
    code, _, err = run(capsys, "compile", str(machine_file), "-o", str(a))
    assert code == 0 and "deterministic: True" in err and "reversible: True" in err
    assert run(capsys, "compile", str(machine_file), "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_compile_conflict(capsys, tmp_path):
    p = tmp_path / "bad.tm"
    p.write_text("states: q r s\nalphabet: a b c\ninitial: q\nfinal: s\nblank: a\n"
                 "q a c r\ns b c r\n")
    code, _, err = run(capsys, "compile", str(p))
    assert code == 1 and "range overlap: [q,a,c,r] [s,b,c,r]" in err
    code, out, err = run(capsys, "compile", str(p), "--allow-invalid")
    assert code == 0 and out == "" and "reversible: False" in err


def test_compile_query(capsys, tmp_path):
    q = tmp_path / "q.query"
    q.write_text("machine: sample:halt\nradius: 1\n---\n<[B,>,.][B,>,.][B,>,.]>*\n")
    code, out, _ = run(capsys, "compile", "--query", str(q))
    assert code == 0 and out.startswith("dfa")


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "sample:halt", "--input", "0", "--steps", "3",
                       "--cells", "-1:3")
    assert code == 0 and out.count("\n") == 4
    code, out, _ = run(capsys, "simulate", "sample:halt", "--ca", "tm", "--input", "0",
                       "--steps", "100", "--final")
    assert code == 0


def test_simulate_reverse_round_trip(capsys):
    cfg = "left=[B,>,.] center=[B,<,.][B,q0.0,R][0,>,L] right=[B,>,.]"
    code, fwd, _ = run(capsys, "simulate", "sample:halt", "--config", cfg, "--steps", "5",
                       "--final")
    assert code == 0
    last = fwd.strip().splitlines()[-1].split(": ", 1)[-1]
    code, back, _ = run(capsys, "simulate", "sample:halt", "--config", last, "--steps", "5",
                        "--reverse", "--final")
    assert code == 0 and back.strip().splitlines()[-1].endswith(
        "left=[B,>,.] center=[B,<,.][B,q0.0,R][0,>,L] right=[B,>,.] offset=0")


def test_render(capsys, tmp_path):
    code, out, _ = run(capsys, "render", "sample:halt", "--input", "", "--n", "1",
                       "--cells", "-2:4", "--time", "0:4")
    assert code == 0 and out.startswith("# ca=g")
    svg = tmp_path / "d.svg"
    code, _, _ = run(capsys, "render", "sample:halt", "--input", "0", "--format", "svg",
                     "-o", str(svg))
    assert code == 0 and svg.read_text().startswith("<svg")
    code, _, err = run(capsys, "render", "sample:halt", "--input", "0", "--cells", "4:1")
    assert code == 1 and err.startswith("error:")


def test_predict_exit_codes(capsys, tmp_path):
    found = tmp_path / "u0.query"
    found.write_text("machine: sample:halt\nradius: 1\nlanguage: uw 0\n")
    code, out, _ = run(capsys, "predict", str(found), "--width", "1", "--horizon", "140")
    assert code == 0 and "verdict: WitnessFound" in out
    empty = tmp_path / "empty.query"
    empty.write_text("machine: sample:halt\nradius: 1\n---\n@empty\n")
    code, out, _ = run(capsys, "predict", str(empty))
    assert code == 2 and "NotFoundWithinBounds" in out


def test_predict_omega(capsys, tmp_path):
    q = tmp_path / "eq2.query"
    q.write_text("machine: sample:loop-nosweep\nradius: 1\nlanguage: uw-omega 10\n")
    code, out, _ = run(capsys, "predict", str(q), "--horizon", "60")
    assert code == 0 and "WitnessFound" in out and "loop:" in out


def test_predict_missing_file(capsys):
    code, _, err = run(capsys, "predict", "/nonexistent.query")
    assert code == 1 and err.startswith("error:")


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "sample:reduced", "--sizes", "minimal", "--seed", "3")
    assert code == 0 and out.splitlines()[-1] == "15 passed, 0 failed"
    code2, out2, _ = run(capsys, "verify", "sample:reduced", "--sizes", "minimal", "--seed", "3")
    assert out2 == out
    code, out, _ = run(capsys, "verify", "sample:reduced", "--sizes", "minimal",
                       "--inject-fault", "g_inverse")
    assert code == 1 and "FAIL embed.g_reversibility" in out
