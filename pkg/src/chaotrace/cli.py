"""Command line: ``chaotrace {compile,simulate,render,predict,verify}``.

Machines are given as a bundle, a machine file, or ``sample:<name>``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .automata import dfa_to_text, muller_to_text, omega_compile, to_text, word
from .automata import compile as compile_regex
from .ca_core import Configuration, iterate
from .embed import SCell, build_alphabets, encode_tm_input, fm_map, g_map, h_map
from .files import Query, bundle_text, load_machine, read_query
from .literals import format_config, format_word, parse_config, parse_word
from .normalize import NormalizedMachine, normalize
from .render import LAYERS, RenderSpec, render
from .rtm import initial_id, parse_machine, tm_step, STUCK
from .trace import (
    LassoWitness,
    itinerary,
    lift,
    lw_omega,
    lw_regex,
    predict_finite,
    predict_infinite,
    uw_omega,
    uw_regex,
)
from .verify import FAULTS, SuiteSizes, run_property_suite

EXIT_FOUND, EXIT_ERROR, EXIT_NOT_FOUND = 0, 1, 2


class CliError(Exception):
    pass


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers in {text!r}") from None


def _plain(M):
    return M.machine if isinstance(M, NormalizedMachine) else M


def _start_config(M, args) -> Configuration:
    machine = _plain(M)
    if args.config is not None:
        return parse_config(args.config, build_alphabets(machine).R)
    if args.input is not None:
        w = parse_word(args.input)
        n = args.n if args.n is not None else max(len(w), 1)
        return encode_tm_input(machine, w, n)
    raise CliError("give --config or --input")


# ---------------------------------------------------------------------------
# compile


def cmd_compile(args) -> int:
    if args.query:
        return _compile_query(args)
    if args.machine.startswith("sample:"):
        M = load_machine(args.machine)
    else:
        text = Path(args.machine).read_text()
        machine = parse_machine(text, allow_invalid=True)
        rep = machine.report
        print("\n".join(rep.lines()), file=sys.stderr)
        if not (rep.deterministic and rep.reversible):
            if args.allow_invalid:
                return 0
            raise CliError("machine is not deterministic and reversible")
        M = machine if args.raw else normalize(machine, sweep=not args.no_sweep)
    out = bundle_text(M)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


def _query_regex(M, q: Query):
    if q.body is not None:
        return q.body
    kind, w = q.language
    w = parse_word(w)
    make = {"uw": uw_regex, "uw-omega": uw_omega}.get(kind)
    if make is not None:
        return make(M, w, q.radius)
    if q.radius != 0:
        raise CliError(f"language {kind} is a radius-0 language")
    return lift(lw_regex(M, w) if kind == "lw" else lw_omega(M, w), 0)


def _compile_query(args) -> int:
    q = read_query(args.machine)
    M = _query_machine(q, None)
    r = _query_regex(_plain(M), q)
    if q.kind == "infinite":
        sys.stdout.write(muller_to_text(omega_compile(r)))
    else:
        sys.stdout.write(dfa_to_text(compile_regex(r)))
    return 0


# ---------------------------------------------------------------------------
# simulate / render


def cmd_simulate(args) -> int:
    M = load_machine(args.machine)
    machine = _plain(M)
    lo, hi = args.cells
    if args.ca == "tm":
        w = parse_word(args.input or "")
        conf = initial_id(machine, w)

        def show(t):
            tape = "".join(conf.read(i) for i in range(lo, hi + 1))
            return f"{t}: head={conf.head} state={conf.state} tape[{lo}..{hi}]={tape}"

        for t in range(args.steps + 1):
            if t % args.every == 0:
                print(show(t))
            if t < args.steps:
                nxt = tm_step(machine, conf)
                if nxt is STUCK:
                    print(f"halted at {t}")
                    break
                conf = nxt
        if args.final:
            print("final " + show(t))
        return 0
    x = _start_config(M, args)
    f = {"g": g_map, "h": h_map, "fm": fm_map}[args.ca](machine)
    if args.ca == "fm":
        x = x.map_letters(lambda c: SCell(c[0], c[1]))
    if args.reverse:
        f = f.inverse
    for t in range(args.steps + 1):
        if t % args.every == 0:
            sign = "-" if args.reverse and t else ""
            print(f"{sign}{t}: {format_word(x.window(lo, hi))}")
        if t < args.steps:
            x = iterate(f, x, 1)
    if args.final:
        print("final: " + format_config(x))
    return 0


def cmd_render(args) -> int:
    M = load_machine(args.machine)
    x = _start_config(M, args)
    layers = tuple(args.layers.split(",")) if args.layers else LAYERS
    lo, hi = args.cells
    t0, t1 = args.time
    spec = RenderSpec(lo, hi, t0, t1, args.format, layers, args.ca)
    out = render(M, x, spec)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


# ---------------------------------------------------------------------------
# predict


def _query_machine(q: Query, override: str | None):
    spec = override or q.machine
    if spec is None:
        raise CliError("no machine: name one in the query header or on the command line")
    return load_machine(spec, None if override else q.base)


def _label_text(labels) -> str:
    return to_text(word(labels)) if labels else "ε"


def cmd_predict(args) -> int:
    if len(args.files) == 2:
        machine_spec, qfile = args.files
    else:
        machine_spec, qfile = None, args.files[0]
    q = read_query(qfile)
    M = _query_machine(q, machine_spec)
    machine = _plain(M)
    r = _query_regex(machine, q)
    width = args.width if args.width is not None else (q.width if q.width is not None else 2)
    horizon = args.horizon if args.horizon is not None else (q.horizon or 200)
    period = args.period if args.period is not None else (q.period or 1)
    n = q.radius
    print(f"query: kind={q.kind} radius={n} width={width} horizon={horizon} period={period}")
    if q.kind == "finite":
        res = predict_finite(machine, n, r, width, horizon, args.center_width)
    else:
        res = predict_infinite(machine, n, omega_compile(r), period, horizon, width)
    print(f"verdict: {res.verdict}")
    print(f"candidates: {res.candidates}")
    if not res.found:
        return EXIT_NOT_FOUND
    wit = res.witness
    print(f"family: {wit.family}")
    print(f"config: {format_config(wit.config)}")
    if isinstance(wit, LassoWitness):
        print(f"prefix: {_label_text(wit.lasso.prefix)}")
        print(f"loop: {_label_text(wit.lasso.loop)}")
        for key, value in wit.certificate.items():
            print(f"certificate.{key}: {value}")
        steps = wit.verified_steps
        labels = itinerary(h_map(machine), wit.config, n, steps)
        agree = all(lab == wit.lasso.letter(t) for t, lab in enumerate(labels))
        print(f"check: itinerary equals the lasso for {steps} steps: {'ok' if agree else 'FAILED'}")
        return EXIT_FOUND if agree else EXIT_ERROR
    print(f"start: {wit.start}")
    print(f"labels: {_label_text(wit.labels)}")
    end = wit.start + len(wit.labels)
    labels = itinerary(h_map(machine), wit.config, n, end)[wit.start:]
    same = labels == wit.labels
    acc = compile_regex(r).accepts(labels)
    print(f"check: itinerary re-derived by the block map: {'ok' if same else 'FAILED'}")
    print(f"check: automaton accepts the labels: {'ok' if acc else 'FAILED'}")
    return EXIT_FOUND if same and acc else EXIT_ERROR


# ---------------------------------------------------------------------------
# verify


_SIZES = {"minimal": SuiteSizes.minimal, "default": SuiteSizes, "full": SuiteSizes.full}
_SHIPPED = ("sample:halt", "sample:loop", "sample:reduced")


def cmd_verify(args) -> int:
    sizes = _SIZES[args.sizes]()
    if args.width is not None:
        from dataclasses import replace
        sizes = replace(sizes, width=args.width)
    ok = True
    for spec in args.machines or _SHIPPED:
        M = load_machine(spec)
        rep = run_property_suite(M, args.seed, sizes, args.inject_fault, name=spec)
        sys.stdout.write(rep.text())
        ok &= rep.ok
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chaotrace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="validate and normalize a machine into a bundle")
    c.add_argument("machine", help="machine file, sample:<name>, or with --query a query file")
    c.add_argument("-o", "--output")
    c.add_argument("--no-sweep", action="store_true", help="omit the input sweep")
    c.add_argument("--raw", action="store_true", help="bundle the machine without normalizing")
    c.add_argument("--allow-invalid", action="store_true",
                   help="report on an invalid machine without failing")
    c.add_argument("--query", action="store_true", help="compile a query file to its automaton")
    c.set_defaults(func=cmd_compile)

    def start(q):
        q.add_argument("machine")
        q.add_argument("--config", help="configuration literal")
        q.add_argument("--input", help="machine input word, encoded as the start")
        q.add_argument("--n", type=int, help="segment length for --input")
        q.add_argument("--cells", type=_range, default=(-8, 8), help="LO:HI")

    s = sub.add_parser("simulate", help="iterate a CA or the machine and dump windows")
    start(s)
    s.add_argument("--ca", choices=("g", "h", "fm", "tm"), default="g")
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--every", type=int, default=1)
    s.add_argument("--reverse", action="store_true", help="iterate the inverse")
    s.add_argument("--final", action="store_true", help="print the last configuration")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("render", help="draw a spacetime diagram")
    start(r)
    r.add_argument("--time", type=_range, default=(0, 20), help="T0:T1")
    r.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    r.add_argument("--layers", help=f"comma list from {','.join(LAYERS)}")
    r.add_argument("--ca", choices=("g", "h"), default="g")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_render)

    q = sub.add_parser("predict", help="answer a trace query")
    q.add_argument("files", nargs="+", metavar="[MACHINE] QUERY")
    q.add_argument("--width", type=int, help="longest input word tried")
    q.add_argument("--horizon", type=int, help="time steps scanned per candidate")
    q.add_argument("--period", type=int, help="longest spatial period or tail tried")
    q.add_argument("--center-width", type=int, default=1)
    q.add_argument("--seed", type=int, default=0, help="accepted for uniformity; the search is exhaustive")
    q.set_defaults(func=cmd_predict)

    v = sub.add_parser("verify", help="run the property suite")
    v.add_argument("machines", nargs="*", help="default: the shipped samples")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--sizes", choices=tuple(_SIZES), default="default")
    v.add_argument("--width", type=int, help="widest random configuration")
    v.add_argument("--inject-fault", choices=FAULTS)
    v.set_defaults(func=cmd_verify)
    return p


def _join_ranges(argv: list[str]) -> list[str]:
    # "--cells -2:3" would read -2:3 as an option; glue it to its flag
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--cells", "--time"):
            out.append(f"{a}={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_ranges(list(sys.argv[1:] if argv is None else argv)))
    if args.command == "predict" and len(args.files) > 2:
        parser.error("predict takes [MACHINE] QUERY")
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


__all__ = ["build_parser", "main"]
