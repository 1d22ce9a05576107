"""Plain-text bundle and query files.

Bundle::

    chaotrace-bundle 1
    normalized: yes | no
    sweep: yes | no
    sweep-states: <names>
    [original]
    <machine text>
    [machine]
    <machine text>
    [alphabet]
    ctrls: <control values>
    S: <size>
    R: <size>

Query::

    ; comment
    machine: <machine or bundle file, relative to the query file>
    kind: finite | infinite
    radius: <n>
    width: <int>        (optional)
    horizon: <int>      (optional)
    period: <int>       (optional)
    language: uw <w> | uw-omega <w> | lw <w> | lw-omega <w>   (optional)
    ---
    <regex>             (unless language is given; no comments here)

``machine`` may also name a shipped sample: ``sample:halt``,
``sample:loop``, ``sample:loop-nosweep`` or ``sample:reduced``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .automata import Regex, has_omega, parse_regex
from .embed import build_alphabets
from .normalize import NormalizedMachine, normalize
from .rtm import TuringMachine, format_machine, parse_machine
from . import samples

MAGIC = "chaotrace-bundle 1"


def _sample(name: str) -> TuringMachine | NormalizedMachine:
    table = {
        "halt": lambda: normalize(samples.SAMPLE_HALT),
        "loop": lambda: normalize(samples.SAMPLE_LOOP),
        "loop-nosweep": lambda: normalize(samples.SAMPLE_LOOP, sweep=False),
        "reduced": lambda: samples.REDUCED,
    }
    if name not in table:
        raise ValueError(f"unknown sample {name!r}; known: {', '.join(table)}")
    return table[name]()


def bundle_text(M: TuringMachine | NormalizedMachine) -> str:
    if isinstance(M, NormalizedMachine):
        machine, original = M.machine, M.original
        head = ["normalized: yes", f"sweep: {'yes' if M.sweep else 'no'}",
                "sweep-states: " + " ".join(M.sweep_names)]
    else:
        machine = original = M
        head = ["normalized: no", "sweep: no", "sweep-states:"]
    alph = build_alphabets(machine)
    lines = [MAGIC, *head, "[original]", format_machine(original).rstrip("\n"),
             "[machine]", format_machine(machine).rstrip("\n"), "[alphabet]",
             "ctrls: " + " ".join(alph.ctrls), f"S: {len(alph.S)}", f"R: {len(alph.R)}"]
    return "\n".join(lines) + "\n"


def parse_bundle(text: str) -> TuringMachine | NormalizedMachine:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ValueError("not a bundle file")
    header: dict[str, str] = {}
    sections: dict[str, list[str]] = {}
    current = None
    for line in lines[1:]:
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1]
            sections[current] = []
        elif current is None:
            key, _, value = s.partition(":")
            header[key.strip()] = value.strip()
        else:
            sections[current].append(line)
    for name in ("original", "machine", "alphabet"):
        if name not in sections:
            raise ValueError(f"bundle lacks the [{name}] section")
    machine = parse_machine("\n".join(sections["machine"]))
    original = parse_machine("\n".join(sections["original"]))
    alph = build_alphabets(machine)
    info = dict(l.split(":", 1) for l in sections["alphabet"] if ":" in l)
    if int(info["S"]) != len(alph.S) or int(info["R"]) != len(alph.R):
        raise ValueError("bundle alphabet sizes do not match its machine")
    if header.get("normalized") != "yes":
        return machine
    return NormalizedMachine(machine, original, header.get("sweep") == "yes",
                             tuple(header.get("sweep-states", "").split()))


def load_machine(spec: str, base: Path | None = None) -> TuringMachine | NormalizedMachine:
    """A bundle, a machine file (normalized on load) or ``sample:<name>``."""
    if spec.startswith("sample:"):
        return _sample(spec[len("sample:"):])
    path = Path(spec)
    if base is not None and not path.is_absolute():
        path = base / path
    text = path.read_text()
    if text.startswith(MAGIC):
        return parse_bundle(text)
    return normalize(parse_machine(text))


@dataclass(frozen=True)
class Query:
    machine: str | None
    kind: str
    radius: int
    body: Regex | None
    language: tuple[str, str] | None
    width: int | None = None
    horizon: int | None = None
    period: int | None = None
    base: Path | None = None


_INT_KEYS = ("radius", "width", "horizon", "period")


def parse_query(text: str, base: Path | None = None) -> Query:
    lines = text.splitlines()
    cut = next((k for k, l in enumerate(lines) if l.strip() == "---"), len(lines))
    head, body = lines[:cut], lines[cut + 1:]
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(head, 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        key, colon, value = line.partition(":")
        if not colon:
            raise ValueError(f"query line {lineno}: expected 'key: value'")
        key = key.strip()
        if key not in ("machine", "kind", "language") + _INT_KEYS:
            raise ValueError(f"query line {lineno}: unknown key {key!r}")
        fields[key] = value.strip()
    ints = {}
    for key in _INT_KEYS:
        if key in fields:
            try:
                ints[key] = int(fields[key])
            except ValueError:
                raise ValueError(f"query field {key} must be an integer") from None
    if "radius" not in ints:
        raise ValueError("query needs a radius")
    language = None
    if "language" in fields:
        parts = fields["language"].split()
        if not parts or parts[0] not in ("uw", "uw-omega", "lw", "lw-omega") or len(parts) > 2:
            raise ValueError(f"bad language {fields['language']!r}")
        language = (parts[0], parts[1] if len(parts) == 2 else "")
    body_text = "\n".join(body).strip()
    regex = None
    if body_text:
        if language:
            raise ValueError("give either a language or a regex body, not both")
        regex = parse_regex(body_text)
    elif language is None:
        raise ValueError("query has neither a language nor a regex body")
    kind = fields.get("kind")
    if kind is None:
        omega_lang = language is not None and language[0].endswith("omega")
        kind = "infinite" if (regex is not None and has_omega(regex)) or omega_lang else "finite"
    if kind not in ("finite", "infinite"):
        raise ValueError(f"kind must be finite or infinite, got {kind!r}")
    return Query(fields.get("machine"), kind, ints["radius"], regex, language,
                 ints.get("width"), ints.get("horizon"), ints.get("period"), base)


def read_query(path: str | Path) -> Query:
    path = Path(path)
    return parse_query(path.read_text(), path.parent)


__all__ = [
    "MAGIC",
    "Query",
    "bundle_text",
    "load_machine",
    "parse_bundle",
    "parse_query",
    "read_query",
]
