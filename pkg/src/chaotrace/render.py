"""Spacetime diagrams, as text or SVG.

Rows are configurations with time increasing upwards.  In the text form a
cell is ``tape ctrl particle``: the control is ``<``, ``>`` or a short
state code listed in the legend (tagged states get a ``~``), particles
are ``\\`` (moving left), ``/`` (moving right) or ``X`` (both), and ``|``
between two cells marks a segment border.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from html import escape, unescape

from .ca_core import Configuration, iterate
from .embed import (
    LEFT,
    RIGHT,
    CodedConfig,
    build_alphabets,
    g_map,
    h_map,
    is_border,
    is_tagged,
    untag,
)
from .normalize import NormalizedMachine
from .rtm import TuringMachine

LAYERS = ("tape", "ctrl", "particle", "borders")
FORMATS = ("ascii", "svg")
PARTICLE_GLYPHS = {".": " ", "L": "\\", "R": "/", "LR": "X"}
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class RenderSpec:
    lo: int
    hi: int
    t0: int
    t1: int
    format: str = "ascii"
    layers: tuple[str, ...] = LAYERS
    ca: str = "g"  # "g" or "h"

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty cell window [{self.lo}, {self.hi}]")
        if self.t0 > self.t1:
            raise ValueError(f"empty time range [{self.t0}, {self.t1}]")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        bad = set(self.layers) - set(LAYERS)
        if bad:
            raise ValueError(f"unknown layers: {', '.join(sorted(bad))}")
        if self.ca not in ("g", "h"):
            raise ValueError("ca must be 'g' or 'h'")


@dataclass(frozen=True)
class Cell:
    tape: str
    ctrl: str
    particle: str
    border: bool  # border between this cell and the next


def _code(k: int, width: int) -> str:
    out = ""
    while True:
        k, r = divmod(k, len(_DIGITS))
        out = _DIGITS[r] + out
        if not k:
            break
    return out.rjust(width, "0")


def _machine(M) -> TuringMachine:
    return M.machine if isinstance(M, NormalizedMachine) else M


def spacetime(M, x: Configuration, spec: RenderSpec) -> dict[int, list[Cell]]:
    """Rows ``t0 .. t1`` of the orbit of ``x``, cells ``lo .. hi``."""
    M = _machine(M)
    per_step = 2 if spec.ca == "h" else 1
    shift = 1 if spec.ca == "h" else 0
    uniform = len(x.left) == 1 and len(x.right) == 1
    rows = {}
    if uniform:
        c = CodedConfig.from_config(M, x).g(per_step * spec.t0)
        c.offset -= shift * spec.t0
    else:
        f = h_map(M) if spec.ca == "h" else g_map(M)
        y = iterate(f if spec.t0 >= 0 else f.inverse, x, abs(spec.t0))
    R = build_alphabets(M).R
    for t in range(spec.t0, spec.t1 + 1):
        if uniform:
            letters = [R[k] for k in c.window(spec.lo - 1, spec.hi + 1).tolist()]
        else:
            letters = list(y.window(spec.lo - 1, spec.hi + 1))
        row = []
        for i in range(1, len(letters) - 1):
            a = letters[i]
            row.append(Cell(a[0], a[1], a[2], is_border(a[1], letters[i + 1][1])))
        rows[t] = row
        if t < spec.t1:
            if uniform:
                c = c.g(per_step)
                c.offset -= shift
            else:
                y = iterate(f, y, 1)
    return rows


def _legend(M: TuringMachine) -> tuple[dict[str, str], int]:
    width = len(_code(len(M.states) - 1, 1))
    return {q: _code(k, width) for k, q in enumerate(M.states)}, width


def _ctrl_text(ctrl: str, codes: dict[str, str], width: int) -> str:
    if ctrl in (LEFT, RIGHT):
        return ctrl.rjust(width + 1)
    return ("~" if is_tagged(ctrl) else " ") + codes[untag(ctrl)]


def render_ascii(M, x: Configuration, spec: RenderSpec) -> str:
    M = _machine(M)
    rows = spacetime(M, x, spec)
    codes, width = _legend(M)
    tape_w = max(len(a) for a in M.alphabet)
    layers = set(spec.layers)
    tw = len(str(max(abs(spec.t0), abs(spec.t1)))) + 1
    cell_w = tape_w + width + 2

    def cell_text(c: Cell) -> str:
        tape = c.tape.rjust(tape_w) if "tape" in layers else " " * tape_w
        ctrl = _ctrl_text(c.ctrl, codes, width) if "ctrl" in layers else " " * (width + 1)
        part = PARTICLE_GLYPHS[c.particle] if "particle" in layers else " "
        return tape + ctrl + part

    header = " " * tw + " " + "".join(str(i).rjust(cell_w + 1) for i in range(spec.lo, spec.hi + 1))
    lines = [f"# ca={spec.ca} cells={spec.lo}..{spec.hi} time={spec.t0}..{spec.t1} "
             f"layers={','.join(l for l in LAYERS if l in layers)}", header]
    for t in range(spec.t1, spec.t0 - 1, -1):
        parts = [str(t).rjust(tw), " "]
        for c in rows[t]:
            parts.append(cell_text(c))
            parts.append("|" if c.border and "borders" in layers else " ")
        lines.append("".join(parts).rstrip())
    if "ctrl" in layers:
        lines.append("# legend: " + " ".join(f"{codes[q]}={q}" for q in M.states))
    return "\n".join(lines) + "\n"


_CTRL_FILL = {LEFT: "#dfe8f5", RIGHT: "#f5efdf"}


def render_svg(M, x: Configuration, spec: RenderSpec, cell: int = 18) -> str:
    M = _machine(M)
    rows = spacetime(M, x, spec)
    layers = set(spec.layers)
    ncols = spec.hi - spec.lo + 1
    nrows = spec.t1 - spec.t0 + 1
    W, H = ncols * cell, nrows * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" data-ca="{spec.ca}" data-lo="{spec.lo}" data-t0="{spec.t0}">']
    for t in range(spec.t1, spec.t0 - 1, -1):
        y = (spec.t1 - t) * cell
        for j, c in enumerate(rows[t]):
            xx = j * cell
            attrs = [f'data-t="{t}"', f'data-i="{spec.lo + j}"']
            if "tape" in layers:
                attrs.append(f'data-tape="{escape(c.tape)}"')
            if "ctrl" in layers:
                attrs.append(f'data-ctrl="{escape(c.ctrl)}"')
            if "particle" in layers:
                attrs.append(f'data-particle="{c.particle}"')
            if "borders" in layers:
                attrs.append(f'data-border="{int(c.border)}"')
            fill = _CTRL_FILL.get(c.ctrl, "#e07050" if is_tagged(c.ctrl) else "#50a050")
            if "ctrl" not in layers:
                fill = "#ffffff"
            out.append(f'<rect x="{xx}" y="{y}" width="{cell}" height="{cell}" fill="{fill}" '
                       + " ".join(attrs) + "/>")
            if "tape" in layers and c.tape != M.blank:
                out.append(f'<text x="{xx + cell // 2}" y="{y + cell * 2 // 3}" font-size="{cell // 2}" '
                           f'text-anchor="middle">{escape(c.tape)}</text>')
            if "particle" in layers:
                if "L" in c.particle:
                    out.append(f'<line x1="{xx}" y1="{y}" x2="{xx + cell}" y2="{y + cell}" '
                               'stroke="#202020" stroke-width="1.5"/>')
                if "R" in c.particle:
                    out.append(f'<line x1="{xx}" y1="{y + cell}" x2="{xx + cell}" y2="{y}" '
                               'stroke="#202020" stroke-width="1.5"/>')
            if "borders" in layers and c.border:
                out.append(f'<line x1="{xx + cell}" y1="{y}" x2="{xx + cell}" y2="{y + cell}" '
                           'stroke="#000000" stroke-width="3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(M, x: Configuration, spec: RenderSpec) -> str:
    if spec.format == "svg":
        return render_svg(M, x, spec)
    return render_ascii(M, x, spec)


# ---------------------------------------------------------------------------
# canonical dumps, for comparing the two formats


def dump_rows(rows: dict[int, list[Cell]], lo: int, layers=LAYERS) -> list[tuple]:
    out = []
    for t in sorted(rows):
        for j, c in enumerate(rows[t]):
            out.append((t, lo + j) + _project(c, layers))
    return out


def _project(c: Cell, layers) -> tuple:
    return tuple(v for v, name in zip((c.tape, c.ctrl, c.particle, c.border), LAYERS)
                 if name in layers)


def dump_from_svg(text: str) -> list[tuple]:
    out = []
    for m in re.finditer(r"<rect ([^>]*)/>", text):
        attrs = dict(re.findall(r'data-(\w+)="([^"]*)"', m.group(1)))
        if "t" not in attrs:
            continue
        row = (int(attrs["t"]), int(attrs["i"]))
        if "tape" in attrs:
            row += (unescape(attrs["tape"]),)
        if "ctrl" in attrs:
            row += (unescape(attrs["ctrl"]),)
        if "particle" in attrs:
            row += (attrs["particle"],)
        if "border" in attrs:
            row += (attrs["border"] == "1",)
        out.append(row)
    return sorted(out)


def dump_from_ascii(M, text: str) -> list[tuple]:
    """Read a full-layer text diagram back into cell tuples."""
    M = _machine(M)
    lines = text.splitlines()
    m = re.match(r"# ca=\w cells=(-?\d+)\.\.(-?\d+) time=(-?\d+)\.\.(-?\d+) layers=(\S+)", lines[0])
    if m is None or m.group(5) != ",".join(LAYERS):
        raise ValueError("not a full-layer diagram")
    lo, hi, t0, t1 = map(int, m.groups()[:4])
    codes, width = _legend(M)
    names = {v: k for k, v in codes.items()}
    tape_w = max(len(a) for a in M.alphabet)
    tw = len(str(max(abs(t0), abs(t1)))) + 1
    step = tape_w + width + 3
    glyph = {v: k for k, v in PARTICLE_GLYPHS.items()}
    out = []
    for line in lines[2:2 + t1 - t0 + 1]:
        t = int(line[:tw])
        body = line[tw + 1:].ljust(step * (hi - lo + 1))
        for j in range(hi - lo + 1):
            s = body[j * step:(j + 1) * step]
            tape = s[:tape_w].strip()
            ctrl = s[tape_w:tape_w + width + 1]
            if ctrl.strip() in (LEFT, RIGHT):
                ctrl = ctrl.strip()
            elif ctrl.startswith("~"):
                ctrl = "~" + names[ctrl[1:]]
            else:
                ctrl = names[ctrl[1:]]
            out.append((t, lo + j, tape, ctrl, glyph[s[tape_w + width + 1]], s[-1] == "|"))
    return sorted(out)


__all__ = [
    "Cell",
    "FORMATS",
    "LAYERS",
    "RenderSpec",
    "dump_from_ascii",
    "dump_from_svg",
    "dump_rows",
    "render",
    "render_ascii",
    "render_svg",
    "spacetime",
]
