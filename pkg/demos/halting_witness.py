"""Build the halting witness for one input and print its itinerary.

    python demos/halting_witness.py 101
"""

import sys

from chaotrace import samples
from chaotrace.literals import format_word
from chaotrace.normalize import normalize
from chaotrace.render import RenderSpec, render
from chaotrace.trace import middles, uw_check, witness_from_halting


def main(word: str) -> int:
    M = normalize(samples.SAMPLE_HALT)
    wit = witness_from_halting(M, word, 10_000)
    if not wit:
        print(f"{word!r}: no halt within {wit.bound} steps")
        return 1
    print(f"input {word!r}: halts after {wit.halting_time} steps, n = {wit.n}")
    print(f"itinerary prefix of {wit.T} labels accepted: {uw_check(M, wit.labels, word)}")
    print("middle letters:", format_word(middles(wit.labels)))
    spec = RenderSpec(-4, 4, wit.T - 12, wit.T - 1, ca="h")
    print(render(M, wit.y, spec))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else ""))
