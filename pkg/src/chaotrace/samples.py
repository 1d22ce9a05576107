"""Small reversible machines shipped for tests and demos.

``SAMPLE_HALT`` scans a word over ``{0, 1}`` tracking the parity of ones;
it halts in ``qf`` on even parity and otherwise drifts right forever.
``SAMPLE_LOOP`` stamps ``$`` on its starting cell and then drifts right
forever over any tape.  ``REDUCED`` is the one-letter, two-state machine
used for exhaustive checks.
"""

from .rtm import make_machine

SAMPLE_HALT = make_machine(
    states=["q0", "Em", "E", "Om", "O", "R1", "R2", "qf"],
    alphabet=["B", "0", "1"],
    initial="q0",
    final="qf",
    blank="B",
    quads=[
        ("q0", "B", "B", "Em"),
        ("Em", "/", "+", "E"),
        ("Om", "/", "+", "O"),
        ("E", "0", "0", "Em"),
        ("E", "1", "1", "Om"),
        ("E", "B", "B", "qf"),
        ("O", "0", "0", "Om"),
        ("O", "1", "1", "Em"),
        ("O", "B", "0", "R1"),
        ("R1", "/", "+", "R2"),
        ("R2", "B", "B", "R1"),
    ],
)

SAMPLE_LOOP = make_machine(
    states=["q0", "r", "c", "qf"],
    alphabet=["B", "0", "1", "#", "$"],
    initial="q0",
    final="qf",
    blank="B",
    quads=[
        ("q0", "B", "$", "r"),
        ("r", "/", "+", "c"),
        ("c", "B", "B", "r"),
        ("c", "0", "0", "r"),
        ("c", "1", "1", "r"),
        ("c", "#", "#", "r"),
    ],
)

REDUCED = make_machine(
    states=["q0", "qf"],
    alphabet=["B"],
    initial="q0",
    final="qf",
    blank="B",
    quads=[("q0", "/", "+", "qf")],
)


def halt_language(word: str) -> bool:
    """Reference membership for ``SAMPLE_HALT``: even number of ones."""
    return word.count("1") % 2 == 0
