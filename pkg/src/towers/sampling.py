"""Seeded random automata for property tests and cross-checks."""

from __future__ import annotations

import random

from .automata import Automaton

DEFAULT_LETTERS = ("a", "b")


def random_nfa(
    rng: random.Random,
    max_states: int = 4,
    letters=DEFAULT_LETTERS,
    density: float = 0.35,
    deterministic: bool = False,
) -> Automaton:
    n = rng.randint(1, max_states)
    states = [str(i) for i in range(n)]
    transitions = []
    for p in states:
        for x in letters:
            if deterministic:
                if rng.random() < max(density, 0.5):
                    transitions.append((p, x, rng.choice(states)))
            else:
                transitions.extend((p, x, q) for q in states if rng.random() < density)
    if deterministic:
        initial = [states[0]]
    else:
        initial = [q for q in states if rng.random() < 0.3] or [states[0]]
    accepting = [q for q in states if rng.random() < 0.4]
    return Automaton(states, letters, initial, accepting, transitions)


def random_pair(rng: random.Random, **kwargs) -> tuple[Automaton, Automaton]:
    return random_nfa(rng, **kwargs), random_nfa(rng, **kwargs)
