import random

import pytest

from towers.automata import Automaton, empty_automaton, trim
from towers.constructions import gen_dfas_tight, gen_thm02B
from towers.prefix import (
    alternation_graph,
    brute_prefix_height,
    find_pattern,
    infinite_prefix_tower,
    prefix_bound_dfa,
    prefix_bound_nfa,
    prefix_height,
    prefix_height_dfa,
    prefix_height_fixpoint,
)
from towers.results import FINITE
from towers.sampling import random_pair
from towers.verify import PREFIX, Tower, verify_tower

INF = float("inf")

# one 2-state DFA for both (ab)*a and (ab)*, differing only in acceptance
ODD = Automaton(["0", "1"], ["a", "b"], ["0"], ["1"], [("0", "a", "1"), ("1", "b", "0")])
EVEN = Automaton(["0", "1"], ["a", "b"], ["0"], ["0"], [("0", "a", "1"), ("1", "b", "0")])

# a(ba)* and b(ab)*
STARTS_A = Automaton(["0", "1", "2"], ["a", "b"], ["0"], ["1"], [("0", "a", "1"), ("1", "b", "2"), ("2", "a", "1")])
STARTS_B = Automaton(["0", "1", "2"], ["a", "b"], ["0"], ["1"], [("0", "b", "1"), ("1", "a", "2"), ("2", "b", "1")])

NOTHING = Automaton(["0"], ["a"], ["0"], [], [])


def heights(a, b):
    graph = prefix_height(a, b)
    fix = prefix_height_fixpoint(a, b)
    as_num = [r.height if r.verdict == FINITE else INF for r in (graph, fix)]
    return as_num + [brute_prefix_height(a, b)]


def test_bounds():
    assert prefix_bound_dfa(4, 4) == 9
    assert prefix_bound_dfa(0, 5) == 1
    assert prefix_bound_dfa(2, 2) == 3
    assert prefix_bound_nfa(2, 2) == 5
    assert prefix_bound_nfa(1, 1) == 1
    assert prefix_bound_nfa(3, 2) == 11


def test_pattern_for_alternating_parity():
    witness = find_pattern(ODD, EVEN)
    assert witness is not None
    assert witness.check(ODD, EVEN) == []
    tower = infinite_prefix_tower(witness, 10)
    assert len(tower) == 10
    assert verify_tower(ODD, EVEN, Tower(tuple(tower), PREFIX, "K")).valid
    assert [list(w) for w in infinite_prefix_tower(witness, 3)] == [["a"], ["a", "b"], ["a", "b", "a"]]
    assert infinite_prefix_tower(witness, 0) == []


def test_no_pattern_when_first_letters_differ():
    assert find_pattern(STARTS_A, STARTS_B) is None
    assert prefix_height(STARTS_A, STARTS_B).height == 1


def test_tight_dfas_have_no_pattern():
    inst = gen_dfas_tight(2, 3)
    assert find_pattern(inst.A, inst.B) is None


@pytest.mark.parametrize("d, e, expected", [(2, 3, 9), (1, 1, 3)])
def test_dfa_heights(d, e, expected):
    inst = gen_dfas_tight(d, e)
    result = prefix_height_dfa(inst.A, inst.B)
    assert result.verdict == FINITE and result.height == expected == d * (e + 1) + 1
    assert verify_tower(inst.A, inst.B, result.witness).valid
    assert heights(inst.A, inst.B) == [expected] * 3


def test_dfa_height_edge_cases():
    only_a = Automaton(["0", "1"], ["a"], ["0"], ["1"], [("0", "a", "1")])
    assert prefix_height_dfa(only_a, NOTHING).height == 1
    with pytest.raises(ValueError):
        prefix_height_dfa(gen_thm02B(2, 1).A, gen_thm02B(2, 1).B)


def test_thm02B_prefix_height():
    inst = gen_thm02B(5, 5)
    result = prefix_height(inst.A, inst.B)
    assert result.height == 31
    assert brute_prefix_height(inst.A, inst.B) == 31


def test_three_algorithms_on_small_cases():
    assert heights(ODD, EVEN) == [INF, INF, INF]
    assert heights(NOTHING, NOTHING) == [0, 0, 0]
    assert prefix_height(empty_automaton(["a"]), empty_automaton(["a"])).height == 0


def test_random_pairs_agree():
    rng = random.Random(11)
    for _ in range(150):
        a, b = random_pair(rng, max_states=3)
        graph, fix, brute = heights(a, b)
        assert graph == fix == brute
        witness = find_pattern(a, b)
        assert (witness is not None) == (graph == INF)
        if witness is not None:
            assert witness.check(a, b) == []
            tower = Tower(tuple(infinite_prefix_tower(witness, 10)), PREFIX, "K")
            assert verify_tower(a, b, tower).valid
        else:
            result = prefix_height(a, b)
            assert verify_tower(a, b, result.witness).valid
            assert len(result.witness.words) == result.height
            ta, tb = trim(a), trim(b)
            assert graph <= prefix_bound_nfa(max(len(ta.states), 1), max(len(tb.states), 1))


def test_alternation_graph_cycle_matches_pattern():
    rng = random.Random(12)
    checked = 0
    while checked < 60:
        a, b = random_pair(rng, max_states=3, deterministic=True)
        a, b = trim(a), trim(b)
        if not a.states or not b.states:
            continue
        checked += 1
        graph = alternation_graph(a, b)
        has_cycle = graph.find_cycle() is not None
        if has_cycle:
            assert find_pattern(a, b) is not None
        result = prefix_height_dfa(a, b)
        if result.verdict == FINITE:
            assert result.height <= prefix_bound_dfa(len(a.states), len(b.states))


def test_pattern_dot():
    text = find_pattern(ODD, EVEN).to_dot()
    assert text.startswith("digraph")
