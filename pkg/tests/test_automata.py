import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towers.automata import (
    Automaton,
    AutomatonError,
    accepts,
    automaton_to_dict,
    canonical,
    depth_bound,
    determinize,
    downward_closure,
    equivalent,
    intersect_nonempty,
    is_empty,
    minimize,
    parse_automaton,
    prefix_closure,
    product,
    serialize_automaton,
    shortest_extension,
    shortest_word,
    to_dot,
    trim,
    words_upto,
)
from towers.words import is_prefix, is_subsequence, leftmost_embedding


def nfa(states, alphabet, initial, accepting, transitions):
    return Automaton(states, alphabet, initial, accepting, [tuple(t.split()) for t in transitions])


A_STAR_B = nfa(["0", "1"], ["a", "b"], ["0"], ["1"], ["0 a 0", "0 b 1"])
EVEN_A = nfa(["e", "o"], ["a"], ["e"], ["e"], ["e a o", "o a e"])


@st.composite
def automata(draw, max_states=3, letters=("a", "b")):
    n = draw(st.integers(1, max_states))
    states = [str(i) for i in range(n)]
    triples = [(p, x, q) for p in states for x in letters for q in states]
    trans = draw(st.lists(st.sampled_from(triples), unique=True, max_size=len(triples)))
    initial = draw(st.lists(st.sampled_from(states), min_size=1, unique=True))
    accepting = draw(st.lists(st.sampled_from(states), unique=True))
    return Automaton(states, letters, initial, accepting, trans)


def language(a, length=5):
    return {w for w in words_upto(sorted(a.alphabet), length) if accepts(a, w)}


# --------------------------------------------------------------------------
# words


def test_embedding_helpers():
    assert is_subsequence("ac", "abc")
    assert not is_subsequence("ca", "abc")
    assert is_prefix("ab", "abc") and not is_prefix("b", "abc")
    assert leftmost_embedding("ab", "aab") == [0, 2]
    assert leftmost_embedding("ba", "ab") is None
    assert leftmost_embedding("", "xyz") == []


# --------------------------------------------------------------------------
# parsing


def test_round_trip_is_byte_identical():
    text = serialize_automaton(A_STAR_B)
    again = parse_automaton(text)
    assert again == A_STAR_B
    assert serialize_automaton(again) == text


@pytest.mark.parametrize(
    "patch, location",
    [
        ({"initial": ["9"]}, "initial[0]"),
        ({"transitions": [{"from": "0", "letter": "z", "to": "1"}]}, "transitions[0]"),
        ({"states": ["0", "0"]}, "states[1]"),
    ],
)
def test_parse_errors_name_the_offender(patch, location):
    doc = automaton_to_dict(A_STAR_B)
    doc.update(patch)
    with pytest.raises(AutomatonError) as info:
        parse_automaton(json.dumps(doc))
    assert location in str(info.value)


def test_parse_rejects_garbage_and_empty():
    with pytest.raises(AutomatonError):
        parse_automaton("{not json")
    empty = {"states": [], "alphabet": ["a"], "initial": [], "accepting": [], "transitions": []}
    with pytest.raises(AutomatonError):
        parse_automaton(json.dumps(empty))
    assert is_empty(parse_automaton(json.dumps(empty), allow_empty=True))


def test_membership_rejects_foreign_letters():
    with pytest.raises(ValueError):
        accepts(A_STAR_B, "c")


# --------------------------------------------------------------------------
# language operations


def test_determinize_and_minimize():
    d = determinize(A_STAR_B)
    assert d.deterministic
    assert language(d) == language(A_STAR_B)
    m = minimize(d)
    assert len(m.states) == 2
    assert canonical(A_STAR_B) == m


def test_equivalent_is_structural_on_canonical_forms():
    redundant = nfa(["0", "1", "2"], ["a", "b"], ["0", "2"], ["1"], ["0 a 0", "0 b 1", "2 a 2", "2 b 1"])
    assert equivalent(redundant, A_STAR_B)
    assert not equivalent(EVEN_A, nfa(["0"], ["a"], ["0"], ["0"], ["0 a 0"]))


def test_product_and_intersection():
    p = product(A_STAR_B, nfa(["x"], ["a", "b"], ["x"], ["x"], ["x b x"]))
    assert language(p) == {("b",)}
    assert intersect_nonempty(A_STAR_B, A_STAR_B) == ("b",)
    assert intersect_nonempty(A_STAR_B, EVEN_A) is None


def test_shortest_words():
    assert shortest_word(A_STAR_B) == ("b",)
    assert shortest_word(nfa(["0"], ["a"], ["0"], [], [])) is None
    assert shortest_extension(A_STAR_B, ("a",)) == ("b",)
    assert shortest_extension(EVEN_A, ()) == ()
    assert shortest_extension(EVEN_A, (), nonempty=True) == ("a", "a")


def test_closures():
    down = downward_closure(A_STAR_B)
    assert accepts(down, "") and accepts(down, "aa") and accepts(down, "ab")
    assert not accepts(down, "ba")
    pre = prefix_closure(EVEN_A)
    assert accepts(pre, "aaa")


def test_trim_and_depth():
    dangling = nfa(["0", "1", "2"], ["a"], ["0"], ["1"], ["0 a 1", "0 a 2"])
    assert set(trim(dangling).states) == {"0", "1"}
    assert depth_bound(dangling) == 2
    chain = nfa(["0", "1", "2"], ["a"], ["0"], ["2"], ["0 a 1", "1 a 2", "0 a 2"])
    assert depth_bound(chain, exact=True) == 3


def test_dot_output_is_stable():
    text = to_dot(A_STAR_B, "K")
    assert text.startswith('digraph "K" {')
    assert '"1" [shape=doublecircle];' in text
    assert text == to_dot(A_STAR_B, "K")


# --------------------------------------------------------------------------
# properties


@settings(max_examples=60, deadline=None)
@given(automata())
def test_minimize_preserves_language(a):
    assert language(minimize(determinize(a))) == language(a)


@settings(max_examples=60, deadline=None)
@given(automata())
def test_downward_closure_is_all_subsequences(a):
    words = language(a, 4)
    down = downward_closure(a)
    for w in words_upto(["a", "b"], 4):
        expected = any(is_subsequence(w, v) for v in words)
        if expected:
            assert accepts(down, w)
    for w in language(down, 3):
        # every short word of the closure embeds into some accepted word
        assert shortest_word(product(a, _superword_filter(w))) is not None


def _superword_filter(w):
    """Automaton for the words containing ``w`` as a subsequence."""
    n = len(w)
    states = [str(i) for i in range(n + 1)]
    trans = [(str(i), x, str(i)) for i in range(n + 1) for x in ("a", "b")]
    trans += [(str(i), w[i], str(i + 1)) for i in range(n)]
    return Automaton(states, ["a", "b"], ["0"], [str(n)], trans)


@settings(max_examples=60, deadline=None)
@given(automata(), automata())
def test_product_is_intersection(a, b):
    assert language(product(a, b)) == language(a) & language(b)


@settings(max_examples=40, deadline=None)
@given(automata())
def test_prefix_closure(a):
    words = language(a, 4)
    pre = prefix_closure(a)
    for w in words:
        for i in range(len(w) + 1):
            assert accepts(pre, w[:i])


def test_words_upto_counts():
    assert sum(1 for _ in words_upto(["a", "b"], 3)) == 15
    assert list(itertools.islice(words_upto(["a"], 2), 3)) == [(), ("a",), ("a", "a")]
