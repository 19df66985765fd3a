import itertools
import json
import math

import pytest

from towers.automata import Automaton, accepts, trim
from towers.constructions import (
    FAMILIES,
    PRESETS,
    binarize,
    binary_codes,
    determinize_preserving_v1,
    determinize_preserving_v2,
    encode_word,
    gen_2exp_improved,
    gen_dfas_tight,
    gen_expdfa,
    gen_lower_bound,
    gen_lower_bound_dfa,
    gen_thm02B,
    normalize_initial,
)
from towers.prefix import find_pattern, prefix_height
from towers.results import FINITE
from towers.subseq import subseq_height
from towers.verify import PREFIX, Tower, verify_tower


def small_instances():
    for d, e in itertools.product((1, 2, 3), (1, 3)):
        yield gen_thm02B(d, e)
    for m_a, m_b in ((1, 0), (1, 1), (2, 0), (2, 1)):
        for d in itertools.product((1, 2), repeat=m_a):
            for e in itertools.product((1, 2), repeat=m_b):
                yield gen_lower_bound(m_a, m_b, 1, d, e)
    yield gen_lower_bound(1, 0, 3, (1,), ())
    for m_a, m_b in ((1, 0), (1, 1), (2, 1), (1, 2)):
        for d in itertools.product((1, 2), repeat=m_a):
            for e in itertools.product((1, 2), repeat=m_b):
                yield gen_2exp_improved(m_a, m_b, d, e)
    for n in range(4):
        yield gen_expdfa(n)
    for m, d, e in ((1, (2,), 1), (1, (3,), 1), (1, (2,), 3), (2, (3, 2), 1)):
        yield gen_lower_bound_dfa(m, d, e)
    for d, e in itertools.product((1, 2, 3), (1, 3)):
        yield gen_dfas_tight(d, e)


INSTANCES = list(small_instances())
DETERMINISTIC = {"expdfa", "lower_bound_dfa", "dfas_tight"}
EXACT = {"thm02B", "lower_bound_dfa", "dfas_tight"}


def label(inst):
    return f"{inst.family}-{'-'.join(str(v) for v in inst.params.values())}"


def exact_2exp_height(d, e):
    """Measured height of the 2exp_improved family (see the family notes)."""
    p = math.prod(x + 1 for x in d)
    if not e:
        return 2 * p
    return math.prod(x + 1 for x in e[1:]) * ((e[0] + 1) * (2 * p - 2) + 2) + 1


def height_of(inst):
    if inst.witness.order == PREFIX:
        return prefix_height(inst.A, inst.B)
    return subseq_height(inst.A, inst.B)


@pytest.mark.parametrize("inst", INSTANCES, ids=label)
def test_sizes_and_witness(inst):
    assert (len(inst.A.states), len(inst.B.states)) == inst.predicted_states
    assert len(inst.alphabet) == inst.predicted_alphabet
    if inst.family in DETERMINISTIC:
        assert inst.A.deterministic and inst.B.deterministic
    report = verify_tower(inst.A, inst.B, inst.witness)
    assert report.valid, report.message
    expected = inst.notes.get("achieved height", inst.predicted_height)
    assert len(inst.witness.words) == expected


@pytest.mark.parametrize("inst", INSTANCES, ids=label)
def test_heights_close_the_loop(inst):
    result = height_of(inst)
    assert result.verdict == FINITE
    assert find_pattern(inst.A, inst.B) is None
    if inst.family == "2exp_improved":
        assert result.height == exact_2exp_height(inst.params["d"], inst.params["e"])
        assert result.height == len(inst.witness.words)
    else:
        assert result.height >= inst.predicted_height
    if inst.family in EXACT:
        assert result.height == inst.predicted_height


def test_2exp_formula_holds_exactly_when_first_counter_is_one():
    for d, e in (((1,), (1,)), ((2,), (1, 2)), ((1, 1), (1, 3))):
        inst = gen_2exp_improved(len(d), len(e), d, e)
        assert "achieved height" not in inst.notes
    inst = gen_2exp_improved(1, 1, (1,), (2,))
    assert inst.predicted_height == 10 and inst.notes["achieved height"] == 9


def test_golden_expdfa_tower(data_dir):
    golden = json.loads((data_dir / "figtower_n3.json").read_text())
    produced = json.dumps([list(w) for w in gen_expdfa(3).witness.words])
    assert produced == json.dumps(golden["words"])


def test_parameter_validation():
    with pytest.raises(ValueError):
        gen_thm02B(1, 2)
    with pytest.raises(ValueError):
        gen_lower_bound(1, 1, 1, (1,), ())
    with pytest.raises(ValueError):
        gen_expdfa(-1)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_build_valid_witnesses(name):
    inst = PRESETS[name]()
    assert verify_tower(inst.A, inst.B, inst.witness).valid


def test_preset_values():
    assert PRESETS["cor:quadratic"](n=4).predicted_height == 14
    a2 = PRESETS["cor:A2"](n=3)
    assert (len(a2.A.states), len(a2.B.states)) == (3, 2) and a2.B.deterministic
    cor16 = PRESETS["cor16"](k=2, n=6)
    assert height_of(cor16).height == 20
    assert set(FAMILIES) == {"thm02B", "lower_bound", "2exp_improved", "expdfa", "lower_bound_dfa", "dfas_tight"}


# --------------------------------------------------------------------------
# transforms


def test_normalize_initial():
    a = gen_thm02B(2, 1).A
    one = normalize_initial(a)
    assert len(one.initial) == 1
    for w in ("", "b", "ab", "bab", "bb"):
        assert accepts(one, w) == accepts(a, w)
    assert normalize_initial(one) is one


@pytest.mark.parametrize("transform", [determinize_preserving_v1, determinize_preserving_v2])
@pytest.mark.parametrize("inst", [gen_thm02B(1, 1), gen_thm02B(2, 1), gen_lower_bound(1, 0, 1, (1,), ())], ids=label)
def test_determinizing_transforms_keep_heights(transform, inst):
    a, b = transform(inst.A, inst.B)
    assert a.deterministic and b.deterministic
    assert subseq_height(a, b).height == subseq_height(inst.A, inst.B).height
    m = len(set(inst.A.alphabet) | set(inst.B.alphabet))
    for src, out in ((inst.A, a), (inst.B, b)):
        n = len(normalize_initial(src).states)
        limit = n + n * n if transform is determinize_preserving_v1 else n + m * n
        assert len(out.states) <= limit


def test_binary_codes():
    codes = binary_codes(["c", "a", "b"])
    assert codes == {"a": ("0", "0"), "b": ("0", "1"), "c": ("1", "0")}
    assert binary_codes(["x"]) == {"x": ("0",)}
    assert encode_word(("b", "c"), codes) == ("0", "1", "1", "0")
    with pytest.raises(ValueError):
        binary_codes([])


def test_binarize_keeps_prefix_heights():
    inst = gen_2exp_improved(2, 1, (1, 1), (1,))
    a, b, codes = binarize(inst.A, inst.B)
    assert set(a.alphabet) == {"0", "1"}
    assert prefix_height(a, b).height == prefix_height(inst.A, inst.B).height
    encoded = Tower(tuple(encode_word(w, codes) for w in inst.witness.words), PREFIX, "K")
    assert verify_tower(a, b, encoded).valid


def test_single_letter_binarize_is_a_relabeling():
    only_b = Automaton(["0"], ["b"], ["0"], ["0"], [("0", "b", "0")])
    a, b, codes = binarize(only_b, only_b)
    assert codes == {"b": ("0",)}
    assert len(a.states) == 1
    assert trim(a).transitions == frozenset({("0", "0", "0")})
