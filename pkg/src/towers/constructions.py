"""Lower-bound families: automata pairs with their witness towers.

Each generator returns a :class:`FamilyInstance` holding both automata, a
witness tower and the predicted sizes and height.  State ids follow the
usual names of the constructions (``"(3,1)"``, ``"0_A"``, ``"2'"``) so that
generated automata are easy to read next to their pictures.

The module also provides the tower-preserving determinization transforms
and the binary re-encoding of alphabets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .automata import Automaton, determinize, trim
from .verify import PREFIX, SUBSEQUENCE, Tower
from .words import Word

__all__ = [
    "FamilyInstance",
    "FAMILIES",
    "PRESETS",
    "binarize",
    "binary_codes",
    "determinize_preserving_v1",
    "determinize_preserving_v2",
    "encode_word",
    "gen_2exp_improved",
    "gen_dfas_tight",
    "gen_expdfa",
    "gen_lower_bound",
    "gen_lower_bound_dfa",
    "gen_thm02B",
    "normalize_initial",
]


@dataclass
class FamilyInstance:
    family: str
    params: dict
    A: Automaton
    B: Automaton
    witness: Tower
    predicted_height: int
    predicted_states: tuple[int, int]
    predicted_alphabet: int
    notes: dict = field(default_factory=dict)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.A.alphabet) | set(self.B.alphabet)))

    def predictions(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "height": self.predicted_height,
            "states": list(self.predicted_states),
            "alphabet": self.predicted_alphabet,
            "order": self.witness.order,
            "notes": self.notes,
        }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _odd(e: int) -> bool:
    return e >= 1 and e % 2 == 1


def _prefixes(word: Word) -> list[Word]:
    return [word[:i] for i in range(len(word) + 1)]


def _state(k: int, j: int) -> str:
    return f"({k},{j})"


# --------------------------------------------------------------------------
# binary NFA/DFA pair of quadratic height


def _thm02B_automata(d: int, e: int) -> tuple[Automaton, Automaton]:
    a_states = [str(i) for i in range(d)] + ["0_A"]
    a_trans = [(str(i), "a", str(i - 1)) for i in range(1, d)]
    a_trans += [(str(i), "b", str(i)) for i in range(1, d)]
    a_trans += [("0", "b", "0_A"), ("0_A", "b", "0")]
    A = Automaton(a_states, ["a", "b"], [str(i) for i in range(d)], ["0"], a_trans)
    b_states = [str(i) for i in range(e + 1)]
    b_trans = [(str(i), "b", str(i + 1)) for i in range(e)] + [(str(e), "a", "0")]
    B = Automaton(b_states, ["a", "b"], ["0"], [str(i) for i in range(1, e + 1, 2)], b_trans)
    return A, B


def gen_thm02B(d: int, e: int) -> FamilyInstance:
    """NFA with d+1 states and DFA with e+1 states, tower height d(e+1)+2."""
    _require(d >= 1, "d must be at least 1")
    _require(_odd(e), "e must be an odd positive integer")
    A, B = _thm02B_automata(d, e)
    block = ("b",) * e + ("a",)
    w = block * (d - 1) + ("b",) * (e + 1)
    words = _prefixes(w) + [block * (d - 1) + ("b",) * e + ("a", "b")]
    return FamilyInstance(
        "thm02B", {"d": d, "e": e}, A, B, Tower(tuple(words), SUBSEQUENCE, "K"),
        d * (e + 1) + 2, (d + 1, e + 1), 2,
    )


# --------------------------------------------------------------------------
# NFAs over growing alphabets


def _check_vectors(d: Sequence[int], e: Sequence[int], m_a: int, m_b: int) -> None:
    _require(m_a >= 1 and m_b >= 0, "need mA >= 1 and mB >= 0")
    _require(len(d) == m_a, f"d must have {m_a} entries")
    _require(len(e) == m_b, f"e must have {m_b} entries")
    _require(all(x >= 1 for x in list(d) + list(e)), "all d_i and e_i must be at least 1")


def _sigma(k: int) -> list[str]:
    return ["b"] + [f"a_{i}" for i in range(1, k + 1)]


def _gamma(k: int) -> list[str]:
    return [f"c_{i}" for i in range(1, k + 1)]


def _chain_states(sizes: Sequence[int]) -> list[tuple[int, int]]:
    """States (k, j) for k = 0..len-1 and j < sizes[k]."""
    return [(k, j) for k, size in enumerate(sizes) for j in range(size)]


def _counter_transitions(sizes, letter: Callable[[int], str], loops: Callable[[int], list[str]], targets_below):
    """Shared shape of the counting automata.

    Level ``k > 0`` has states (k, d_k-1) ... (k, 0) joined by ``letter(k)``
    and self-loops on ``loops(k)``; from (k, 0) the letter jumps to every
    state returned by ``targets_below(k)``.
    """
    trans = []
    for k in range(1, len(sizes)):
        for j in range(sizes[k]):
            trans += [(_state(k, j), x, _state(k, j)) for x in loops(k)]
            if j > 0:
                trans.append((_state(k, j), letter(k), _state(k, j - 1)))
        trans += [(_state(k, 0), letter(k), t) for t in targets_below(k)]
    return trans


def gen_lower_bound(m_a: int, m_b: int, e0: int, d: Sequence[int], e: Sequence[int]) -> FamilyInstance:
    """NFAs with sum(d)+2 and sum(e)+e0+1 states over m_a+m_b+1 letters."""
    _check_vectors(d, e, m_a, m_b)
    _require(_odd(e0), "e0 must be an odd positive integer")
    d, e = tuple(d), tuple(e)
    sigma, gamma = _sigma(m_a), _gamma(m_b)
    alphabet = sigma + gamma
    da = (1,) + d
    a_nodes = [_state(k, j) for k, j in _chain_states(da)]
    a_trans = _counter_transitions(
        da,
        lambda k: f"a_{k}",
        lambda k: _sigma(k - 1),
        lambda k: [_state(l, j) for l in range(k) for j in range(da[l])],
    )
    a_trans += [(_state(0, 0), "b", "0_A"), ("0_A", "b", _state(0, 0))]
    a_trans += [("0_A", c, q) for c in gamma for q in a_nodes]
    A = Automaton(a_nodes + ["0_A"], alphabet, a_nodes, [_state(0, 0)], a_trans)

    eb = (1,) + e
    upper = [_state(k, j) for k, j in _chain_states(eb) if k > 0]
    chain = [_state(0, i) for i in range(e0 + 1)]
    b_trans = _counter_transitions(
        eb,
        lambda k: f"c_{k}",
        lambda k: sigma + _gamma(k - 1),
        lambda k: [_state(l, j) for l in range(1, k) for j in range(eb[l])] + [_state(0, 0)],
    )
    b_trans += [(_state(0, 0), x, _state(0, 0)) for x in sigma[1:]]
    b_trans += [(_state(0, i), "b", _state(0, i + 1)) for i in range(e0)]
    b_trans += [(_state(0, e0), x, _state(0, 0)) for x in sigma[1:]]
    B = Automaton(
        [_state(0, 0)] + upper + chain[1:], alphabet, [_state(0, 0)] + upper,
        [_state(0, i) for i in range(1, e0 + 1, 2)], b_trans,
    )

    u: Word = ("b",) * e0
    for k in range(1, m_a + 1):
        u = (u + (f"a_{k}",)) * d[k - 1] + u
    for k in range(1, m_b + 1):
        u = (u + (f"c_{k}",)) * e[k - 1] + u
    words = _prefixes(u + ("b",)) + [u + ("a_1", "b")]
    height = math.prod(x + 1 for x in d) * (e0 + 1) * math.prod(x + 1 for x in e) + 2
    return FamilyInstance(
        "lower_bound", {"mA": m_a, "mB": m_b, "e0": e0, "d": list(d), "e": list(e)},
        A, B, Tower(tuple(words), SUBSEQUENCE, "K"),
        height, (sum(d) + 2, sum(e) + e0 + 1), m_a + m_b + 1,
        {"final letter": "a_1"},
    )


def gen_2exp_improved(m_a: int, m_b: int, d: Sequence[int], e: Sequence[int]) -> FamilyInstance:
    """NFAs with sum(d)+1 and sum(e)+2 states; the witness is a prefix tower."""
    _check_vectors(d, e, m_a, m_b)
    d, e = tuple(d), tuple(e)
    sigma, gamma = _sigma(m_a), _gamma(m_b)
    alphabet = sigma + gamma
    da = (1,) + d
    a_nodes = [_state(k, j) for k, j in _chain_states(da)]
    a_trans = _counter_transitions(
        da,
        lambda k: f"a_{k}",
        lambda k: _sigma(k - 1),
        lambda k: [_state(l, j) for l in range(k) for j in range(da[l])],
    )
    a_trans += [(_state(0, 0), c, q) for c in gamma for q in a_nodes if q != _state(0, 0)]
    A = Automaton(a_nodes, alphabet, a_nodes, [_state(0, 0)], a_trans)

    eb = (1,) + e
    b_nodes = [_state(k, j) for k, j in _chain_states(eb)]
    b_trans = _counter_transitions(
        eb,
        lambda k: f"c_{k}",
        lambda k: sigma + _gamma(k - 1),
        lambda k: [_state(l, j) for l in range(k) for j in range(eb[l])] + [_state(0, 1)],
    )
    b_trans += [(_state(0, 0), x, _state(0, 0)) for x in sigma]
    b_trans += [(_state(0, 0), x, _state(0, 1)) for x in gamma + ["b"]]
    B = Automaton(b_nodes + [_state(0, 1)], alphabet, b_nodes, [_state(0, 1)], b_trans)

    x: Word = ()
    for k in range(1, m_a + 1):
        x = (x + ("b", f"a_{k}")) * d[k - 1] + x
    # Repeating x verbatim after c_k would restart B's counters on the
    # leading b, so every repeat drops it.
    if m_b == 0:
        w = x + ("b",)
    else:
        w = x + (("c_1",) + x[1:]) * e[0] + ("c_1", "a_1")
        for k in range(2, m_b + 1):
            w = w + ((f"c_{k}",) + w[1:]) * e[k - 1]
    words = _prefixes(w)
    height = math.prod(v + 1 for v in e) * (2 * math.prod(v + 1 for v in d) - 1) + 1
    notes = {}
    if len(words) != height:
        notes["achieved height"] = len(words)
    return FamilyInstance(
        "2exp_improved", {"mA": m_a, "mB": m_b, "d": list(d), "e": list(e)},
        A, B, Tower(tuple(words), PREFIX, "K"),
        height, (sum(d) + 1, sum(e) + 2), m_a + m_b + 1, notes,
    )


# --------------------------------------------------------------------------
# DFAs


def _a(i: int, j: int) -> str:
    return f"a_{{{i},{j}}}"


def gen_expdfa(n: int) -> FamilyInstance:
    """DFAs with n+1 and 2 states over n(n+1)/2+1 letters, tower height 2^n."""
    _require(n >= 0, "n must be non-negative")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i)]
    alphabet = ["b"] + [_a(i, j) for i, j in pairs]
    trans = [(str(i), _a(i, j), str(j)) for i, j in pairs]
    for k in range(1, n + 1):
        trans += [(str(k), _a(i, j), str(k)) for i, j in pairs if i != k and j < k]
        trans.append((str(k), "b", str(k)))
    A = Automaton([str(i) for i in range(n, -1, -1)], alphabet, [str(n)], ["0"], trans)
    others = alphabet[1:]
    b_trans = [("1", x, "1") for x in others] + [("1", "b", "2"), ("2", "b", "2")]
    b_trans += [("2", x, "1") for x in others]
    B = Automaton(["1", "2"], alphabet, ["1"], ["2"], b_trans)

    def alpha(k: int, j: int) -> Word:
        return tuple(_a(k, i) for i in range(j, -1, -1))

    u: list[Word] = [()]
    for k in range(1, n + 1):
        u.append(u[k - 1] + ("b",) + alpha(k, k - 1) + u[k - 1])

    def w(k: int, i: int) -> Word:
        if i == 0:
            return alpha(k, 0)
        if i == 1:
            return alpha(k, 0) + ("b",)
        j = i.bit_length() - 1
        return alpha(k, j) + u[j - 1] + ("b",) + w(j, i - 2**j)

    words = [w(n, i) for i in range(2**n)] if n > 0 else [()]
    return FamilyInstance(
        "expdfa", {"n": n}, A, B, Tower(tuple(words), SUBSEQUENCE, "K"),
        2**n, (n + 1, 2), n * (n + 1) // 2 + 1,
    )


def gen_lower_bound_dfa(m: int, d: Sequence[int], e: int) -> FamilyInstance:
    """DFAs with 2d_1 + sum_{i>=2}(d_i+1) and e+1 states over m+1 letters."""
    _require(m >= 1, "m must be at least 1")
    _require(len(d) == m, f"d must have {m} entries")
    _require(all(x >= 2 for x in d), "all d_i must be at least 2")
    _require(_odd(e), "e must be an odd positive integer")
    d = tuple(d)
    dd = {i + 1: x for i, x in enumerate(d)}
    sigma = _sigma(m)
    states, trans = [], []
    for i in range(m, 1, -1):
        states += [_state(i, j) for j in range(dd[i] - 1, -1, -1)] + [f"{i}'"]
        for j in range(dd[i]):
            target = _state(i, j - 1) if j > 0 else _state(i - 1, dd[i - 1] - 1)
            trans.append((_state(i, j), f"a_{i}", target))
            if j < dd[i] - 1:
                trans += [(_state(i, j), x, _state(i, j)) for x in _sigma(i - 1)]
        top = _state(i, dd[i] - 1)
        trans += [(top, "a_1", f"{i}'"), (f"{i}'", "a_1", top), (f"{i}'", f"a_{i}", f"{i}'")]
    for j in range(dd[1] - 1, -1, -1):
        states += [_state(1, j), f"(1,{j}')"]
        trans += [(_state(1, j), "b", f"(1,{j}')"), (f"(1,{j}')", "b", _state(1, j))]
        if j >= 1:
            trans.append((f"(1,{j}')", "a_1", _state(1, j - 1)))
    A = Automaton(
        states, sigma, [_state(m, dd[m] - 1)], [_state(1, j) for j in range(dd[1])], trans
    )
    b_trans = [(str(i), "b", str(i + 1)) for i in range(e)]
    b_trans += [(str(e), x, "0") for x in sigma[1:]] + [("0", x, "0") for x in sigma[1:]]
    B = Automaton([str(i) for i in range(e + 1)], sigma, ["0"], [str(i) for i in range(1, e + 1, 2)], b_trans)

    base_u = (("b",) * e + ("a_1",)) * (dd[1] - 1) + ("b",) * e
    tower = _prefixes(base_u) + [base_u + ("b",), base_u + ("a_1",) + ("b",) * e]
    for k in range(2, m + 1):
        last = tower[-1]
        am = f"a_{k}"
        new = []
        for j in range(dd[k]):
            prefix = ("a_1", am, "a_1") * j + (am,) * (dd[k] - j) + (last + (am,)) * j
            new += [prefix + w for w in tower]
        tower = new
    height = ((e + 1) * dd[1] + 2) * math.prod(d[1:])
    return FamilyInstance(
        "lower_bound_dfa", {"m": m, "d": list(d), "e": e}, A, B,
        Tower(tuple(tower), SUBSEQUENCE, "K"), height,
        (2 * dd[1] + sum(x + 1 for x in d[1:]), e + 1), m + 1,
    )


def gen_dfas_tight(d: int, e: int) -> FamilyInstance:
    """2d-state and (e+1)-state binary DFAs with a prefix tower of height d(e+1)+1."""
    _require(d >= 1, "d must be at least 1")
    _require(_odd(e), "e must be an odd positive integer")
    plain = [str(k) for k in range(1, d + 1)]
    primed = [f"{k}'" for k in range(1, d + 1)]
    trans = []
    for k in range(1, d + 1):
        trans += [(str(k), "b", f"{k}'"), (f"{k}'", "b", str(k))]
        if k < d:
            trans += [(str(k), "a", str(k + 1)), (f"{k}'", "a", str(k + 1))]
    A = Automaton(plain + primed, ["a", "b"], ["1"], plain, trans)
    _, B = _thm02B_automata(d, e)
    w = (("b",) * e + ("a",)) * (d - 1) + ("b",) * (e + 1)
    return FamilyInstance(
        "dfas_tight", {"d": d, "e": e}, A, B, Tower(tuple(_prefixes(w)), PREFIX, "K"),
        d * (e + 1) + 1, (2 * d, e + 1), 2,
    )


# --------------------------------------------------------------------------
# tower-preserving transforms


def _fresh(name: str, used: set[str]) -> str:
    while name in used:
        name += "'"
    used.add(name)
    return name


def normalize_initial(a: Automaton) -> Automaton:
    """Equivalent automaton with exactly one initial state (unchanged if it has one)."""
    if len(a.initial) == 1:
        return a
    start = _fresh("init", set(a.states))
    trans = list(a.transitions)
    trans += [(start, x, q) for p, x, q in a.transitions if p in a.initial]
    accepting = set(a.accepting)
    if a.initial & a.accepting:
        accepting.add(start)
    return Automaton([start, *a.states], a.alphabet, [start], accepting, trans)


def _split_transitions(a: Automaton, b: Automaton, key, letter_for):
    """Replace every s -x-> t by s -new-> mid -x-> t, where mid and new depend on key."""
    a, b = normalize_initial(a), normalize_initial(b)
    used_letters = set(a.alphabet) | set(b.alphabet)
    new_letters: dict = {}
    for aut in (a, b):
        for s, x, t in sorted(aut.transitions):
            k = letter_for(s, x, t)
            if k not in new_letters:
                new_letters[k] = _fresh(k[0], used_letters)
    letters = sorted(set(new_letters.values()))
    out = []
    for aut in (a, b):
        used_states = set(aut.states)
        mids: dict = {}
        trans = []
        for s, x, t in sorted(aut.transitions):
            k = key(s, x, t)
            if k not in mids:
                mids[k] = _fresh(k[0], used_states)
            mid = mids[k]
            trans += [(s, new_letters[letter_for(s, x, t)], mid), (mid, x, t)]
        for mid in mids.values():
            trans += [(mid, y, mid) for y in letters]
        alphabet = list(dict.fromkeys([*a.alphabet, *b.alphabet, *letters]))
        out.append(Automaton([*aut.states, *mids.values()], alphabet, aut.initial, aut.accepting, trans))
    return out[0], out[1]


def determinize_preserving_v1(a: Automaton, b: Automaton) -> tuple[Automaton, Automaton]:
    """DFAs with states sigma_{s,t} and letters y_t that keep every tower height."""
    return _split_transitions(
        a, b,
        key=lambda s, x, t: (f"sigma_({s},{t})", s, t),
        letter_for=lambda s, x, t: (f"y_{t}", t),
    )


def determinize_preserving_v2(a: Automaton, b: Automaton) -> tuple[Automaton, Automaton]:
    """DFAs with states sigma_{x,t} and letters x_t that keep every tower height."""
    return _split_transitions(
        a, b,
        key=lambda s, x, t: (f"sigma_({x},{t})", x, t),
        letter_for=lambda s, x, t: (f"{x}_{t}", x, t),
    )


def binary_codes(alphabet: Sequence[str]) -> dict[str, Word]:
    letters = sorted(set(alphabet))
    _require(len(letters) >= 1, "cannot encode an empty alphabet")
    width = max(1, math.ceil(math.log2(len(letters))))
    return {x: tuple(format(i, f"0{width}b")) for i, x in enumerate(letters)}


def encode_word(word: Sequence[str], codes: dict[str, Word]) -> Word:
    return tuple(bit for x in word for bit in codes[x])


def binarize(a: Automaton, b: Automaton) -> tuple[Automaton, Automaton, dict[str, Word]]:
    """Encode both automata over {0, 1} with fixed-length codes in sorted letter order."""
    codes = binary_codes(list(a.alphabet) + list(b.alphabet))
    out = []
    for aut in (a, b):
        used = set(aut.states)
        states = list(aut.states)
        trans = []
        for s, x, t in sorted(aut.transitions):
            code = codes[x]
            path = [s]
            for i in range(1, len(code)):
                path.append(_fresh(f"{s}-{x}-{t}#{i}", used))
            path.append(t)
            states += path[1:-1]
            trans += [(path[i], code[i], path[i + 1]) for i in range(len(code))]
        out.append(Automaton(states, ["0", "1"], aut.initial, aut.accepting, trans))
    return out[0], out[1], codes


# --------------------------------------------------------------------------
# presets


def preset_quadratic(n: int = 4) -> FamilyInstance:
    _require(n >= 2 and n % 2 == 0, "n must be an even integer >= 2")
    return gen_thm02B(n - 1, n - 1)


def preset_exp_cor(m: int = 1, d: Sequence[int] | None = None, e: int = 1) -> FamilyInstance:
    return gen_lower_bound(m, 0, e, d if d is not None else (1,) * m, ())


def preset_corThm3(k: int = 3, n: int = 6) -> FamilyInstance:
    m = k - 1
    width = (n - 2) // m
    _require(k >= 2 and width >= 1, "need k >= 2 and n large enough for one state per counter")
    e = n - 1 if (n - 1) % 2 else n - 2
    return gen_lower_bound(m, 0, e, (width,) * m, ())


def preset_corThm7_2(n: int = 3) -> FamilyInstance:
    _require(n >= 3, "n must be at least 3")
    m = n - 2
    return gen_lower_bound(m, m, 1, (1,) * m, (1,) * m)


def preset_A1(n1: int = 2, n2: int = 2) -> FamilyInstance:
    _require(n1 >= 2 and n2 >= 2, "n1 and n2 must be at least 2")
    return gen_2exp_improved(n1 - 1, n2 - 2, (1,) * (n1 - 1), (1,) * (n2 - 2))


def preset_A2(n: int = 3) -> FamilyInstance:
    _require(n >= 2, "n must be at least 2")
    inst = gen_2exp_improved(n - 1, 0, (1,) * (n - 1), ())
    inst.B = trim(determinize(inst.B))
    inst.notes["B"] = "determinized"
    return inst


def preset_cor16(k: int = 2, n: int = 6) -> FamilyInstance:
    m = k - 1
    width = n // k
    _require(k >= 2 and width >= 2 and (m == 1 or width >= 3), "n too small for the chosen k")
    e = n - 1 if (n - 1) % 2 else n - 2
    return gen_lower_bound_dfa(m, (width,) + (width - 1,) * (m - 1), e)


def preset_dfas(n1: int = 4, n2: int = 4) -> FamilyInstance:
    _require(n1 >= 2 and n1 % 2 == 0 and n2 >= 2 and n2 % 2 == 0, "n1 and n2 must be even and >= 2")
    return gen_dfas_tight(n1 // 2, n2 - 1)


def preset_cor23(m_a: int = 2, m_b: int = 1) -> FamilyInstance:
    inst = gen_2exp_improved(m_a, m_b, (1,) * m_a, (1,) * m_b)
    A, B, codes = binarize(inst.A, inst.B)
    words = tuple(encode_word(w, codes) for w in inst.witness.words)
    return FamilyInstance(
        "cor23", {"mA": m_a, "mB": m_b}, A, B, Tower(words, PREFIX, "K"),
        inst.predicted_height, (len(A.states), len(B.states)), 2,
        {"codes": {x: "".join(c) for x, c in codes.items()}},
    )


FAMILIES: dict[str, Callable[..., FamilyInstance]] = {
    "thm02B": gen_thm02B,
    "lower_bound": gen_lower_bound,
    "2exp_improved": gen_2exp_improved,
    "expdfa": gen_expdfa,
    "lower_bound_dfa": gen_lower_bound_dfa,
    "dfas_tight": gen_dfas_tight,
}

PRESETS: dict[str, Callable[..., FamilyInstance]] = {
    "cor:quadratic": preset_quadratic,
    "thm:exp:cor": preset_exp_cor,
    "corThm3": preset_corThm3,
    "corThm7_2": preset_corThm7_2,
    "cor:A1": preset_A1,
    "cor:A2": preset_A2,
    "cor16": preset_cor16,
    "cor:dfas": preset_dfas,
    "cor23": preset_cor23,
}
