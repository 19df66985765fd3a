"""Towers of subsequences.

Exact heights come from a fixpoint over level languages: ``T_K^1 = L(K)`` and
``T_K^{r+1} = L(K) ∩ ↓T_L^r`` (symmetrically for ``L``), where ``↓`` is the
downward closure.  A word of ``T_K^r`` starts a tower of height ``r``.  The
chains decrease and, the subsequence order being a well quasi order, they
stabilize; a nonempty stable level means an infinite tower.

The module also carries the cyclic-factorization machinery that bounds
tower heights, and a brute-force oracle that shares none of the fixpoint code.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .automata import (
    Automaton,
    accepts,
    canonical,
    check_word,
    depth_bound,
    downward_closure,
    product,
    shortest_word,
    trim,
)
from .results import FINITE, INFINITE, UNDECIDED, HeightResult
from .verify import SUBSEQUENCE, Tower
from .words import Word, as_word, is_subsequence, leftmost_embedding

__all__ = [
    "Run",
    "Factor",
    "Factorization",
    "accepting_run",
    "brute_subseq_height",
    "cyclic_factorization",
    "has_infinite_subseq_tower",
    "is_nice",
    "is_subsequence",
    "leftmost_embedding",
    "min_accepted_superword",
    "potential",
    "potential_sequence",
    "subseq_bound",
    "subseq_height",
]

LETTER = "letter"
CYCLE = "cycle"


@dataclass(frozen=True)
class Run:
    states: tuple[str, ...]
    word: Word

    def __post_init__(self):
        if len(self.states) != len(self.word) + 1:
            raise ValueError("a run has exactly one more state than its word has letters")

    def is_path_of(self, a: Automaton) -> bool:
        return all(
            self.states[i + 1] in a.delta.get((self.states[i], x), ())
            for i, x in enumerate(self.word)
        )

    def is_accepting_in(self, a: Automaton) -> bool:
        return self.is_path_of(a) and self.states[0] in a.initial and self.states[-1] in a.accepting


def accepting_run(a: Automaton, word: Sequence[str]) -> Run | None:
    """First accepting run in BFS order over (state, position), sorted ids."""
    word = check_word(a, word)
    layers = [sorted(a.initial)]
    parents: list[dict[str, str]] = []
    for x in word:
        parent: dict[str, str] = {}
        for p in layers[-1]:
            for q in a.delta.get((p, x), ()):
                parent.setdefault(q, p)
        parents.append(parent)
        layers.append(sorted(parent))
    finals = [q for q in layers[-1] if q in a.accepting]
    if not finals:
        return None
    states = [finals[0]]
    for parent in reversed(parents):
        states.append(parent[states[-1]])
    return Run(tuple(reversed(states)), word)


# --------------------------------------------------------------------------
# cyclic factorizations


@dataclass(frozen=True)
class Factor:
    segment: Word
    kind: str
    start_state: str
    end_state: str
    witness: str | None
    span: tuple[int, int]

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.segment)


Factorization = tuple[Factor, ...]


def _greedy_factors(states: Sequence[str], word: Sequence[str], offset: int = 0) -> list[Factor]:
    """Greedy cyclic factorization of one path segment.

    Each factor is the longest initial segment of what remains whose path
    contains a cycle over exactly the segment's alphabet; failing that, a
    single letter.
    """
    index = {x: i for i, x in enumerate(sorted(set(word)))}
    masks = [1 << index[x] for x in word]
    m = len(word)
    factors = []
    s = 0
    while s < m:
        # all cycles q_i = q_j inside the remaining path, with their alphabets
        cycles = []
        for i in range(s, m):
            mask = 0
            for j in range(i + 1, m + 1):
                mask |= masks[j - 1]
                if states[i] == states[j]:
                    cycles.append((j, mask, states[i]))
        prefix_masks = [0]
        for j in range(s, m):
            prefix_masks.append(prefix_masks[-1] | masks[j])
        chosen = None
        for t in range(m, s, -1):
            target = prefix_masks[t - s]
            for j, mask, q in cycles:
                if j <= t and mask == target:
                    chosen = (t, q)
                    break
            if chosen:
                break
        if chosen:
            t, q = chosen
            kind, witness = CYCLE, q
        else:
            t, kind, witness = s + 1, LETTER, None
        factors.append(
            Factor(tuple(word[s:t]), kind, states[s], states[t], witness, (offset + s, offset + t))
        )
        s = t
    return factors


def cyclic_factorization(a: Automaton, run: Run) -> Factorization:
    """Greedy (nice) cyclic factorization of ``run.word`` along ``run``."""
    if not run.is_path_of(a):
        raise ValueError("run is not a path of the automaton")
    return tuple(_greedy_factors(run.states, run.word))


def is_nice(factors: Sequence[Factor], n: int) -> bool:
    word = tuple(itertools.chain.from_iterable(f.segment for f in factors))
    cycles = [f for f in factors if f.kind == CYCLE]
    letters = [f for f in factors if f.kind == LETTER]
    if len(cycles) > n or len(letters) > max(n - 1, 0):
        return False
    if len(factors) > 1 and any(not (f.alphabet < frozenset(word)) for f in cycles):
        return False
    return True


def _g(x: int, n: int) -> int:
    return n * (n**x - 1) // (n - 1)


def potential(factors: Sequence[Factor], n: int) -> int:
    """Weight of a factorization: 1 per letter factor, g(|alp|) per cycle factor."""
    if n <= 1:
        raise ValueError("potential needs n > 1")
    return sum(1 if f.kind == LETTER else _g(len(f.alphabet), n) for f in factors)


def _tower_automata(tower: Tower, k: Automaton, l: Automaton) -> list[Automaton]:
    chosen = []
    side = tower.start_side
    for w in tower.words:
        if side is None:
            side = "K" if accepts(k, w) else "L"
        chosen.append(k if side == "K" else l)
        side = "L" if side == "K" else "K"
    return chosen


def potential_sequence(tower: Tower, k: Automaton, l: Automaton, n: int | None = None) -> list[int]:
    """Potentials ``W_1..W_r`` propagated backwards along a subsequence tower.

    The last word is factorized along its first accepting run; each earlier
    word is split by its leftmost embedding into the factor spans of its
    successor and every piece is factorized along its own accepting run.
    ``n`` defaults to the larger trimmed state count.
    """
    if n is None:
        n = max(len(trim(k).states), len(trim(l).states))
    words = tower.words
    if not words:
        return []
    automata = _tower_automata(tower, k, l)
    runs = []
    for i, (w, a) in enumerate(zip(words, automata)):
        run = accepting_run(a, w)
        if run is None:
            raise ValueError(f"word {i + 1} is not accepted by its side of the tower")
        runs.append(run)
    factors = list(cyclic_factorization(automata[-1], runs[-1]))
    values = [potential(factors, n)]
    for i in range(len(words) - 2, -1, -1):
        w, nxt = words[i], words[i + 1]
        positions = leftmost_embedding(w, nxt)
        if positions is None:
            raise ValueError(f"word {i + 1} does not embed into word {i + 2}")
        pieces = []
        cursor = 0
        for f in factors:
            begin = cursor
            while cursor < len(w) and positions[cursor] < f.span[1]:
                cursor += 1
            pieces.append((begin, cursor))
        if cursor != len(w):
            raise ValueError("embedding leaves letters outside the factor spans")
        states = runs[i].states
        factors = []
        for begin, end in pieces:
            factors.extend(_greedy_factors(states[begin : end + 1], w[begin:end], begin))
        values.append(potential(factors, n))
    return values[::-1]


# --------------------------------------------------------------------------
# bound and superwords


def used_letters(a: Automaton) -> set[str]:
    return {x for _, x, _ in a.transitions}


def subseq_bound(a: Automaton, b: Automaton, exact_depth: bool = False) -> int:
    """Upper bound on finite tower heights: (n^(|Σ|+1) - 1)/(n - 1).

    ``n`` is the larger depth of the trimmed automata (their state count
    unless ``exact_depth``) and ``Σ`` the letters they actually use.  A
    depth of 1 gives the limit ``|Σ| + 1``; an empty language gives 1.
    """
    ta, tb = trim(a), trim(b)
    if not ta.states or not tb.states:
        return 1
    n = max(depth_bound(ta, exact=exact_depth), depth_bound(tb, exact=exact_depth))
    m = len(used_letters(ta) | used_letters(tb))
    if n == 1:
        return m + 1
    return (n ** (m + 1) - 1) // (n - 1)


def min_accepted_superword(a: Automaton, word: Sequence[str]) -> Word | None:
    """A shortest accepted word containing ``word`` as a subsequence.

    Layered BFS over (state, matched prefix length); matching greedily is
    complete for embeddings, so the matched length is a function of the path.
    """
    word = as_word(word)
    if not set(word) <= set(a.alphabet):
        return None
    target = len(word)
    start = [(q, 0) for q in sorted(a.initial)]
    parent: dict[tuple[str, int], tuple[tuple[str, int], str] | None] = {s: None for s in start}
    queue = deque(start)
    while queue:
        node = queue.popleft()
        q, i = node
        if i == target and q in a.accepting:
            out = []
            while parent[node] is not None:
                node, x = parent[node]
                out.append(x)
            return tuple(reversed(out))
        for x, r in a.successors[q]:
            nxt = (r, i + 1 if i < target and word[i] == x else i)
            if nxt not in parent:
                parent[nxt] = (node, x)
                queue.append(nxt)
    return None


# --------------------------------------------------------------------------
# exact height by level fixpoint


def _same(a: Automaton, b: Automaton) -> bool:
    return (a.states, a.accepting, a.transitions) == (b.states, b.accepting, b.transitions)


def _chain(first: Word, levels: Sequence[Automaton], start_side: str) -> Tower:
    words = [first]
    for level in levels:
        nxt = min_accepted_superword(level, words[-1])
        if nxt is None:
            raise RuntimeError("witness reconstruction failed; level languages are inconsistent")
        words.append(nxt)
    return Tower(tuple(words), SUBSEQUENCE, start_side)


def subseq_height(
    k: Automaton,
    l: Automaton,
    budget: int | None = None,
    witness_size: int = 10,
    keep_levels: bool = False,
) -> HeightResult:
    """Exact maximal height of a tower of subsequences between L(k) and L(l).

    ``budget`` caps the number of closure iterations; running out gives an
    ``undecided`` verdict.  The infinite verdict comes from a common word, a
    stabilized nonempty level, or a level deeper than the height bound.
    """
    k, l = trim(k), trim(l)
    common = shortest_word(product(k, l))
    if common is not None:
        witness = Tower((common,) * witness_size, SUBSEQUENCE, "K")
        return HeightResult(INFINITE, None, witness, 0, {"reason": "common word"})
    bound = subseq_bound(k, l)
    levels: list[tuple[Automaton, Automaton]] = [(k, l)]
    closures: list[tuple[Automaton, Automaton]] = []
    iterations = 0
    notes = {"bound": bound, "depth": "state count"}
    while True:
        tk, tl = levels[-1]
        if not tk.states and not tl.states:
            break
        r = len(levels)
        if r > bound + 1:
            notes["reason"] = "level deeper than bound"
            return HeightResult(INFINITE, None, _infinite_witness(levels, witness_size), iterations, notes)
        if budget is not None and iterations >= budget:
            notes["reason"] = "budget exhausted"
            return HeightResult(UNDECIDED, None, None, iterations, notes)
        dk = canonical(downward_closure(tk))
        dl = canonical(downward_closure(tl))
        iterations += 1
        if closures and _same(dk, closures[-1][0]) and _same(dl, closures[-1][1]):
            notes["reason"] = "stable level"
            witness = _stable_witness(tk, tl, witness_size)
            return HeightResult(INFINITE, None, witness, iterations, notes)
        closures.append((dk, dl))
        levels.append((trim(product(k, dl)), trim(product(l, dk))))
    height = len(levels) - 1
    if keep_levels:
        notes["levels"] = levels
    if height == 0:
        return HeightResult(FINITE, 0, Tower((), SUBSEQUENCE), iterations, notes)
    tk, tl = levels[height - 1]
    side, top = ("K", tk) if tk.states else ("L", tl)
    chain = []
    current = side
    for r in range(height - 1, 0, -1):
        current = "L" if current == "K" else "K"
        chain.append(levels[r - 1][0 if current == "K" else 1])
    witness = _chain(shortest_word(top), chain, side)
    return HeightResult(FINITE, height, witness, iterations, notes)


def _stable_witness(tk: Automaton, tl: Automaton, size: int) -> Tower:
    side, first = ("K", tk) if tk.states else ("L", tl)
    order = [tl, tk] if side == "K" else [tk, tl]
    return _chain(shortest_word(first), [order[i % 2] for i in range(size - 1)], side)


def _infinite_witness(levels, size: int) -> Tower:
    depth = len(levels)
    tk, tl = levels[-1]
    side = "K" if tk.states else "L"
    chain = []
    current = side
    for r in range(depth - 1, max(depth - size, 0), -1):
        current = "L" if current == "K" else "K"
        chain.append(levels[r - 1][0 if current == "K" else 1])
    return _chain(shortest_word(tk if side == "K" else tl), chain, side)


# --------------------------------------------------------------------------
# independent oracle


def _cycle_pairs(a: Automaton, gamma: frozenset[str]) -> set[tuple[str, str]]:
    """Pairs (p, p') joined by a path over gamma that contains a cycle over exactly gamma."""
    succ = {q: [r for x, r in a.successors[q] if x in gamma] for q in a.states}

    def reach(q: str) -> set[str]:
        seen = {q}
        stack = [q]
        while stack:
            for r in succ[stack.pop()]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    reachable = {q: reach(q) for q in a.states}
    good = []
    for s in a.states:
        component = {u for u in reachable[s] if s in reachable[u]}
        letters = {x for p, x, q in a.transitions if x in gamma and p in component and q in component}
        if letters == gamma:
            good.append(s)
    return {(p, p2) for p in a.states for s in good if s in reachable[p] for p2 in reachable[s]}


def has_infinite_subseq_tower(k: Automaton, l: Automaton) -> bool:
    """Decide infinite towers by a common letter/cycle pattern.

    An infinite tower exists iff both automata have accepting paths that
    follow one sequence of blocks, each block being either a fixed letter or
    a stretch over a sub-alphabet ``Γ`` containing a cycle over exactly
    ``Γ``.  The search runs over pairs of states.
    """
    letters = sorted(set(k.alphabet) | set(l.alphabet))
    gammas = [
        frozenset(c)
        for size in range(1, len(letters) + 1)
        for c in itertools.combinations(letters, size)
    ]
    blocks = [(_cycle_pairs(k, g), _cycle_pairs(l, g)) for g in gammas]
    block_succ_k = [{} for _ in gammas]
    block_succ_l = [{} for _ in gammas]
    for i, (ck, cl) in enumerate(blocks):
        for p, p2 in ck:
            block_succ_k[i].setdefault(p, []).append(p2)
        for q, q2 in cl:
            block_succ_l[i].setdefault(q, []).append(q2)
    start = set(itertools.product(k.initial, l.initial))
    seen = set(start)
    stack = list(start)
    while stack:
        p, q = stack.pop()
        if p in k.accepting and q in l.accepting:
            return True
        nxt = []
        for x in letters:
            for p2 in k.delta.get((p, x), ()):
                for q2 in l.delta.get((q, x), ()):
                    nxt.append((p2, q2))
        for i in range(len(gammas)):
            for p2 in block_succ_k[i].get(p, ()):
                for q2 in block_succ_l[i].get(q, ()):
                    nxt.append((p2, q2))
        for pair in nxt:
            if pair not in seen:
                seen.add(pair)
                stack.append(pair)
    return False


def brute_subseq_height(
    k: Automaton,
    l: Automaton,
    max_len: int = 10,
    max_states: int = 4,
    max_letters: int = 3,
) -> int | float:
    """Height by exhaustive search over words, ``math.inf`` for infinite towers.

    Infinite towers are detected by :func:`has_infinite_subseq_tower`.
    Otherwise every word up to ``max_len`` letters gets the height of the
    highest tower it starts, computed bottom-up from the longest words using
    one-letter insertions.  The result is exact when some maximal tower fits
    within ``max_len``.
    """
    k, l = trim(k), trim(l)
    if len(k.states) > max_states or len(l.states) > max_states:
        raise ValueError(f"brute force limited to {max_states} states per automaton")
    letters = sorted(set(k.alphabet) | set(l.alphabet))
    if len(letters) > max_letters:
        raise ValueError(f"brute force limited to {max_letters} letters")
    if has_infinite_subseq_tower(k, l):
        return math.inf
    in_k: dict[Word, bool] = {}
    in_l: dict[Word, bool] = {}
    by_length: list[list[Word]] = []
    frontier = {(): (frozenset(k.initial), frozenset(l.initial))}
    for n in range(max_len + 1):
        by_length.append(list(frontier))
        nxt = {}
        for w, (sk, sl) in frontier.items():
            in_k[w] = bool(sk & k.accepting)
            in_l[w] = bool(sl & l.accepting)
            if n < max_len:
                for x in letters:
                    nxt[w + (x,)] = (k.step(sk, x), l.step(sl, x))
        frontier = nxt
    sup_k: dict[Word, int] = {}
    sup_l: dict[Word, int] = {}
    best = 0
    for n in range(max_len, -1, -1):
        for w in by_length[n]:
            above_k = above_l = 0
            if n < max_len:
                for i in range(n + 1):
                    for x in letters:
                        v = w[:i] + (x,) + w[i:]
                        above_k = max(above_k, sup_k[v])
                        above_l = max(above_l, sup_l[v])
            rank = 0
            if in_k[w]:
                rank = 1 + above_l
            elif in_l[w]:
                rank = 1 + above_k
            best = max(best, rank)
            sup_k[w] = max(above_k, rank if in_k[w] else 0)
            sup_l[w] = max(above_l, rank if in_l[w] else 0)
    return best
