"""Towers of prefixes.

Three independent height procedures live here: the alternation graph over
the product of two DFAs, a level fixpoint with prefix closures, and an
exhaustive search over subset configurations.  Infinite towers are
characterized by a pattern of six product states, searched directly on NFAs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .automata import (
    Automaton,
    canonical,
    determinize,
    prefix_closure,
    product,
    product_pairs,
    shortest_extension,
    shortest_word,
    trim,
)
from .results import FINITE, INFINITE, HeightResult
from .verify import PREFIX, Tower
from .words import Word, format_word

__all__ = [
    "AlternationGraph",
    "PatternWitness",
    "alternation_graph",
    "brute_prefix_height",
    "find_pattern",
    "infinite_prefix_tower",
    "prefix_bound_dfa",
    "prefix_bound_nfa",
    "prefix_height",
    "prefix_height_dfa",
    "prefix_height_fixpoint",
]

Pair = tuple[str, str]


def prefix_bound_dfa(n1: int, n2: int) -> int:
    return n1 * n2 // 2 + 1


def prefix_bound_nfa(n1: int, n2: int) -> int:
    if n1 < 1 or n2 < 1:
        raise ValueError("NFA prefix bound needs n1, n2 >= 1")
    return 2 ** (n1 + n2 - 1) - 2 ** (n1 - 1) - 2 ** (n2 - 1) + 1


# --------------------------------------------------------------------------
# the pattern


@dataclass(frozen=True)
class PatternWitness:
    sigma: Pair
    sigma1: Pair
    sigma2: Pair
    tau: Pair
    tau1: Pair
    tau2: Pair
    u: Word
    x: Word
    y: Word
    u1: Word
    u2: Word

    def check(self, a: Automaton, b: Automaton) -> list[str]:
        """Problems with this witness on ``(a, b)``; empty when it is valid."""

        def run(sources: Iterable[Pair], word: Word) -> set[Pair]:
            current = set(sources)
            for x in word:
                current = {
                    (p2, q2)
                    for p, q in current
                    for p2 in a.delta.get((p, x), ())
                    for q2 in b.delta.get((q, x), ())
                }
            return current

        problems = []
        if self.sigma1[0] not in a.accepting:
            problems.append("sigma1 is not accepting in A")
        if self.tau1[1] not in b.accepting:
            problems.append("tau1 is not accepting in B")
        starts = {(p, q) for p in a.initial for q in b.initial}
        if self.sigma not in run(starts, self.u):
            problems.append("sigma is not reached by u")
        after_x = run([self.sigma], self.x)
        if self.sigma1 not in after_x or self.sigma2 not in after_x:
            problems.append("sigma1 and sigma2 are not both reached by x")
        after_y = run([self.tau], self.y)
        if self.tau1 not in after_y or self.tau2 not in after_y:
            problems.append("tau1 and tau2 are not both reached by y")
        if self.tau not in run([self.sigma2], self.u1):
            problems.append("tau is not reached from sigma2 by u1")
        if self.sigma not in run([self.tau2], self.u2):
            problems.append("sigma is not reached from tau2 by u2")
        return problems

    def to_dict(self) -> dict:
        doc = {}
        for name in ("sigma", "sigma1", "sigma2", "tau", "tau1", "tau2"):
            doc[name] = list(getattr(self, name))
        for name in ("u", "x", "y", "u1", "u2"):
            doc[name] = list(getattr(self, name))
        return doc

    def to_dot(self) -> str:
        def node(pair: Pair) -> str:
            return '"' + f"({pair[0]},{pair[1]})".replace('"', '\\"') + '"'

        def label(word: Word) -> str:
            return '"' + format_word(word).replace('"', '\\"') + '"'

        lines = ["digraph pattern {", "  rankdir=LR;", '  __start [shape=point];']
        lines.append(f"  __start -> {node(self.sigma)} [label={label(self.u)}];")
        for target in (self.sigma1, self.sigma2):
            lines.append(f"  {node(self.sigma)} -> {node(target)} [label={label(self.x)}];")
        for target in (self.tau1, self.tau2):
            lines.append(f"  {node(self.tau)} -> {node(target)} [label={label(self.y)}];")
        lines.append(f"  {node(self.sigma2)} -> {node(self.tau)} [label={label(self.u1)}];")
        lines.append(f"  {node(self.tau2)} -> {node(self.sigma)} [label={label(self.u2)}];")
        lines.append(f"  {node(self.sigma1)} [shape=doublecircle];")
        lines.append(f"  {node(self.tau1)} [shape=doublecircle];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _path(parent: dict, node) -> Word:
    word = []
    while parent[node] is not None:
        node, x = parent[node]
        word.append(x)
    return tuple(reversed(word))


def find_pattern(a: Automaton, b: Automaton) -> PatternWitness | None:
    """Search the product of two NFAs for a pattern; None iff no infinite prefix tower.

    Plain reachability comes from a BFS per product state; common-word
    reachability from a BFS over pairs of product states started on the
    diagonal.  Candidates ``(sigma, tau)`` are scanned in sorted order.
    """
    states, edges = product_pairs(a, b)
    starts = [(p, q) for p, q in states if p in a.initial and q in b.initial]
    succ: dict[Pair, list[tuple[str, Pair]]] = {s: [] for s in states}
    for s, x, t in sorted(edges):
        succ[s].append((x, t))

    def bfs(sources):
        parent = {s: None for s in sources}
        queue = deque(sources)
        while queue:
            s = queue.popleft()
            for x, t in succ[s]:
                if t not in parent:
                    parent[t] = (s, x)
                    queue.append(t)
        return parent

    reach = {s: bfs([s]) for s in states}
    from_start = bfs(sorted(starts))
    both = [s for s in from_start if s[0] in a.accepting and s[1] in b.accepting]
    if both:
        # a common word w: the degenerate pattern yields the tower w, w, w, ...
        s = min(both, key=lambda v: (len(_path(from_start, v)), v))
        return PatternWitness(s, s, s, s, s, s, _path(from_start, s), (), (), (), ())

    def common(s: Pair) -> dict:
        parent = {(s, s): None}
        queue = deque([(s, s)])
        while queue:
            s1, s2 = node = queue.popleft()
            for x, t1 in succ[s1]:
                for x2, t2 in succ[s2]:
                    if x2 == x and (t1, t2) not in parent:
                        parent[(t1, t2)] = (node, x)
                        queue.append((t1, t2))
        return parent

    ordered = sorted(states)
    commons = {s: common(s) for s in ordered}
    # the sigma side: common-word successors (sigma1, sigma2) with sigma1 accepting in A
    sigma_side = {
        s: sorted(pair for pair in commons[s] if pair[0][0] in a.accepting) for s in ordered
    }
    tau_side = {
        t: sorted(pair for pair in commons[t] if pair[0][1] in b.accepting) for t in ordered
    }
    for sigma in ordered:
        if sigma not in from_start or not sigma_side[sigma]:
            continue
        for tau in ordered:
            first = next((p for p in sigma_side[sigma] if tau in reach[p[1]]), None)
            if first is None:
                continue
            second = next((p for p in tau_side[tau] if sigma in reach[p[1]]), None)
            if second is None:
                continue
            (s1, s2), (t1, t2) = first, second
            return PatternWitness(
                sigma, s1, s2, tau, t1, t2,
                u=_path(from_start, sigma),
                x=_path(commons[sigma], first),
                y=_path(commons[tau], second),
                u1=_path(reach[s2], tau),
                u2=_path(reach[t2], sigma),
            )
    return None


def infinite_prefix_tower(witness: PatternWitness, k: int) -> list[Word]:
    """First ``k`` words ``ux, ux(u1y), ux(u1y)(u2x), ...`` of the pattern's tower."""
    words = []
    current = witness.u + witness.x
    blocks = (witness.u1 + witness.y, witness.u2 + witness.x)
    for i in range(k):
        words.append(current)
        current = current + blocks[i % 2]
    return words


def _pattern_tower(witness: PatternWitness, size: int) -> Tower:
    return Tower(tuple(infinite_prefix_tower(witness, size)), PREFIX, "K")


# --------------------------------------------------------------------------
# alternation graph


@dataclass
class AlternationGraph:
    """Product states in X = F_A × (Q_B∖F_B) and Y = (Q_A∖F_A) × F_B.

    An edge joins nodes of different classes when the second is reachable
    from the first by a nonempty word.  ``entry`` holds the nodes reachable
    from the initial product state, with the word reaching each.
    """

    nodes: dict[Pair, str]
    edges: dict[Pair, list[Pair]]
    entry: dict[Pair, Word]
    step_word: dict[tuple[Pair, Pair], Word]

    def find_cycle(self) -> list[Pair] | None:
        colour: dict[Pair, int] = {}
        stack_path: list[Pair] = []

        def visit(v: Pair) -> list[Pair] | None:
            colour[v] = 1
            stack_path.append(v)
            for w in self.edges[v]:
                if colour.get(w) == 1:
                    return stack_path[stack_path.index(w):]
                if w not in colour:
                    found = visit(w)
                    if found:
                        return found
            colour[v] = 2
            stack_path.pop()
            return None

        for v in sorted(self.entry):
            if v not in colour:
                found = visit(v)
                if found:
                    return found
        return None

    def longest_path(self) -> list[Pair]:
        """Longest node path from an entry node; the graph must be acyclic."""
        best: dict[Pair, list[Pair]] = {}

        def longest_from(v: Pair) -> list[Pair]:
            if v not in best:
                tail: list[Pair] = []
                for w in self.edges[v]:
                    candidate = longest_from(w)
                    if len(candidate) > len(tail):
                        tail = candidate
                best[v] = [v] + tail
            return best[v]

        path: list[Pair] = []
        for v in sorted(self.entry):
            candidate = longest_from(v)
            if len(candidate) > len(path):
                path = candidate
        return path


def alternation_graph(a: Automaton, b: Automaton) -> AlternationGraph:
    states, edges = product_pairs(a, b)
    succ: dict[Pair, list[tuple[str, Pair]]] = {s: [] for s in states}
    for s, x, t in sorted(edges):
        succ[s].append((x, t))
    nodes = {}
    for p, q in states:
        if p in a.accepting and q not in b.accepting:
            nodes[(p, q)] = "X"
        elif p not in a.accepting and q in b.accepting:
            nodes[(p, q)] = "Y"

    def nonempty_reach(s: Pair) -> dict:
        parent = {}
        queue = deque()
        for x, t in succ[s]:
            if t not in parent:
                parent[t] = (None, x)
                queue.append(t)
        while queue:
            v = queue.popleft()
            for x, t in succ[v]:
                if t not in parent:
                    parent[t] = (v, x)
                    queue.append(t)
        return parent

    def word_to(parent: dict, target: Pair) -> Word:
        word = []
        node = target
        while node is not None:
            node, x = parent[node]
            word.append(x)
        return tuple(reversed(word))

    graph_edges: dict[Pair, list[Pair]] = {}
    step_word = {}
    for v in sorted(nodes):
        parent = nonempty_reach(v)
        graph_edges[v] = []
        for w in sorted(parent):
            if w in nodes and nodes[w] != nodes[v]:
                graph_edges[v].append(w)
                step_word[(v, w)] = word_to(parent, w)
    starts = sorted((p, q) for p, q in states if p in a.initial and q in b.initial)
    parent: dict = {s: None for s in starts}
    queue = deque(starts)
    while queue:
        v = queue.popleft()
        for x, t in succ[v]:
            if t not in parent:
                parent[t] = (v, x)
                queue.append(t)
    entry = {v: _path(parent, v) for v in nodes if v in parent}
    return AlternationGraph(nodes, graph_edges, entry, step_word)


def prefix_height_dfa(a: Automaton, b: Automaton, witness_size: int = 10) -> HeightResult:
    """Exact prefix-tower height between two DFAs via the alternation graph.

    All tower words but the last end in alternating classes of the graph, so
    a cycle means an infinite tower and otherwise the height is the longest
    path plus one final word.  That final word is re-derived, not assumed.
    """
    if not (a.deterministic or not a.states) or not (b.deterministic or not b.states):
        raise ValueError("prefix_height_dfa needs deterministic automata")
    a, b = trim(a), trim(b)
    common = shortest_word(product(a, b))
    if common is not None:
        witness = Tower((common,) * witness_size, PREFIX, "K")
        return HeightResult(INFINITE, None, witness, 0, {"reason": "common word"})
    graph = alternation_graph(a, b)
    notes = {"nodes": len(graph.nodes)}
    cycle = graph.find_cycle()
    if cycle is not None:
        notes["reason"] = "alternation cycle"
        pattern = find_pattern(a, b)
        if pattern is None:
            raise RuntimeError("alternation cycle found but no pattern; the two searches disagree")
        return HeightResult(INFINITE, None, _pattern_tower(pattern, witness_size), 0, notes)
    path = graph.longest_path()
    if not path:
        for side, aut in (("K", a), ("L", b)):
            w = shortest_word(aut)
            if w is not None:
                return HeightResult(FINITE, 1, Tower((w,), PREFIX, side), 0, notes)
        return HeightResult(FINITE, 0, Tower((), PREFIX), 0, notes)
    words = [graph.entry[path[0]]]
    for v, w in zip(path, path[1:]):
        words.append(words[-1] + graph.step_word[(v, w)])
    last_side = graph.nodes[path[-1]]
    opposite = b if last_side == "X" else a
    tail = shortest_extension(opposite, words[-1], nonempty=True)
    if tail is None:
        notes["final word"] = "omitted"
    else:
        words.append(words[-1] + tail)
    start = "K" if graph.nodes[path[0]] == "X" else "L"
    return HeightResult(FINITE, len(words), Tower(tuple(words), PREFIX, start), 0, notes)


def prefix_height(a: Automaton, b: Automaton, witness_size: int = 10) -> HeightResult:
    """Prefix-tower height for NFAs, cross-checked against the pattern search."""
    da, db = trim(determinize(a)), trim(determinize(b))
    result = prefix_height_dfa(da, db, witness_size)
    pattern = find_pattern(trim(a), trim(b))
    if (pattern is not None) != result.infinite:
        raise RuntimeError("pattern search and alternation graph disagree")
    result.notes["dfa sizes"] = [len(da.states), len(db.states)]
    if pattern is not None:
        result.notes["pattern"] = pattern.to_dict()
    return result


# --------------------------------------------------------------------------
# independent procedures


def prefix_height_fixpoint(a: Automaton, b: Automaton, witness_size: int = 10) -> HeightResult:
    """Height by iterating ``T^{r+1} = L ∩ prefix_closure(T^r)`` on both sides."""
    a, b = trim(a), trim(b)
    common = shortest_word(product(a, b))
    if common is not None:
        return HeightResult(INFINITE, None, Tower((common,) * witness_size, PREFIX, "K"), 0)
    cap = prefix_bound_dfa(len(trim(determinize(a)).states), len(trim(determinize(b)).states)) + 1
    levels = [(a, b)]
    previous = None
    iterations = 0
    while True:
        tk, tl = levels[-1]
        if not tk.states and not tl.states:
            break
        current = (canonical(tk), canonical(tl))
        if previous is not None and all(
            (x.states, x.accepting, x.transitions) == (y.states, y.accepting, y.transitions)
            for x, y in zip(current, previous)
        ):
            return HeightResult(INFINITE, None, None, iterations, {"reason": "stable level"})
        if len(levels) > cap:
            return HeightResult(INFINITE, None, None, iterations, {"reason": "level deeper than bound"})
        previous = current
        iterations += 1
        levels.append((trim(product(a, prefix_closure(tl))), trim(product(b, prefix_closure(tk)))))
    height = len(levels) - 1
    if height == 0:
        return HeightResult(FINITE, 0, Tower((), PREFIX), iterations)
    tk, tl = levels[height - 1]
    side, top = ("K", tk) if tk.states else ("L", tl)
    words = [shortest_word(top)]
    current = side
    for r in range(height - 1, 0, -1):
        current = "L" if current == "K" else "K"
        level = levels[r - 1][0 if current == "K" else 1]
        words.append(words[-1] + shortest_extension(level, words[-1]))
    return HeightResult(FINITE, height, Tower(tuple(words), PREFIX, side), iterations)


def brute_prefix_height(a: Automaton, b: Automaton, max_configs: int = 4096) -> int | float:
    """Height by depth-first search over configurations, ``math.inf`` if unbounded.

    A configuration is the pair of state sets both automata reach on a word;
    the best tower continuing a word depends on nothing else.  A cycle among
    configurations that alternate sides yields an infinite tower.
    """
    start = (frozenset(a.initial), frozenset(b.initial))
    letters = sorted(set(a.alphabet) | set(b.alphabet))

    def step(config, x):
        return (a.step(config[0], x), b.step(config[1], x))

    def successors(config) -> set:
        # configurations reachable by a nonempty word
        seen = set()
        queue = deque(step(config, x) for x in letters)
        while queue:
            c = queue.popleft()
            if c in seen or not (c[0] or c[1]):
                continue
            seen.add(c)
            if len(seen) > max_configs:
                raise ValueError(f"brute force limited to {max_configs} configurations")
            queue.extend(step(c, x) for x in letters)
        return seen

    def sides(config) -> str:
        return ("K" if config[0] & a.accepting else "") + ("L" if config[1] & b.accepting else "")

    reachable = successors(start) | {start}
    if any(sides(c) == "KL" for c in reachable):
        return float("inf")
    cache: dict = {}
    on_stack: set = set()

    def rank(config) -> float:
        if config in cache:
            return cache[config]
        if config in on_stack:
            return float("inf")
        on_stack.add(config)
        want = "L" if sides(config) == "K" else "K"
        best = 0
        for c in successors(config):
            if sides(c) == want:
                best = max(best, rank(c))
        on_stack.discard(config)
        cache[config] = 1 + best
        return cache[config]

    return max((rank(c) for c in reachable if sides(c)), default=0)

