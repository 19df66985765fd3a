"""Finite automata over named letters and the standard constructions on them.

Automata are partial: missing transitions are simply absent and no sink state
is ever materialized.  State ids and letters are strings.  Every value is
immutable and every operation returns a fresh automaton.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .words import Word, as_word

Transition = tuple[str, str, str]


class AutomatonError(ValueError):
    """Raised for structurally invalid automata or malformed documents."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Automaton:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: frozenset[str]
    accepting: frozenset[str]
    transitions: frozenset[Transition]

    def __init__(
        self,
        states: Iterable[str],
        alphabet: Iterable[str],
        initial: Iterable[str],
        accepting: Iterable[str],
        transitions: Iterable[Sequence[str]],
    ):
        set_ = object.__setattr__
        set_(self, "states", tuple(dict.fromkeys(states)))
        set_(self, "alphabet", tuple(dict.fromkeys(alphabet)))
        set_(self, "initial", frozenset(initial))
        set_(self, "accepting", frozenset(accepting))
        set_(self, "transitions", frozenset(tuple(t) for t in transitions))
        known = set(self.states)
        letters = set(self.alphabet)
        for q in self.initial | self.accepting:
            if q not in known:
                raise AutomatonError(f"unknown state id {q!r}")
        for p, x, q in self.transitions:
            if p not in known or q not in known:
                raise AutomatonError(f"unknown state id in transition {(p, x, q)!r}")
            if x not in letters:
                raise AutomatonError(f"unknown letter {x!r} in transition {(p, x, q)!r}")

    @cached_property
    def delta(self) -> dict[tuple[str, str], tuple[str, ...]]:
        table: dict[tuple[str, str], list[str]] = {}
        for p, x, q in sorted(self.transitions):
            table.setdefault((p, x), []).append(q)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def successors(self) -> dict[str, tuple[tuple[str, str], ...]]:
        """Outgoing ``(letter, target)`` pairs per state, sorted."""
        out: dict[str, list[tuple[str, str]]] = {q: [] for q in self.states}
        for p, x, q in self.transitions:
            out[p].append((x, q))
        return {q: tuple(sorted(v)) for q, v in out.items()}

    @cached_property
    def deterministic(self) -> bool:
        if len(self.initial) != 1:
            return False
        return all(len(v) == 1 for v in self.delta.values())

    def step(self, current: Iterable[str], letter: str) -> frozenset[str]:
        out: set[str] = set()
        for q in current:
            out.update(self.delta.get((q, letter), ()))
        return frozenset(out)

    def read(self, word: Sequence[str], start: Iterable[str] | None = None) -> frozenset[str]:
        """States reachable from ``start`` (default: initial) under ``word``."""
        current = frozenset(self.initial if start is None else start)
        for x in word:
            if not current:
                break
            current = self.step(current, x)
        return current

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        kind = "DFA" if self.deterministic else "NFA"
        return f"<{kind} {len(self.states)} states over {list(self.alphabet)}>"


def empty_automaton(alphabet: Iterable[str] = ()) -> Automaton:
    return Automaton((), alphabet, (), (), ())


# --------------------------------------------------------------------------
# serialization


def automaton_to_dict(a: Automaton) -> dict:
    order = {q: i for i, q in enumerate(a.states)}
    return {
        "states": list(a.states),
        "alphabet": list(a.alphabet),
        "initial": sorted(a.initial, key=order.__getitem__),
        "accepting": sorted(a.accepting, key=order.__getitem__),
        "transitions": [
            {"from": p, "letter": x, "to": q}
            for p, x, q in sorted(a.transitions, key=lambda t: (order[t[0]], t[1], order[t[2]]))
        ],
    }


def serialize_automaton(a: Automaton, indent: int | None = None) -> str:
    return json.dumps(automaton_to_dict(a), sort_keys=True, indent=indent, ensure_ascii=False)


def automaton_from_dict(doc: Mapping, allow_empty: bool = False) -> Automaton:
    if not isinstance(doc, Mapping):
        raise AutomatonError("document must be a JSON object")
    for key in ("states", "alphabet", "initial", "accepting", "transitions"):
        if key not in doc:
            raise AutomatonError(f"missing key {key!r}")
        if not isinstance(doc[key], list):
            raise AutomatonError(f"{key!r} must be a list")
    states = doc["states"]
    if not states and not allow_empty:
        raise AutomatonError("empty state set", "states")
    seen: set[str] = set()
    for i, q in enumerate(states):
        if not isinstance(q, str):
            raise AutomatonError(f"state id must be a string, got {q!r}", f"states[{i}]")
        if q in seen:
            raise AutomatonError(f"duplicate state id {q!r}", f"states[{i}]")
        seen.add(q)
    letters = set()
    for i, x in enumerate(doc["alphabet"]):
        if not isinstance(x, str) or not x:
            raise AutomatonError(f"letter must be a non-empty string, got {x!r}", f"alphabet[{i}]")
        if x in letters:
            raise AutomatonError(f"duplicate letter {x!r}", f"alphabet[{i}]")
        letters.add(x)
    for key in ("initial", "accepting"):
        for i, q in enumerate(doc[key]):
            if q not in seen:
                raise AutomatonError(f"unknown state id {q!r}", f"{key}[{i}]")
    transitions = []
    for i, t in enumerate(doc["transitions"]):
        where = f"transitions[{i}]"
        if not isinstance(t, Mapping) or set(t) != {"from", "letter", "to"}:
            raise AutomatonError("transition must have exactly 'from', 'letter', 'to'", where)
        if t["from"] not in seen or t["to"] not in seen:
            raise AutomatonError(f"unknown state id in {dict(t)!r}", where)
        if t["letter"] not in letters:
            raise AutomatonError(f"unknown letter {t['letter']!r}", where)
        transitions.append((t["from"], t["letter"], t["to"]))
    return Automaton(states, doc["alphabet"], doc["initial"], doc["accepting"], transitions)


def parse_automaton(text: str, allow_empty: bool = False) -> Automaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AutomatonError(f"malformed document: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from exc
    return automaton_from_dict(doc, allow_empty=allow_empty)


# --------------------------------------------------------------------------
# membership and reachability


def check_word(a: Automaton, word: Sequence[str]) -> Word:
    word = as_word(word)
    letters = set(a.alphabet)
    for i, x in enumerate(word):
        if x not in letters:
            raise ValueError(f"letter {x!r} at position {i} is not in the alphabet {list(a.alphabet)}")
    return word


def accepts(a: Automaton, word: Sequence[str]) -> bool:
    word = check_word(a, word)
    return bool(a.read(word) & a.accepting)


def reachable_from(a: Automaton, sources: Iterable[str]) -> set[str]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for _, q in a.successors[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def coreachable(a: Automaton) -> set[str]:
    back: dict[str, set[str]] = {q: set() for q in a.states}
    for p, _, q in a.transitions:
        back[q].add(p)
    seen = set(a.accepting)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def restrict(a: Automaton, keep: Iterable[str]) -> Automaton:
    keep = set(keep)
    return Automaton(
        [q for q in a.states if q in keep],
        a.alphabet,
        a.initial & keep,
        a.accepting & keep,
        [t for t in a.transitions if t[0] in keep and t[2] in keep],
    )


def trim(a: Automaton) -> Automaton:
    """Keep exactly the states lying on some accepting path."""
    return restrict(a, reachable_from(a, a.initial) & coreachable(a))


def is_empty(a: Automaton) -> bool:
    return not (reachable_from(a, a.initial) & a.accepting)


def shortest_word(a: Automaton, start: Iterable[str] | None = None) -> Word | None:
    """A shortest accepted word (BFS, letters tried in sorted order)."""
    sources = sorted(a.initial if start is None else start)
    parent: dict[str, tuple[str, str] | None] = {q: None for q in sources}
    queue = deque(sources)
    while queue:
        p = queue.popleft()
        if p in a.accepting:
            word = []
            while parent[p] is not None:
                p, x = parent[p]
                word.append(x)
            return tuple(reversed(word))
        for x, q in a.successors[p]:
            if q not in parent:
                parent[q] = (p, x)
                queue.append(q)
    return None


def shortest_extension(a: Automaton, prefix: Sequence[str], nonempty: bool = False) -> Word | None:
    """Shortest ``z`` with ``prefix + z`` accepted (``z`` nonempty on request)."""
    current = a.read(prefix)
    if not nonempty:
        return shortest_word(a, current)
    best: Word | None = None
    for x in sorted(a.alphabet):
        nxt = a.step(current, x)
        if not nxt:
            continue
        rest = shortest_word(a, nxt)
        if rest is not None and (best is None or len(rest) + 1 < len(best)):
            best = (x,) + rest
    return best


def words_upto(alphabet: Sequence[str], length: int) -> Iterator[Word]:
    """All words of length ``0..length`` in length-lexicographic order."""
    letters = sorted(alphabet)
    for n in range(length + 1):
        yield from itertools.product(letters, repeat=n)


# --------------------------------------------------------------------------
# constructions


def pair_name(p: str, q: str) -> str:
    return f"({p},{q})"


def product_pairs(a: Automaton, b: Automaton) -> tuple[list[tuple[str, str]], list[tuple[tuple[str, str], str, tuple[str, str]]]]:
    """Reachable pairs of the synchronous product and the transitions between them."""
    common = sorted(set(a.alphabet) & set(b.alphabet))
    start = sorted(itertools.product(a.initial, b.initial))
    seen = set(start)
    order = list(start)
    edges = []
    queue = deque(start)
    while queue:
        p, q = queue.popleft()
        for x in common:
            for p2 in a.delta.get((p, x), ()):
                for q2 in b.delta.get((q, x), ()):
                    edges.append(((p, q), x, (p2, q2)))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        order.append((p2, q2))
                        queue.append((p2, q2))
    return order, edges


def product(a: Automaton, b: Automaton) -> Automaton:
    """Synchronous product over the union alphabet; accepts L(a) ∩ L(b)."""
    pairs, edges = product_pairs(a, b)
    alphabet = list(a.alphabet) + [x for x in b.alphabet if x not in set(a.alphabet)]
    return Automaton(
        [pair_name(p, q) for p, q in pairs],
        alphabet,
        [pair_name(p, q) for p, q in pairs if p in a.initial and q in b.initial],
        [pair_name(p, q) for p, q in pairs if p in a.accepting and q in b.accepting],
        [(pair_name(*s), x, pair_name(*t)) for s, x, t in edges],
    )


def subset_name(subset: Iterable[str]) -> str:
    return "{" + ",".join(sorted(subset)) + "}"


def determinize(a: Automaton) -> Automaton:
    """Subset construction without the empty subset; the result is trimmed."""
    if a.deterministic:
        return trim(a)
    if not a.initial:
        return empty_automaton(a.alphabet)
    letters = sorted(a.alphabet)
    start = frozenset(a.initial)
    seen = {start: subset_name(start)}
    queue = deque([start])
    transitions = []
    while queue:
        current = queue.popleft()
        for x in letters:
            nxt = a.step(current, x)
            if not nxt:
                continue
            if nxt not in seen:
                seen[nxt] = subset_name(nxt)
                queue.append(nxt)
            transitions.append((seen[current], x, seen[nxt]))
    return trim(
        Automaton(
            seen.values(),
            a.alphabet,
            [seen[start]],
            [name for s, name in seen.items() if s & a.accepting],
            transitions,
        )
    )


def minimize(a: Automaton) -> Automaton:
    """Canonical minimal DFA of a deterministic automaton.

    States are renamed ``"0", "1", ...`` in BFS order from the initial state,
    expanding letters in sorted order, so two automata with the same language
    minimize to identical values (up to the alphabet field).
    """
    if not a.deterministic and a.states:
        raise ValueError("minimize needs a deterministic automaton; determinize first")
    t = trim(a)
    if not t.states:
        return empty_automaton(a.alphabet)
    letters = sorted(t.alphabet)
    move = {(p, x): qs[0] for (p, x), qs in t.delta.items()}
    # Moore refinement; a missing transition goes to an implicit sink (-1).
    block = {q: int(q in t.accepting) for q in t.states}
    count = len(set(block.values()))
    while True:
        signatures: dict[tuple, int] = {}
        new_block = {}
        for q in t.states:
            sig = (block[q],) + tuple(block[move[q, x]] if (q, x) in move else -1 for x in letters)
            new_block[q] = signatures.setdefault(sig, len(signatures))
        block = new_block
        if len(signatures) == count:
            break
        count = len(signatures)
    (start,) = t.initial
    names = {block[start]: "0"}
    queue = deque([start])
    representative = {block[start]: start}
    while queue:
        q = queue.popleft()
        for x in letters:
            if (q, x) in move:
                r = move[q, x]
                if block[r] not in names:
                    names[block[r]] = str(len(names))
                    representative[block[r]] = r
                    queue.append(r)
    states = sorted(names.values(), key=int)
    transitions = set()
    for b, q in representative.items():
        for x in letters:
            if (q, x) in move:
                transitions.add((names[b], x, names[block[move[q, x]]]))
    accepting = [names[b] for b, q in representative.items() if q in t.accepting]
    return Automaton(states, a.alphabet, ["0"], accepting, transitions)


def canonical(a: Automaton) -> Automaton:
    return minimize(determinize(a))


def _structure(a: Automaton) -> tuple:
    return (a.states, a.initial, a.accepting, a.transitions)


def equivalent(a: Automaton, b: Automaton) -> bool:
    """Language equality, decided on canonical minimal DFAs."""
    return _structure(canonical(a)) == _structure(canonical(b))


def downward_closure(a: Automaton) -> Automaton:
    """Automaton for all subsequences of words of L(a).

    Every transition gets a silent shortcut; after eliminating silent moves
    on the trimmed automaton every state is initial and accepting and each
    letter transition may continue to anything reachable from its target.
    """
    t = trim(a)
    closure = {q: reachable_from(t, [q]) for q in t.states}
    transitions = {(p, x, r) for p, x, q in t.transitions for r in closure[q]}
    return Automaton(t.states, a.alphabet, t.states, t.states, transitions)


def prefix_closure(a: Automaton) -> Automaton:
    t = trim(a)
    return Automaton(t.states, a.alphabet, t.initial, t.states, t.transitions)


def intersect_nonempty(a: Automaton, b: Automaton) -> Word | None:
    """A shortest common word of L(a) and L(b), or None."""
    return shortest_word(product(a, b))


# --------------------------------------------------------------------------
# depth


def depth_bound(a: Automaton, exact: bool = False, exact_limit: int = 12) -> int:
    """Depth of ``a``: states on a longest simple path of the trimmed automaton.

    By default the state count is returned, which is an upper bound.  With
    ``exact=True`` the longest simple path is found exhaustively; this is only
    attempted up to ``exact_limit`` states.
    """
    t = trim(a)
    if not exact:
        return len(t.states)
    if len(t.states) > exact_limit:
        raise ValueError(f"exact depth search limited to {exact_limit} states, got {len(t.states)}")
    graph = {q: sorted({r for _, r in t.successors[q]}) for q in t.states}
    best = 0

    def extend(q: str, visited: set[str]) -> None:
        nonlocal best
        best = max(best, len(visited))
        if best == len(t.states):
            return
        for r in graph[q]:
            if r not in visited:
                visited.add(r)
                extend(r, visited)
                visited.remove(r)

    for q in t.states:
        extend(q, {q})
    return best


# --------------------------------------------------------------------------
# rendering


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a: Automaton, name: str = "automaton") -> str:
    """Graphviz rendering; parallel transitions are merged into one edge."""
    lines = [f"digraph {_dot_id(name)} {{"]
    states = sorted(a.states)
    if states:
        lines.append("  rankdir=LR;")
    for i, q in enumerate(sorted(a.initial)):
        lines.append(f'  "__init{i}" [shape=point];')
        lines.append(f'  "__init{i}" -> {_dot_id(q)};')
    for q in states:
        shape = "doublecircle" if q in a.accepting else "circle"
        lines.append(f"  {_dot_id(q)} [shape={shape}];")
    labels: dict[tuple[str, str], list[str]] = {}
    for p, x, q in sorted(a.transitions):
        labels.setdefault((p, q), []).append(x)
    for (p, q), xs in sorted(labels.items()):
        lines.append(f"  {_dot_id(p)} -> {_dot_id(q)} [label={_dot_id(','.join(xs))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
