"""Words as tuples of letter names, plus the two orders towers are built on."""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

Word = Tuple[str, ...]

EPSILON: Word = ()


def as_word(value: str | Iterable[str]) -> Word:
    """Coerce ``value`` to a word.

    A plain string is read as a sequence of single-character letters, so
    ``"bab"`` becomes ``("b", "a", "b")``.  Any other iterable is taken as a
    sequence of (possibly multi-character) letter names.
    """
    if isinstance(value, str):
        return tuple(value)
    word = tuple(value)
    for letter in word:
        if not isinstance(letter, str) or not letter:
            raise ValueError(f"letters must be non-empty strings, got {letter!r}")
    return word


def format_word(word: Sequence[str]) -> str:
    if not word:
        return "ε"
    if all(len(x) == 1 for x in word):
        return "".join(word)
    return " ".join(word)


def alphabet_of(word: Sequence[str]) -> frozenset:
    return frozenset(word)


def is_prefix(u: Sequence[str], w: Sequence[str]) -> bool:
    return len(u) <= len(w) and tuple(w[: len(u)]) == tuple(u)


def is_subsequence(u: Sequence[str], w: Sequence[str]) -> bool:
    """True iff ``u`` embeds into ``w`` (greedy left-to-right scan)."""
    it = iter(w)
    return all(any(x == y for y in it) for x in u)


def leftmost_embedding(u: Sequence[str], w: Sequence[str]) -> list[int] | None:
    """0-based positions of the leftmost embedding of ``u`` into ``w``.

    Every position is chosen as small as possible; ``None`` when ``u`` is not
    a subsequence of ``w``.
    """
    positions = []
    j = 0
    for x in u:
        while j < len(w) and w[j] != x:
            j += 1
        if j == len(w):
            return None
        positions.append(j)
        j += 1
    return positions
