"""Towers as data, and a literal checker for the tower conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from .automata import Automaton, accepts
from .words import Word, as_word, is_prefix, is_subsequence

SUBSEQUENCE = "subsequence"
PREFIX = "prefix"
ORDERS = (SUBSEQUENCE, PREFIX)

Membership = Union[Automaton, Callable[[Word], bool]]


@dataclass(frozen=True)
class Tower:
    words: tuple[Word, ...]
    order: str = SUBSEQUENCE
    start_side: str | None = None

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}, got {self.order!r}")
        if self.start_side not in (None, "K", "L"):
            raise ValueError(f"start side must be 'K' or 'L', got {self.start_side!r}")
        object.__setattr__(self, "words", tuple(as_word(w) for w in self.words))

    def __len__(self) -> int:
        return len(self.words)

    @property
    def height(self) -> int:
        return len(self.words)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "start": self.start_side,
            "words": [list(w) for w in self.words],
        }

    @classmethod
    def from_dict(cls, doc) -> "Tower":
        if isinstance(doc, list):
            return cls(tuple(as_word(w) for w in doc))
        return cls(
            tuple(as_word(w) for w in doc["words"]),
            doc.get("order", SUBSEQUENCE),
            doc.get("start"),
        )


@dataclass
class TowerReport:
    """Outcome of :func:`verify_tower`.

    ``clause`` names the first violated condition (``"membership"`` for the
    first word, ``"order"`` or ``"alternation"`` for a consecutive pair) and
    ``index`` is the 1-based position of the offending word or pair.
    """

    valid: bool
    height: int
    sides: list[str] = field(default_factory=list)
    clause: str | None = None
    index: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "height": self.height,
            "sides": self.sides,
            "clause": self.clause,
            "index": self.index,
            "message": self.message,
        }


def _predicate(member: Membership) -> Callable[[Word], bool]:
    if isinstance(member, Automaton):
        return lambda w: accepts(member, w)
    return member


def verify_tower(member_k: Membership, member_l: Membership, tower: Tower | Sequence) -> TowerReport:
    """Check every tower clause literally, reporting the first violation."""
    if not isinstance(tower, Tower):
        tower = Tower(tuple(tower))
    in_k, in_l = _predicate(member_k), _predicate(member_l)
    related = is_subsequence if tower.order == SUBSEQUENCE else is_prefix
    words = tower.words
    sides = []
    for w in words:
        sides.append(("K" if in_k(w) else "") + ("L" if in_l(w) else ""))
    report = TowerReport(True, len(words), sides)
    if not words:
        return report

    def fail(clause: str, index: int, message: str) -> TowerReport:
        report.valid, report.clause, report.index, report.message = False, clause, index, message
        return report

    if not sides[0]:
        return fail("membership", 1, "first word is in neither language")
    if tower.start_side is not None and tower.start_side not in sides[0]:
        return fail("membership", 1, f"first word is not in {tower.start_side}")
    for i in range(len(words) - 1):
        if not related(words[i], words[i + 1]):
            return fail("order", i + 1, f"word {i + 1} is not a {tower.order} of word {i + 2}")
        if "K" in sides[i] and "L" not in sides[i + 1]:
            return fail("alternation", i + 1, f"word {i + 1} is in K but word {i + 2} is not in L")
        if "L" in sides[i] and "K" not in sides[i + 1]:
            return fail("alternation", i + 1, f"word {i + 1} is in L but word {i + 2} is not in K")
    return report
