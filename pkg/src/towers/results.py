from __future__ import annotations

from dataclasses import dataclass, field

from .verify import Tower

FINITE = "finite"
INFINITE = "infinite"
UNDECIDED = "undecided"


@dataclass
class HeightResult:
    """Verdict of a height computation.

    For a finite verdict ``witness`` attains ``height``; for an infinite one it
    holds the first few words of an infinite tower.
    """

    verdict: str
    height: int | None = None
    witness: Tower | None = None
    iterations: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE

    @property
    def infinite(self) -> bool:
        return self.verdict == INFINITE

    def to_dict(self, witness: bool = True) -> dict:
        doc = {"verdict": self.verdict, "iterations": self.iterations}
        if self.height is not None:
            doc["height"] = self.height
        if witness and self.witness is not None:
            doc["witness"] = [list(w) for w in self.witness.words]
            doc["start"] = self.witness.start_side
        if self.notes:
            doc["notes"] = self.notes
        return doc

    def __repr__(self) -> str:
        if self.verdict == FINITE:
            return f"HeightResult(finite, height={self.height})"
        return f"HeightResult({self.verdict})"
