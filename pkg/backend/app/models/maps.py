"""
Point maps between finite orthospaces
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from app.models.schemas import MapReport
from app.models.space import UvoSpace
from app.services import bitsets


@dataclass(frozen=True, eq=False)
class UvoMap:
    source: UvoSpace
    target: UvoSpace
    map: Tuple[int, ...]
    report: Optional[MapReport] = None

    def __call__(self, x: int) -> int:
        return self.map[x]

    @property
    def verified(self) -> bool:
        return self.report is not None and self.report.verified

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.m

    def preimage(self, subset: int) -> int:
        return bitsets.preimage(subset, self.map)

    def image(self, subset: int) -> int:
        return bitsets.image(subset, self.map)

    def describe(self) -> str:
        return ", ".join(f"{self.source.names[x]}↦{self.target.names[y]}" for x, y in enumerate(self.map))
