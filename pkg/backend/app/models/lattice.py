"""
Finite lattice value types.

Elements are dense indices 0..n-1; `names` keeps the user labels. Values are
built and validated by the lattice service and never mutated afterwards.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.models.errors import UnknownName
from app.services import bitsets


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LatticeCandidate:
    """Raw input to validation: names, a reflexive relation and an optional unary map"""
    names: Tuple[str, ...]
    leq: np.ndarray
    ocomp: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True, eq=False)
class BoundedLattice:
    names: Tuple[str, ...]
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    bot: int
    top: int

    def __post_init__(self):
        for array in (self.leq, self.meet, self.join):
            _frozen(array)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def is_ortho(self) -> bool:
        return False

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, names={list(self.names)})"

    # Python-native views for the hot loops of the searches.

    @cached_property
    def meet_table(self) -> List[List[int]]:
        return self.meet.tolist()

    @cached_property
    def join_table(self) -> List[List[int]]:
        return self.join.tolist()

    @cached_property
    def up(self) -> Tuple[int, ...]:
        """Bitset of ↑a for every element a"""
        return tuple(bitsets.from_indices(np.flatnonzero(row).tolist()) for row in self.leq)

    @cached_property
    def down(self) -> Tuple[int, ...]:
        """Bitset of ↓a for every element a"""
        return tuple(bitsets.from_indices(np.flatnonzero(col).tolist()) for col in self.leq.T)

    @cached_property
    def index_of(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def covers(self) -> List[Tuple[int, int]]:
        """Hasse covers (a, b) with a < b and nothing strictly between, sorted by index"""
        result = []
        for a in range(self.n):
            above = self.up[a] & ~(1 << a)
            for b in bitsets.members(above):
                between = above & self.down[b] & ~(1 << b)
                if not between:
                    result.append((a, b))
        return result

    def le(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def index(self, name: str) -> int:
        try:
            return self.index_of[name]
        except KeyError:
            raise UnknownName(name, self.names) from None

    def name_list(self, elements: Sequence[int]) -> List[str]:
        return [self.names[i] for i in elements]


@dataclass(frozen=True, eq=False)
class Ortholattice(BoundedLattice):
    ocomp: Tuple[int, ...] = field(default=())

    @property
    def is_ortho(self) -> bool:
        return True

    def perp(self, a: int) -> int:
        return self.ocomp[a]


@dataclass(frozen=True, eq=False)
class LatticeHom:
    """Element map between ortholattices preserving meet, orthocomplement and bottom"""
    source: BoundedLattice
    target: BoundedLattice
    map: Tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.n

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def image(self) -> int:
        return bitsets.from_indices(self.map)

    def describe(self) -> str:
        pairs = (f"{self.source.names[a]}↦{self.target.names[b]}" for a, b in enumerate(self.map))
        return ", ".join(pairs)


@dataclass(frozen=True)
class Congruence:
    """Partition of the carrier; `classes[a]` is the class index of a, numbered by first occurrence"""
    classes: Tuple[int, ...]

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Congruence":
        renumber: Dict[int, int] = {}
        return cls(tuple(renumber.setdefault(label, len(renumber)) for label in labels))

    @property
    def num_classes(self) -> int:
        return max(self.classes, default=-1) + 1

    def related(self, a: int, b: int) -> bool:
        return self.classes[a] == self.classes[b]

    def block(self, a: int) -> int:
        """Bitset of the class of a"""
        label = self.classes[a]
        return bitsets.from_indices(i for i, c in enumerate(self.classes) if c == label)

    def blocks(self) -> List[int]:
        result = [0] * self.num_classes
        for i, c in enumerate(self.classes):
            result[c] |= 1 << i
        return result

    def refines(self, other: "Congruence") -> bool:
        return all(other.related(a, b) for a in range(len(self.classes))
                   for b in range(a) if self.related(a, b))
