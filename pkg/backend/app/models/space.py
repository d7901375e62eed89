"""
Finite orthospace value types.

A finite T0 space is its specialization poset with the up-set topology, so a
space is stored as an order matrix plus the orthogonality matrix. Point sets
are int bitsets (see app.services.bitsets).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.models.errors import UnknownName
from app.models.lattice import BoundedLattice
from app.services import bitsets

PointSet = int


def _rows(matrix: np.ndarray) -> Tuple[int, ...]:
    return tuple(bitsets.from_indices(np.flatnonzero(row).tolist()) for row in matrix)


@dataclass(frozen=True, eq=False)
class Orthoframe:
    """Points with a symmetric relation and no topology"""
    names: Tuple[str, ...]
    rel: Tuple[int, ...]  # rel[x]: bitset of points related to x

    @property
    def m(self) -> int:
        return len(self.names)

    @property
    def universe(self) -> PointSet:
        return bitsets.full(self.m)

    def star(self, subset: PointSet) -> PointSet:
        return bitsets.star_of(subset, self.rel, self.universe)


@dataclass(frozen=True, eq=False)
class UvoSpace:
    names: Tuple[str, ...]
    leq: np.ndarray
    perp: np.ndarray

    def __post_init__(self):
        self.leq.setflags(write=False)
        self.perp.setflags(write=False)

    @property
    def m(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"{type(self).__name__}(m={self.m}, names={list(self.names)})"

    @property
    def universe(self) -> PointSet:
        return bitsets.full(self.m)

    @cached_property
    def up(self) -> Tuple[int, ...]:
        """↑x, the smallest open set containing x"""
        return _rows(self.leq)

    @cached_property
    def down(self) -> Tuple[int, ...]:
        return _rows(self.leq.T)

    @cached_property
    def orth(self) -> Tuple[int, ...]:
        """Points orthogonal to x"""
        return _rows(self.perp)

    @cached_property
    def nonorth(self) -> Tuple[int, ...]:
        """Points not orthogonal to x (the relation ⊄⊥)"""
        universe = self.universe
        return tuple(universe & ~row for row in self.orth)

    @cached_property
    def covers(self) -> List[Tuple[int, int]]:
        """Specialization covers (x, y), x < y, sorted by index"""
        result = []
        for x in range(self.m):
            above = self.up[x] & ~(1 << x)
            for y in bitsets.members(above):
                if not above & self.down[y] & ~(1 << y):
                    result.append((x, y))
        return result

    @cached_property
    def perp_pairs(self) -> List[Tuple[int, int]]:
        """Each orthogonal pair once, as (x, y) with x < y"""
        return [(x, y) for x in range(self.m) for y in bitsets.members(self.orth[x]) if x < y]

    @cached_property
    def index_of(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self.index_of[name]
        except KeyError:
            raise UnknownName(name, self.names) from None

    def le(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def is_orth(self, x: int, y: int) -> bool:
        return bool(self.orth[x] >> y & 1)

    @property
    def frame(self) -> Orthoframe:
        return Orthoframe(names=self.names, rel=self.orth)

    def format(self, subset: PointSet) -> str:
        return bitsets.format_set(subset, self.names)


@dataclass(frozen=True, eq=False)
class DualSpace(UvoSpace):
    """Filter spectrum of a lattice; point i is the proper filter `filters[i]`"""
    lattice: Optional[BoundedLattice] = None
    filters: Tuple[int, ...] = field(default=())
    basic_opens: Tuple[PointSet, ...] = field(default=())

    @cached_property
    def point_of_filter(self) -> Dict[int, int]:
        return {f: i for i, f in enumerate(self.filters)}


@dataclass(frozen=True, eq=False)
class SumSpace(UvoSpace):
    """
    UVO-sum of two spaces. Tags are ("L", x), ("R", y) or ("P", x, y); the
    Left block comes first, then the Right block, then pairs in lexicographic order.
    """
    left: Optional[UvoSpace] = None
    right: Optional[UvoSpace] = None
    tags: Tuple[tuple, ...] = field(default=())

    @cached_property
    def position(self) -> Dict[tuple, int]:
        return {tag: i for i, tag in enumerate(self.tags)}

    def left_point(self, x: int) -> int:
        return x

    def right_point(self, y: int) -> int:
        return self.left.m + y

    def pair_point(self, x: int, y: int) -> int:
        return self.left.m + self.right.m + x * self.right.m + y


@dataclass(frozen=True, eq=False)
class CorFamily:
    """Compact open orthoregular subsets, ordered by cardinality then bitset value"""
    members: Tuple[PointSet, ...]

    @cached_property
    def index_of(self) -> Dict[PointSet, int]:
        return {u: i for i, u in enumerate(self.members)}

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, subset: PointSet) -> bool:
        return subset in self.index_of

    def index(self, subset: PointSet) -> int:
        return self.index_of[subset]

    def containing(self, x: int) -> int:
        """Bitset over members: COR_X(x) = {U ∈ COR : x ∈ U}"""
        return bitsets.from_indices(i for i, u in enumerate(self.members) if u >> x & 1)
