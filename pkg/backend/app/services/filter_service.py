"""
Filter Service - Proper filters, the orthogonality of filters and the dual space X⁺_L
"""

import logging
import weakref
from typing import List, Optional

import numpy as np

from app.config import settings
from app.models.errors import Improper, SizeCapExceeded, VerificationFailed
from app.models.lattice import BoundedLattice
from app.models.schemas import SpectralReport
from app.models.space import DualSpace, PointSet, UvoSpace
from app.services import bitsets

logger = logging.getLogger(__name__)


class FilterService:
    """Service for filter spectra of finite lattices"""

    def __init__(self):
        self.subset_sweep_cap = settings.subset_sweep_cap
        self.open_family_cap = settings.open_family_cap
        self._spaces: "weakref.WeakKeyDictionary[BoundedLattice, DualSpace]" = weakref.WeakKeyDictionary()

    def principal_filters(self, L: BoundedLattice) -> List[int]:
        """↑a for every a ≠ 0, in generator index order"""
        return [L.up[a] for a in range(L.n) if a != L.bot]

    def _is_meet_closed(self, L: BoundedLattice, subset: int) -> bool:
        elems = bitsets.to_list(subset)
        mt = L.meet_table
        return all(subset >> mt[a][b] & 1 for i, a in enumerate(elems) for b in elems[i + 1:])

    def filter_enumeration_oracle(self, L: BoundedLattice) -> List[int]:
        """Every proper filter, found by scanning all up-sets for meet-closure"""
        found = []
        for subset in bitsets.up_sets(L.up):
            if subset and not subset >> L.bot & 1 and self._is_meet_closed(L, subset):
                found.append(subset)
        by_generator = {L.up[a]: a for a in range(L.n)}
        return sorted(found, key=lambda f: (by_generator.get(f, L.n), f))

    def enumerate_proper_filters(self, L: BoundedLattice, self_test: Optional[bool] = None) -> List[int]:
        """
        Proper filters as element bitsets, ordered by generator index.

        With `self_test` (default: when |L| is within the subset sweep cap) the
        principal filters are compared against the closure-search oracle.
        """
        filters = self.principal_filters(L)
        if self_test is None:
            self_test = L.n <= self.subset_sweep_cap
        if self_test:
            oracle = self.filter_enumeration_oracle(L)
            if oracle != filters:
                extra = sorted(set(oracle) - set(filters))
                witness = bitsets.format_set(extra[0], L.names) if extra else "filter lists differ"
                logger.warning(f"Principal filter self-test failed: {witness}")
                raise VerificationFailed("principal filter self-test", witness)
        return filters

    def filter_generated(self, L: BoundedLattice, generators: int) -> int:
        """Smallest filter containing the generator bitset; Improper when it contains 0"""
        m = L.top
        for a in bitsets.members(generators):
            m = L.meet_table[m][a]
        if m == L.bot:
            raise Improper(bitsets.names_of(generators, L.names))
        return L.up[m]

    def ortho_rel(self, L: BoundedLattice, x: int, y: int) -> bool:
        """x ⊥ y iff some a has a⊥ ∈ x and a ∈ y"""
        if not L.is_ortho:
            return False
        return bool(bitsets.image(x, L.ocomp) & y)

    def dual_space(self, L: BoundedLattice) -> DualSpace:
        """
        Proper filters ordered by inclusion, with ⊥ between filters and the basic
        opens â recorded per element. Plain lattices get an empty ⊥.
        """
        cached = self._spaces.get(L)
        if cached is not None:
            return cached
        filters = self.enumerate_proper_filters(L)
        m = len(filters)
        leq = np.zeros((m, m), dtype=bool)
        perp = np.zeros((m, m), dtype=bool)
        for i, x in enumerate(filters):
            for j, y in enumerate(filters):
                leq[i, j] = bitsets.is_subset(x, y)
                perp[i, j] = self.ortho_rel(L, x, y)
        generator = {L.up[a]: a for a in range(L.n)}
        names = tuple(f"↑{L.names[generator[f]]}" for f in filters)
        basic_opens = tuple(
            bitsets.from_indices(i for i, f in enumerate(filters) if f >> a & 1) for a in range(L.n)
        )
        space = DualSpace(names=names, leq=leq, perp=perp, lattice=L,
                          filters=tuple(filters), basic_opens=basic_opens)
        logger.info(f"Dual space of a lattice with {L.n} elements has {m} points")
        self._spaces[L] = space
        return space

    def basic_open(self, L: BoundedLattice, a: int) -> PointSet:
        """â = {x : a ∈ x}"""
        return self.dual_space(L).basic_opens[a]

    def check_order_dual(self, L: BoundedLattice) -> bool:
        """Specialization of X⁺_L equals the order dual of L with its bottom removed"""
        X = self.dual_space(L)
        generators = [a for a in range(L.n) if a != L.bot]
        expected = np.array([[L.le(b, a) for b in generators] for a in generators], dtype=bool)
        return bool(np.array_equal(expected.reshape(X.leq.shape), X.leq))

    def verify_spectral(self, X: UvoSpace, cap: Optional[int] = None) -> SpectralReport:
        """
        Literal spectral-space checks over the materialized open family
        (all up-sets of the specialization order).
        """
        cap = self.open_family_cap if cap is None else cap
        antisymmetric = not np.any(X.leq & X.leq.T & ~np.eye(X.m, dtype=bool))
        opens = []
        for u in bitsets.up_sets(X.up):
            opens.append(u)
            if len(opens) > cap:
                raise SizeCapExceeded("open family", len(opens), cap)
        open_set = set(opens)
        witness = None

        compact = X.universe in open_set
        coherent = True
        for i, u in enumerate(opens):
            for v in opens[i + 1:]:
                if u & v not in open_set:
                    coherent = False
                    witness = f"{X.format(u)} ∩ {X.format(v)} is not open"
                    break
            if not coherent:
                break

        # finite completely prime filters of O(X) are ↑V for V not the union of its proper open subsets
        sober = True
        principal = set(X.up)
        for v in opens:
            if not v:
                continue
            below = 0
            for y in bitsets.members(v):
                if X.up[y] != v:
                    below |= X.up[y]
            if below != v and v not in principal:
                sober = False
                witness = f"completely prime filter generated by {X.format(v)} has no point"
                break

        return SpectralReport(t0=antisymmetric, compact=compact, coherent=coherent, sober=sober,
                              open_count=len(opens), witness=witness)


# Singleton instance
filter_service = FilterService()
