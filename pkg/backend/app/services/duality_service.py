"""
Duality Service - UVO-map validation, the functors h ↦ h₊ and f ↦ f⁺, and the naturality squares
"""

import logging
from typing import List, Optional, Sequence, Tuple

from app.config import settings
from app.models.errors import SizeCapExceeded, VerificationFailed
from app.models.lattice import BoundedLattice, LatticeHom
from app.models.maps import UvoMap
from app.models.schemas import MapReport
from app.models.space import UvoSpace
from app.services import bitsets
from app.services.filter_service import filter_service
from app.services.lattice_service import lattice_service
from app.services.uvo_service import uvo_service

logger = logging.getLogger(__name__)

Check = Tuple[bool, Optional[str]]


class DualityService:
    """Service for morphisms on both sides of the duality"""

    def __init__(self):
        self.hom_search_cap = settings.hom_search_cap
        self.coproduct_cap = settings.coproduct_cap

    # ------------------------------------------------------------------
    # Map properties
    # ------------------------------------------------------------------

    def _pair(self, X: UvoSpace, x: int, y: int) -> str:
        return f"({X.names[x]}, {X.names[y]})"

    def is_spectral_map(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace) -> Check:
        """
        Order preservation, cross-checked against preimages of the COR members of Y.
        Raises VerificationFailed when the two readings disagree, which happens only
        when the COR sets of Y do not separate its order.
        """
        order = self._order_preserving(f, X, Y)
        literal = self._spectral_literal(f, X, Y)
        if order[0] != literal[0]:
            logger.warning(f"Spectral checks disagree: order {order[0]}, COR preimages {literal[0]}")
            raise VerificationFailed("spectral map", order[1] or literal[1] or "")
        return order

    def _order_preserving(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace) -> Check:
        for x in range(X.m):
            for y in bitsets.members(X.up[x]):
                if not Y.le(f[x], f[y]):
                    return False, f"{self._pair(X, x, y)} ordered but images are not"
        return True, None

    def _spectral_literal(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace) -> Check:
        for u in uvo_service.cor(Y).members:
            pre = bitsets.preimage(u, f)
            if not uvo_service.is_up_set(X, pre):
                return False, f"preimage of {Y.format(u)} is not open"
        return True, None

    def _forth(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace) -> Check:
        for x in range(X.m):
            for y in bitsets.members(X.nonorth[x]):
                if Y.is_orth(f[x], f[y]):
                    return False, f"forth fails at {self._pair(X, x, y)}"
        return True, None

    def _back(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace, relaxed: bool) -> Check:
        for x in range(X.m):
            successors = bitsets.members(X.nonorth[x])
            images = [f[y] for y in successors]
            for target in bitsets.members(Y.nonorth[f[x]]):
                if relaxed:
                    hit = any(Y.le(target, v) for v in images)
                else:
                    hit = target in images
                if not hit:
                    return False, f"back fails at {X.names[x]} for {Y.names[target]}"
        return True, None

    def _order_back(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace) -> Check:
        for x in range(X.m):
            reached = {f[y] for y in bitsets.members(X.up[x])}
            for target in bitsets.members(Y.up[f[x]]):
                if target not in reached:
                    return False, f"order back fails at {X.names[x]} for {Y.names[target]}"
        return True, None

    def is_p_morphism_nonperp(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace, relaxed: bool = True) -> Check:
        """Forth and back conditions for the complement of orthogonality"""
        forth = self._forth(f, X, Y)
        if not forth[0]:
            return forth
        return self._back(f, X, Y, relaxed)

    def check_map(self, f: Sequence[int], X: UvoSpace, Y: UvoSpace) -> MapReport:
        if len(f) != X.m or any(not 0 <= v < Y.m for v in f):
            raise ValueError("not a total map between the given spaces")
        spectral = self.is_spectral_map(f, X, Y)
        literal = self._spectral_literal(f, X, Y)
        forth = self._forth(f, X, Y)
        back = self._back(f, X, Y, relaxed=True)
        back_literal = self._back(f, X, Y, relaxed=False)
        order_back = self._order_back(f, X, Y)
        witness = next((w for ok, w in (spectral, forth, back) if not ok), None)
        return MapReport(spectral=spectral[0], spectral_literal=literal[0], forth=forth[0], back=back[0],
                         back_literal=back_literal[0], order_back=order_back[0], witness=witness)

    def make_map(self, X: UvoSpace, Y: UvoSpace, mapping: Sequence[int], require: bool = True) -> UvoMap:
        report = self.check_map(mapping, X, Y)
        if require and not report.verified:
            raise VerificationFailed("UVO-map", report.witness or "")
        return UvoMap(source=X, target=Y, map=tuple(mapping), report=report)

    def identity_map(self, X: UvoSpace) -> UvoMap:
        return self.make_map(X, X, range(X.m))

    def compose_maps(self, f: UvoMap, g: UvoMap) -> UvoMap:
        """g ∘ f (first f, then g)"""
        if f.target is not g.source:
            raise ValueError("maps are not composable")
        return self.make_map(f.source, g.target, [g.map[v] for v in f.map], require=False)

    def is_homeomorphism(self, f: UvoMap) -> bool:
        """Bijection preserving and reflecting both ≤ and ⊥"""
        X, Y = f.source, f.target
        if X.m != Y.m or not f.is_injective:
            return False
        return all(
            X.le(x, y) == Y.le(f.map[x], f.map[y]) and X.is_orth(x, y) == Y.is_orth(f.map[x], f.map[y])
            for x in range(X.m) for y in range(X.m)
        )

    def all_uvo_maps(self, X: UvoSpace, Y: UvoSpace, cap: Optional[int] = None) -> List[UvoMap]:
        """Every verified UVO-map X → Y, by backtracking with order and forth pruning"""
        cap = self.hom_search_cap if cap is None else cap
        if max(X.m, Y.m) > cap:
            raise SizeCapExceeded("UVO-map search", max(X.m, Y.m), cap)
        found: List[UvoMap] = []
        f = [-1] * X.m

        def fits(x: int, v: int) -> bool:
            for u in range(x):
                if X.le(u, x) and not Y.le(f[u], v):
                    return False
                if X.le(x, u) and not Y.le(v, f[u]):
                    return False
                if not X.is_orth(u, x) and Y.is_orth(f[u], v):
                    return False
            return True

        def search(x: int) -> None:
            if x == X.m:
                report = self.check_map(f, X, Y)
                if report.verified:
                    found.append(UvoMap(source=X, target=Y, map=tuple(f), report=report))
                return
            for v in range(Y.m):
                if fits(x, v):
                    f[x] = v
                    search(x + 1)
            f[x] = -1

        search(0)
        logger.debug(f"Found {len(found)} UVO-maps from {X.m} to {Y.m} points")
        return found

    # ------------------------------------------------------------------
    # Functors
    # ------------------------------------------------------------------

    def hom_to_uvomap(self, h: LatticeHom) -> UvoMap:
        """h₊ : X⁺_M → X⁺_L for h : L → M, x ↦ h⁻¹[x]"""
        source_space = filter_service.dual_space(h.target)
        target_space = filter_service.dual_space(h.source)
        mapping = []
        for x, members in enumerate(source_space.filters):
            point = target_space.point_of_filter.get(bitsets.preimage(members, h.map))
            if point is None:
                raise VerificationFailed("h₊", f"preimage of {source_space.names[x]} is not a proper filter")
            mapping.append(point)
        for a in range(h.source.n):
            pre = bitsets.preimage(target_space.basic_opens[a], mapping)
            if pre != source_space.basic_opens[h.map[a]]:
                name = h.source.names[a]
                raise VerificationFailed("h₊", f"h₊⁻¹[{name}^] ≠ h({name})^")
        f = UvoMap(source=source_space, target=target_space, map=tuple(mapping),
                   report=self.check_map(mapping, source_space, target_space))
        if not f.verified:
            logger.warning(f"h₊ is not a UVO-map: {f.report.witness}")
            raise VerificationFailed("h₊", f.report.witness or "")
        return f

    def uvomap_to_hom(self, f: UvoMap) -> LatticeHom:
        """f⁺ : COR(Y) → COR(X) for f : X → Y, U ↦ f⁻¹[U]"""
        X, Y = f.source, f.target
        target_algebra, target_family = uvo_service.cor_algebra(X)
        source_algebra, source_family = uvo_service.cor_algebra(Y)
        mapping = []
        for u in source_family.members:
            pre = f.preimage(u)
            if pre not in target_family:
                raise VerificationFailed("f⁺", f"preimage of {Y.format(u)} is not in COR")
            mapping.append(target_family.index(pre))
        if f.preimage(0) != 0:
            raise VerificationFailed("f⁺", "preimage of ∅ is not ∅")
        for u in source_family.members:
            if f.preimage(uvo_service.star(Y, u)) != uvo_service.star(X, f.preimage(u)):
                raise VerificationFailed("f⁺", f"preimage does not commute with * at {Y.format(u)}")
            for v in source_family.members:
                if f.preimage(u & v) != f.preimage(u) & f.preimage(v):
                    raise VerificationFailed("f⁺", f"preimage does not commute with ∩ at {Y.format(u)}")
        witness = lattice_service.check_hom(source_algebra, target_algebra, mapping)
        if witness is not None:
            raise VerificationFailed("f⁺", f"{witness.law} at {witness.names}")
        return LatticeHom(source=source_algebra, target=target_algebra, map=tuple(mapping))

    def representation_map(self, L: BoundedLattice) -> LatticeHom:
        """a ↦ â, verified to be an isomorphism L → COR(X⁺_L)"""
        X = filter_service.dual_space(L)
        algebra, family = uvo_service.cor_algebra(X)
        mapping = []
        for a in range(L.n):
            index = family.index_of.get(X.basic_opens[a])
            if index is None:
                raise VerificationFailed("representation map", f"{L.names[a]}^ is not in COR")
            mapping.append(index)
        if len(set(mapping)) != L.n or algebra.n != L.n:
            raise VerificationFailed("representation map", "not a bijection")
        witness = lattice_service.check_hom(L, algebra, mapping)
        if witness is not None:
            logger.warning(f"Representation map is not a homomorphism: {witness.law}")
            raise VerificationFailed("representation map", f"{witness.law} at {witness.names}")
        return LatticeHom(source=L, target=algebra, map=tuple(mapping))

    # ------------------------------------------------------------------
    # Naturality
    # ------------------------------------------------------------------

    def check_naturality(self, L: BoundedLattice, h: LatticeHom) -> Check:
        """(h₊)⁺ ∘ rep_L = rep_M ∘ h elementwise"""
        rep_source = self.representation_map(L)
        rep_target = self.representation_map(h.target)
        lifted = self.uvomap_to_hom(self.hom_to_uvomap(h))
        for a in range(L.n):
            if lifted.map[rep_source.map[a]] != rep_target.map[h.map[a]]:
                return False, f"square fails at {L.names[a]}"
        return True, None

    def check_conaturality(self, X: UvoSpace, f: UvoMap) -> Check:
        """(f⁺)₊ ∘ g_X = g_Y ∘ f pointwise"""
        g_source = uvo_service.char_map(X)
        g_target = uvo_service.char_map(f.target)
        lowered = self.hom_to_uvomap(self.uvomap_to_hom(f))
        for x in range(X.m):
            if lowered.map[g_source.map[x]] != g_target.map[f.map[x]]:
                return False, f"square fails at {X.names[x]}"
        return True, None

    def check_contravariance(self, f: UvoMap, g: UvoMap) -> Check:
        """(g ∘ f)⁺ = f⁺ ∘ g⁺ for f : X → Y, g : Y → Z"""
        whole = self.uvomap_to_hom(self.compose_maps(f, g))
        first = self.uvomap_to_hom(g)
        second = self.uvomap_to_hom(f)
        for u in range(whole.source.n):
            if whole.map[u] != second.map[first.map[u]]:
                return False, f"(g∘f)⁺ and f⁺∘g⁺ differ at {whole.source.names[u]}"
        return True, None

    def is_uvo_embedding(self, f: UvoMap) -> Check:
        """Injective, and every f[U] is the trace on f[X] of some COR set of the target"""
        if not f.is_injective:
            return False, "not injective"
        X, Y = f.source, f.target
        whole = f.image(X.universe)
        traces = {whole & v for v in uvo_service.cor(Y).members}
        for u in uvo_service.cor(X).members:
            if f.image(u) not in traces:
                return False, f"f[{X.format(u)}] is not a trace of a COR set"
        return True, None


# Singleton instance
duality_service = DualityService()
