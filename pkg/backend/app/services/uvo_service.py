"""
UVO Service - Star calculus, COR families, the UVO-space axioms and the characterization map
"""

import logging
import weakref
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.config import settings
from app.models.errors import NotAnOrthospace, NotClosed, SizeCapExceeded, VerificationFailed, raise_for
from app.models.lattice import LatticeCandidate, Ortholattice
from app.models.maps import UvoMap
from app.models.schemas import AxiomResult, MapReport, UvoAxiomReport
from app.models.space import CorFamily, Orthoframe, PointSet, UvoSpace
from app.services import bitsets
from app.services.filter_service import filter_service
from app.services.lattice_service import lattice_service, transitive_closure

logger = logging.getLogger(__name__)

Pair = Tuple[Union[int, str], Union[int, str]]


class UvoService:
    """Service for finite orthospaces and their compact open orthoregular sets"""

    def __init__(self):
        self.max_size = settings.max_size
        self.subset_sweep_cap = settings.subset_sweep_cap
        self.regular_sweep_cap = settings.regular_sweep_cap
        self._cor = weakref.WeakKeyDictionary()
        self._algebras = weakref.WeakKeyDictionary()

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def make_space(self, names: Sequence[str], leq: np.ndarray, perp: np.ndarray) -> UvoSpace:
        names = tuple(names)
        m = len(names)
        if m > self.max_size:
            raise SizeCapExceeded("space", m, self.max_size)
        leq = np.asarray(leq, dtype=bool)
        perp = np.asarray(perp, dtype=bool)
        raise_for(lattice_service.check_poset(names, leq))
        if perp.shape != (m, m):
            raise NotAnOrthospace.build([], f"orthogonality matrix has shape {perp.shape}", m)
        reflexive = np.flatnonzero(np.diag(perp))
        if reflexive.size:
            x = int(reflexive[0])
            raise NotAnOrthospace.build([names[x]], "orthogonality is not irreflexive", m)
        asymmetric = np.argwhere(perp & ~perp.T)
        if asymmetric.size:
            x, y = (int(v) for v in asymmetric[0])
            raise NotAnOrthospace.build([names[x], names[y]], "orthogonality is not symmetric", m)
        return UvoSpace(names=names, leq=leq.copy(), perp=perp.copy())

    def from_covers(self, names: Sequence[str], covers: Iterable[Pair], perp: Iterable[Pair] = ()) -> UvoSpace:
        """Specialization from cover pairs (closure taken), ⊥ from pairs (symmetric closure taken)"""
        names = tuple(names)
        index = {name: i for i, name in enumerate(names)}
        resolve = lambda v: index[v] if isinstance(v, str) else int(v)  # noqa: E731
        m = len(names)
        relation = np.zeros((m, m), dtype=bool)
        for x, y in covers:
            relation[resolve(x), resolve(y)] = True
        orth = np.zeros((m, m), dtype=bool)
        for x, y in perp:
            orth[resolve(x), resolve(y)] = orth[resolve(y), resolve(x)] = True
        return self.make_space(names, transitive_closure(relation), orth)

    # ------------------------------------------------------------------
    # Subset calculus
    # ------------------------------------------------------------------

    def star(self, X: UvoSpace, subset: PointSet) -> PointSet:
        """Y* = {x : x ⊥ y for all y ∈ Y}"""
        return bitsets.star_of(subset, X.orth, X.universe)

    def is_orthoregular(self, X: UvoSpace, subset: PointSet) -> bool:
        return self.star(X, self.star(X, subset)) == subset

    def diamond(self, X: UvoSpace, subset: PointSet) -> PointSet:
        """◇Y over ⊄⊥: points with a non-orthogonal point in Y"""
        return bitsets.from_indices(x for x in range(X.m) if X.nonorth[x] & subset)

    def box(self, X: UvoSpace, subset: PointSet) -> PointSet:
        return X.universe & ~self.diamond(X, X.universe & ~subset)

    def box_diamond(self, X: UvoSpace, subset: PointSet) -> PointSet:
        return self.box(X, self.diamond(X, subset))

    def is_up_set(self, X: UvoSpace, subset: PointSet) -> bool:
        return all(bitsets.is_subset(X.up[x], subset) for x in bitsets.members(subset))

    def interior(self, X: UvoSpace, subset: PointSet) -> PointSet:
        """Largest up-set inside the subset"""
        return bitsets.from_indices(x for x in range(X.m) if bitsets.is_subset(X.up[x], subset))

    def closure(self, X: UvoSpace, subset: PointSet) -> PointSet:
        """Down-closure, the topological closure in the up-set topology"""
        result = 0
        for x in bitsets.members(subset):
            result |= X.down[x]
        return result

    def up_sets(self, X: UvoSpace) -> Iterator[PointSet]:
        return bitsets.up_sets(X.up)

    def up_sets_bruteforce(self, X: UvoSpace, cap: Optional[int] = None) -> List[PointSet]:
        cap = self.subset_sweep_cap if cap is None else cap
        if X.m > cap:
            raise SizeCapExceeded("up-set sweep", X.m, cap)
        return [u for u in range(1 << X.m) if self.is_up_set(X, u)]

    # ------------------------------------------------------------------
    # COR
    # ------------------------------------------------------------------

    def cor(self, X: UvoSpace, cap: Optional[int] = None) -> CorFamily:
        """Up-sets equal to their double star, by cardinality then bitset value"""
        cap = self.max_size if cap is None else cap
        if X.m > cap:
            raise SizeCapExceeded("COR enumeration", X.m, cap)
        cached = self._cor.get(X)
        if cached is not None:
            return cached
        members = sorted((u for u in self.up_sets(X) if self.is_orthoregular(X, u)), key=bitsets.canonical_key)
        family = CorFamily(members=tuple(members))
        logger.info(f"COR of a {X.m}-point space has {len(family)} members")
        self._cor[X] = family
        return family

    def cor_bruteforce(self, X: UvoSpace, cap: Optional[int] = None) -> List[PointSet]:
        cap = self.subset_sweep_cap if cap is None else cap
        if X.m > cap:
            raise SizeCapExceeded("COR sweep", X.m, cap)
        found = [u for u in range(1 << X.m) if self.is_up_set(X, u) and self.is_orthoregular(X, u)]
        return sorted(found, key=bitsets.canonical_key)

    def is_finite_union_of_cor(self, X: UvoSpace, subset: PointSet) -> bool:
        covered = 0
        for u in self.cor(X).members:
            if bitsets.is_subset(u, subset):
                covered |= u
        return covered == subset

    def ortholattice_from_family(
        self,
        members: Sequence[PointSet],
        star: Callable[[PointSet], PointSet],
        names: Sequence[str],
    ) -> Ortholattice:
        """Family ordered by inclusion with `star` as orthocomplement, validated"""
        index = {u: i for i, u in enumerate(members)}
        k = len(members)
        leq = np.array([[bitsets.is_subset(u, v) for v in members] for u in members], dtype=bool).reshape(k, k)
        ocomp = []
        for u in members:
            image = star(u)
            if image not in index:
                raise NotClosed.build([bitsets.format_set(u, names)], "family is not closed under *", k)
            ocomp.append(index[image])
        labels = tuple(bitsets.format_set(u, names) for u in members)
        return lattice_service.validate_ortholattice(LatticeCandidate(labels, leq, tuple(ocomp)))

    def cor_algebra(self, X: UvoSpace) -> Tuple[Ortholattice, CorFamily]:
        """(COR(X), ⊆, *) as an ortholattice; element i is family member i"""
        cached = self._algebras.get(X)
        if cached is not None:
            return cached
        family = self.cor(X)
        algebra = self.ortholattice_from_family(family.members, lambda u: self.star(X, u), X.names)
        self._algebras[X] = (algebra, family)
        return algebra, family

    # ------------------------------------------------------------------
    # Axioms
    # ------------------------------------------------------------------

    def validate_uvo(self, X: UvoSpace) -> UvoAxiomReport:
        family = self.cor(X)
        members = family.members
        results = []

        t0 = self._check_t0(X)
        results.append(AxiomResult(axiom=1, name="T0", passed=t0 is None, witness=t0))

        closed = self._check_closed(X, family)
        results.append(AxiomResult(axiom=2, name="COR closed under ∩ and *", passed=closed is None, witness=closed))

        basis = None
        for x in range(X.m):
            if not any(u >> x & 1 and bitsets.is_subset(u, X.up[x]) for u in members):
                basis = f"no COR set between {X.names[x]} and {X.format(X.up[x])}"
                break
        results.append(AxiomResult(axiom=3, name="COR is a basis", passed=basis is None, witness=basis))

        if closed is None:
            filters = self._check_filters(X, family)
        else:
            filters = "COR is not an ortholattice"
        results.append(AxiomResult(axiom=4, name="proper filters are points", passed=filters is None,
                                   witness=filters))

        separation = None
        for x, y in X.perp_pairs + [(y, x) for x, y in X.perp_pairs]:
            if not any(u >> x & 1 and self.star(X, u) >> y & 1 for u in members):
                separation = f"{X.names[x]} ⊥ {X.names[y]} not separated"
                break
        results.append(AxiomResult(axiom=5, name="⊥ separated by COR", passed=separation is None,
                                   witness=separation))

        report = UvoAxiomReport(points=X.m, cor_size=len(members), axioms=results)
        if not report.passed:
            logger.debug(f"UVO axioms failed: {[a.axiom for a in report.failures()]}")
        return report

    def _check_t0(self, X: UvoSpace) -> Optional[str]:
        both = X.leq & X.leq.T & ~np.eye(X.m, dtype=bool)
        if both.any():
            x, y = (int(v) for v in np.argwhere(both)[0])
            return f"{X.names[x]} and {X.names[y]} are topologically indistinguishable"
        return None

    def _check_closed(self, X: UvoSpace, family: CorFamily) -> Optional[str]:
        members = family.members
        for i, u in enumerate(members):
            if self.star(X, u) not in family:
                return f"{X.format(u)}* = {X.format(self.star(X, u))} is not in COR"
            for v in members[i + 1:]:
                if u & v not in family:
                    return f"{X.format(u)} ∩ {X.format(v)} is not in COR"
        return None

    def _check_filters(self, X: UvoSpace, family: CorFamily) -> Optional[str]:
        points = {family.containing(x) for x in range(X.m)}
        for u in family.members:
            if not u:
                continue
            generated = bitsets.from_indices(i for i, v in enumerate(family.members) if bitsets.is_subset(u, v))
            if generated not in points:
                return f"filter generated by {X.format(u)} is not COR(x) for any point"
        return None

    # ------------------------------------------------------------------
    # Characterization map
    # ------------------------------------------------------------------

    def char_map(self, X: UvoSpace) -> UvoMap:
        """
        x ↦ COR(x) = {U ∈ COR : x ∈ U}, a point of the dual space of COR(X).
        Verified to be a bijection that preserves and reflects ≤ and ⊥.
        """
        algebra, family = self.cor_algebra(X)
        dual = filter_service.dual_space(algebra)
        mapping = []
        for x in range(X.m):
            point = dual.point_of_filter.get(family.containing(x))
            if point is None:
                logger.warning(f"COR({X.names[x]}) is not a proper filter of COR(X)")
                raise VerificationFailed("characterization map", f"COR({X.names[x]}) is not a proper filter")
            mapping.append(point)
        if len(set(mapping)) != X.m or dual.m != X.m:
            raise VerificationFailed("characterization map", "not a bijection")
        for x in range(X.m):
            for y in range(X.m):
                gx, gy = mapping[x], mapping[y]
                if X.le(x, y) != dual.le(gx, gy):
                    raise VerificationFailed("characterization map", f"order at ({X.names[x]}, {X.names[y]})")
                if X.is_orth(x, y) != dual.is_orth(gx, gy):
                    raise VerificationFailed("characterization map", f"⊥ at ({X.names[x]}, {X.names[y]})")
        report = MapReport(spectral=True, spectral_literal=True, forth=True, back=True,
                           back_literal=True, order_back=True)
        return UvoMap(source=X, target=dual, map=tuple(mapping), report=report)

    # ------------------------------------------------------------------
    # Frames and regular sets
    # ------------------------------------------------------------------

    def principal_points(self, X: UvoSpace) -> PointSet:
        """Points x with an open set containing x and nothing strictly below x; ↑x is tried"""
        principal = 0
        for x in range(X.m):
            strictly_below = X.down[x] & ~(1 << x)
            if X.up[x] >> x & 1 and not X.up[x] & strictly_below:
                principal |= 1 << x
        return principal

    def pframe(self, X: UvoSpace) -> Orthoframe:
        keep = bitsets.to_list(self.principal_points(X))
        position = {x: i for i, x in enumerate(keep)}
        rel = tuple(
            bitsets.from_indices(position[y] for y in bitsets.members(X.orth[x]) if y in position)
            for x in keep
        )
        return Orthoframe(names=tuple(X.names[x] for x in keep), rel=rel)

    def regular_sets(self, frame: Orthoframe) -> List[PointSet]:
        """All Y with Y = Y**: intersections of the sets {y}*"""
        return bitsets.intersection_closure(frame.rel, frame.universe)

    def regular_sets_bruteforce(self, frame: Orthoframe, cap: Optional[int] = None) -> List[PointSet]:
        cap = self.regular_sweep_cap if cap is None else cap
        if frame.m > cap:
            raise SizeCapExceeded("regular set sweep", frame.m, cap)
        found = [y for y in range(1 << frame.m) if frame.star(frame.star(y)) == y]
        return sorted(found, key=bitsets.canonical_key)

    def regular_algebra(self, frame: Orthoframe, cap: Optional[int] = None) -> Tuple[Ortholattice, List[PointSet]]:
        cap = self.regular_sweep_cap if cap is None else cap
        if frame.m > cap:
            logger.warning(f"Refusing the regular sets of a {frame.m}-point frame (cap {cap})")
            raise SizeCapExceeded("regular algebra", frame.m, cap)
        members = self.regular_sets(frame)
        return self.ortholattice_from_family(members, frame.star, frame.names), members

    def is_generated_subframe(self, X: UvoSpace, subset: PointSet, relaxed: bool = True) -> bool:
        """
        Closure of `subset` under ⊄⊥-successors. The relaxed reading only asks
        for a successor inside the subset lying above the outside successor.
        """
        for x in bitsets.members(subset):
            for y in bitsets.members(X.nonorth[x]):
                if subset >> y & 1:
                    continue
                if not relaxed:
                    return False
                if not X.nonorth[x] & subset & X.up[y]:
                    return False
        return True


# Singleton instance
uvo_service = UvoService()
