"""
Dictionary Service - Lattice properties and constructions read off the dual space

Completeness formulas, atoms and isolated points, UVO-sums and products,
MacNeille completion, canonical extension and the congruence correspondence.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.models.errors import NotOrthomodular, SizeCapExceeded, VerificationFailed
from app.models.lattice import BoundedLattice, Congruence, LatticeHom, Ortholattice
from app.models.maps import UvoMap
from app.models.space import Orthoframe, PointSet, SumSpace, UvoSpace
from app.services import bitsets
from app.services.duality_service import duality_service
from app.services.filter_service import filter_service
from app.services.lattice_service import lattice_service
from app.services.uvo_service import uvo_service

logger = logging.getLogger(__name__)

Check = Tuple[bool, Optional[str]]


@dataclass(frozen=True)
class Completion:
    """A completion computed two ways, with an isomorphism between them"""
    first: Ortholattice
    second: Ortholattice
    iso: Tuple[int, ...]


@dataclass(frozen=True)
class CanonicalExtension:
    extension: Ortholattice
    embedding: LatticeHom
    members: Tuple[PointSet, ...]
    iso: Tuple[int, ...]


@dataclass(frozen=True)
class CongruenceCorrespondence:
    pairs: Tuple[Tuple[Congruence, PointSet], ...]
    pugs: Tuple[PointSet, ...]


class DictionaryService:
    """Service for the lattice/space dictionary"""

    def __init__(self):
        self.family_cap = settings.family_cap
        self.subset_sweep_cap = settings.subset_sweep_cap
        self.coproduct_cap = settings.coproduct_cap

    # ------------------------------------------------------------------
    # Completeness
    # ------------------------------------------------------------------

    def _subfamilies(self, count: int, cap: int):
        for k in range(cap + 1):
            yield from combinations(range(count), k)

    def meet_formula_check(self, X: UvoSpace, cap: Optional[int] = None) -> Check:
        """Meets in COR(X) are interiors of intersections"""
        cap = self.family_cap if cap is None else cap
        algebra, family = uvo_service.cor_algebra(X)
        members = family.members
        for chosen in self._subfamilies(len(members), cap):
            meet, common = algebra.top, X.universe
            for i in chosen:
                meet = algebra.meet_table[meet][i]
                common &= members[i]
            if members[meet] != uvo_service.interior(X, common):
                return False, f"meet of {[algebra.names[i] for i in chosen]}"
        return True, None

    def star_interior_star(self, X: UvoSpace, subset: PointSet) -> PointSet:
        return uvo_service.star(X, uvo_service.interior(X, uvo_service.star(X, subset)))

    def join_formula_check(self, X: UvoSpace, cap: Optional[int] = None) -> Check:
        """Joins in COR(X) are star-interior-star of unions"""
        cap = self.family_cap if cap is None else cap
        algebra, family = uvo_service.cor_algebra(X)
        members = family.members
        for chosen in self._subfamilies(len(members), cap):
            join, union = algebra.bot, 0
            for i in chosen:
                join = algebra.join_table[join][i]
                union |= members[i]
            if members[join] != self.star_interior_star(X, union):
                return False, f"join of {[algebra.names[i] for i in chosen]}"
        return True, None

    def is_complete_uvo(self, X: UvoSpace, cap: Optional[int] = None) -> bool:
        cap = self.subset_sweep_cap if cap is None else cap
        if X.m > cap:
            raise SizeCapExceeded("completeness check", X.m, cap)
        family = uvo_service.cor(X)
        return all(self.star_interior_star(X, u) in family for u in uvo_service.up_sets(X))

    # ------------------------------------------------------------------
    # Atoms
    # ------------------------------------------------------------------

    def isolated_points(self, X: UvoSpace) -> PointSet:
        """Points x with {x} open, i.e. the maximal points"""
        return bitsets.from_indices(x for x in range(X.m) if X.up[x] == 1 << x)

    def atoms_bijection(self, L: BoundedLattice) -> Dict[int, int]:
        """Atom a ↦ point ↑a, verified to be a bijection onto the isolated points"""
        X = filter_service.dual_space(L)
        isolated = self.isolated_points(X)
        mapping = {a: X.point_of_filter[L.up[a]] for a in lattice_service.atoms(L)}
        image = bitsets.from_indices(mapping.values())
        if len(set(mapping.values())) != len(mapping):
            raise VerificationFailed("atoms bijection", "not injective")
        if image != isolated:
            stray = image ^ isolated
            raise VerificationFailed("atoms bijection", f"mismatch at {X.format(stray)}")
        return mapping

    def is_atomless(self, L: BoundedLattice) -> bool:
        X = filter_service.dual_space(L)
        atomless = self.isolated_points(X) == 0
        if atomless != (not lattice_service.atoms(L)):
            raise VerificationFailed("atomless", "isolated points disagree with atoms")
        return atomless

    def is_atomic(self, L: BoundedLattice) -> bool:
        """Closure of the isolated points is the whole space"""
        X = filter_service.dual_space(L)
        atomic = uvo_service.closure(X, self.isolated_points(X)) == X.universe
        atoms = bitsets.from_indices(lattice_service.atoms(L))
        direct = all(L.down[a] & atoms for a in range(L.n) if a != L.bot)
        if atomic != direct:
            raise VerificationFailed("atomic", "closure of isolated points disagrees with atoms")
        return atomic

    # ------------------------------------------------------------------
    # Sums and products
    # ------------------------------------------------------------------

    def uvo_sum(self, X: UvoSpace, Y: UvoSpace, verify: bool = True) -> SumSpace:
        """
        X ∪ Y ∪ (X×Y) with the sum orthogonality and the order Ω_≤. With `verify`
        the order is compared with the specialization of the generated topology.
        """
        tags = [("L", x) for x in range(X.m)] + [("R", y) for y in range(Y.m)]
        tags += [("P", x, y) for x in range(X.m) for y in range(Y.m)]
        k = len(tags)
        leq = np.zeros((k, k), dtype=bool)
        perp = np.zeros((k, k), dtype=bool)
        for i, s in enumerate(tags):
            for j, t in enumerate(tags):
                leq[i, j] = self._sum_le(X, Y, s, t)
                perp[i, j] = self._sum_perp(X, Y, s, t)
        perp |= perp.T
        clash = bool(set(X.names) & set(Y.names))
        names = tuple(self._tag_name(X, Y, t, clash) for t in tags)
        space = SumSpace(names=names, leq=leq, perp=perp, left=X, right=Y, tags=tuple(tags))
        if verify:
            ok, witness = self.sum_order_check(space)
            if not ok:
                logger.warning(f"Sum order differs from the generated topology at {witness}")
                raise VerificationFailed("UVO-sum order", witness)
        logger.info(f"UVO-sum of {X.m} and {Y.m} points has {space.m} points")
        return space

    def _tag_name(self, X: UvoSpace, Y: UvoSpace, tag: tuple, clash: bool) -> str:
        if tag[0] == "L":
            return f"l.{X.names[tag[1]]}" if clash else X.names[tag[1]]
        if tag[0] == "R":
            return f"r.{Y.names[tag[1]]}" if clash else Y.names[tag[1]]
        return f"<{X.names[tag[1]]},{Y.names[tag[2]]}>"

    def _sum_le(self, X: UvoSpace, Y: UvoSpace, s: tuple, t: tuple) -> bool:
        if s[0] == "L":
            return t[0] == "L" and X.le(s[1], t[1])
        if s[0] == "R":
            return t[0] == "R" and Y.le(s[1], t[1])
        if t[0] == "L":
            return X.le(s[1], t[1])
        if t[0] == "R":
            return Y.le(s[2], t[1])
        return X.le(s[1], t[1]) and Y.le(s[2], t[2])

    def _sum_perp(self, X: UvoSpace, Y: UvoSpace, s: tuple, t: tuple) -> bool:
        """One direction of the generating relation; symmetric closure taken by the caller"""
        if s[0] == "L" and t[0] == "L":
            return X.is_orth(s[1], t[1])
        if s[0] == "R" and t[0] == "R":
            return Y.is_orth(s[1], t[1])
        if s[0] == "L" and t[0] == "R":
            return True
        if s[0] == "P" and t[0] == "L":
            return X.is_orth(s[1], t[1])
        if s[0] == "P" and t[0] == "R":
            return Y.is_orth(s[2], t[1])
        if s[0] == "P" and t[0] == "P":
            return X.is_orth(s[1], t[1]) and Y.is_orth(s[2], t[2])
        return False

    def sum_generators(self, S: SumSpace) -> List[PointSet]:
        """U ∪ V ∪ (U×V) for U ∈ COR(X), V ∈ COR(Y), empty members included"""
        X, Y = S.left, S.right
        result = []
        for u in uvo_service.cor(X).members:
            for v in uvo_service.cor(Y).members:
                w = 0
                for x in bitsets.members(u):
                    w |= 1 << S.left_point(x)
                    for y in bitsets.members(v):
                        w |= 1 << S.pair_point(x, y)
                for y in bitsets.members(v):
                    w |= 1 << S.right_point(y)
                result.append(w)
        return result

    def sum_order_check(self, S: SumSpace) -> Check:
        """The stored order equals the specialization order of the generated topology"""
        generators = self.sum_generators(S)
        for z in range(S.m):
            for w in range(S.m):
                generated = all(g >> w & 1 for g in generators if g >> z & 1)
                if generated != S.le(z, w):
                    return False, f"({S.names[z]}, {S.names[w]})"
        return True, None

    def sum_cor_product_check(self, X: UvoSpace, Y: UvoSpace) -> Check:
        """COR(X+Y) ≅ COR(X) × COR(Y)"""
        S = self.uvo_sum(X, Y)
        summed, _ = uvo_service.cor_algebra(S)
        left, _ = uvo_service.cor_algebra(X)
        right, _ = uvo_service.cor_algebra(Y)
        prod = lattice_service.product(left, right)
        if lattice_service.find_isomorphism(summed, prod) is None:
            return False, f"COR of the sum has {summed.n} elements, product has {prod.n}"
        return True, None

    def product_sum_homeo(self, L: Ortholattice, M: Ortholattice) -> UvoMap:
        """Verified homeomorphism X⁺_{L×M} → X⁺_L + X⁺_M that is also a ⊥-isomorphism"""
        P = lattice_service.product(L, M)
        XP = filter_service.dual_space(P)
        XL = filter_service.dual_space(L)
        XM = filter_service.dual_space(M)
        S = self.uvo_sum(XL, XM)
        mapping = []
        for members in XP.filters:
            first = second = 0
            for e in bitsets.members(members):
                first |= 1 << (e // M.n)
                second |= 1 << (e % M.n)
            if second >> M.bot & 1:
                mapping.append(S.left_point(XL.point_of_filter[first]))
            elif first >> L.bot & 1:
                mapping.append(S.right_point(XM.point_of_filter[second]))
            else:
                mapping.append(S.pair_point(XL.point_of_filter[first], XM.point_of_filter[second]))
        f = duality_service.make_map(XP, S, mapping, require=False)
        if not duality_service.is_homeomorphism(f):
            logger.warning("Product/sum map is not a homeomorphism")
            raise VerificationFailed("product-sum homeomorphism", f.describe())
        return f

    def coprojections(self, S: SumSpace) -> Tuple[UvoMap, UvoMap]:
        left = duality_service.make_map(S.left, S, [S.left_point(x) for x in range(S.left.m)])
        right = duality_service.make_map(S.right, S, [S.right_point(y) for y in range(S.right.m)])
        return left, right

    def pairing(self, S: SumSpace, f: UvoMap, g: UvoMap) -> UvoMap:
        """⟨f, g⟩ : X+Y → Z, with Pair(x, y) sent to the point whose COR-filter is COR(f x) ∩ COR(g y)"""
        Z = f.target
        family = uvo_service.cor(Z)
        by_filter = {family.containing(z): z for z in range(Z.m)}
        mapping = [0] * S.m
        for i, tag in enumerate(S.tags):
            if tag[0] == "L":
                mapping[i] = f.map[tag[1]]
            elif tag[0] == "R":
                mapping[i] = g.map[tag[1]]
            else:
                common = family.containing(f.map[tag[1]]) & family.containing(g.map[tag[2]])
                if common not in by_filter:
                    raise VerificationFailed("pairing", f"no point for {S.names[i]}")
                mapping[i] = by_filter[common]
        return duality_service.make_map(S, Z, mapping)

    def coproduct_check(self, X: UvoSpace, Y: UvoSpace, Z: UvoSpace, cap: Optional[int] = None) -> Check:
        """
        Every pair of UVO-maps X → Z, Y → Z factors through the sum by a unique
        UVO-map commuting with both coprojections.
        """
        cap = self.coproduct_cap if cap is None else cap
        if Z.m > cap:
            raise SizeCapExceeded("coproduct check", Z.m, cap)
        S = self.uvo_sum(X, Y)
        left, right = self.coprojections(S)
        pair_points = [i for i, tag in enumerate(S.tags) if tag[0] == "P"]
        for f in duality_service.all_uvo_maps(X, Z):
            for g in duality_service.all_uvo_maps(Y, Z):
                p = self.pairing(S, f, g)
                if duality_service.compose_maps(left, p).map != f.map:
                    return False, f"pairing does not restrict to f = [{f.describe()}]"
                if duality_service.compose_maps(right, p).map != g.map:
                    return False, f"pairing does not restrict to g = [{g.describe()}]"
                candidate = list(p.map)
                for values in cartesian(range(Z.m), repeat=len(pair_points)):
                    for i, v in zip(pair_points, values):
                        candidate[i] = v
                    if tuple(candidate) == p.map:
                        continue
                    if duality_service.check_map(candidate, S, Z).verified:
                        return False, f"second factorization [{', '.join(Z.names[v] for v in candidate)}]"
        return True, None

    def subalgebra_image_check(self, L: Ortholattice, generators: Sequence[int]) -> Check:
        """The inclusion of a generated subalgebra dualizes to a surjective UVO-map"""
        sub, inclusion = lattice_service.subalgebra_generated(L, bitsets.from_indices(generators))
        f = duality_service.hom_to_uvomap(inclusion)
        if not f.is_surjective:
            return False, f"inclusion of {list(sub.names)} does not dualize to a surjection"
        lifted = duality_service.uvomap_to_hom(f)
        if not lifted.is_injective:
            return False, "f⁺ of the dual surjection is not injective"
        return True, None

    # ------------------------------------------------------------------
    # Completions
    # ------------------------------------------------------------------

    def _upper(self, L: BoundedLattice, subset: int) -> int:
        result = bitsets.full(L.n)
        for a in bitsets.members(subset):
            result &= L.up[a]
        return result

    def _lower(self, L: BoundedLattice, subset: int) -> int:
        result = bitsets.full(L.n)
        for a in bitsets.members(subset):
            result &= L.down[a]
        return result

    def is_normal(self, L: BoundedLattice, subset: int) -> bool:
        return self._lower(L, self._upper(L, subset)) == subset

    def normal_subsets(self, L: BoundedLattice) -> List[int]:
        """Norm(L): the sets A = A^{ul}, as intersections of principal down-sets"""
        members = bitsets.intersection_closure(L.down, bitsets.full(L.n))
        for a in members:
            if not self.is_normal(L, a):
                raise VerificationFailed("normal subsets", bitsets.format_set(a, L.names))
        return members

    def normal_subsets_bruteforce(self, L: BoundedLattice, cap: Optional[int] = None) -> List[int]:
        cap = self.subset_sweep_cap if cap is None else cap
        if L.n > cap:
            raise SizeCapExceeded("normal subset sweep", L.n, cap)
        return sorted((a for a in range(1 << L.n) if self.is_normal(L, a)), key=bitsets.canonical_key)

    def normal_algebra(self, L: Ortholattice) -> Ortholattice:
        """Norm(L) ordered by inclusion, A ↦ {a⊥ : a ∈ A^u} as orthocomplement"""
        members = self.normal_subsets(L)
        return uvo_service.ortholattice_from_family(
            members, lambda a: bitsets.image(self._upper(L, a), L.ocomp), L.names
        )

    def maclaren_frame(self, L: Ortholattice, drop_bottom: bool) -> Orthoframe:
        """Elements related by a ⫠ b iff a ≤ b⊥, optionally without 0"""
        keep = [a for a in range(L.n) if not (drop_bottom and a == L.bot)]
        position = {a: i for i, a in enumerate(keep)}
        rel = tuple(
            bitsets.from_indices(position[b] for b in bitsets.members(L.down[L.ocomp[a]]) if b in position)
            for a in keep
        )
        return Orthoframe(names=tuple(L.names[a] for a in keep), rel=rel)

    def maclaren_regular_algebras(self, L: Ortholattice) -> Tuple[Ortholattice, Ortholattice]:
        """R(L, ⫠) and R(L⁻, ⫠), checked to correspond by U ↦ U ∖ {0}"""
        full_frame = self.maclaren_frame(L, drop_bottom=False)
        reduced_frame = self.maclaren_frame(L, drop_bottom=True)
        full_algebra, full_members = uvo_service.regular_algebra(full_frame)
        reduced_algebra, reduced_members = uvo_service.regular_algebra(reduced_frame)
        keep = [a for a in range(L.n) if a != L.bot]
        transported = set()
        for u in full_members:
            transported.add(bitsets.from_indices(i for i, a in enumerate(keep) if u >> a & 1))
        if transported != set(reduced_members):
            raise VerificationFailed("MacNeille restriction", "U ↦ U ∖ {0} is not a bijection")
        return full_algebra, reduced_algebra

    def macneille(self, L: Ortholattice) -> Completion:
        """MacNeille completion via normal subsets and via regular sets of the principal frame"""
        normal = self.normal_algebra(L)
        full_algebra, reduced_algebra = self.maclaren_regular_algebras(L)
        X = filter_service.dual_space(L)
        regular, _ = uvo_service.regular_algebra(uvo_service.pframe(X))
        iso = lattice_service.find_isomorphism(normal, regular)
        if iso is None:
            raise VerificationFailed("MacNeille completion", "Norm(L) and R(pframe) differ")
        for other in (full_algebra, reduced_algebra, L):
            if not lattice_service.is_isomorphic(normal, other):
                raise VerificationFailed("MacNeille completion", f"Norm(L) differs from a {other.n}-element algebra")
        return Completion(first=normal, second=regular, iso=iso)

    def canonical_extension(self, L: Ortholattice) -> CanonicalExtension:
        """R(X⁺_L) with the embedding a ↦ â and its density and compactness checks"""
        X = filter_service.dual_space(L)
        extension, members = uvo_service.regular_algebra(X.frame)
        index = {u: i for i, u in enumerate(members)}
        mapping = []
        for a in range(L.n):
            if X.basic_opens[a] not in index:
                raise VerificationFailed("canonical extension", f"{L.names[a]}^ is not regular")
            mapping.append(index[X.basic_opens[a]])
        embedding = lattice_service.make_hom(L, extension, mapping)
        star = lambda y: uvo_service.star(X, y)  # noqa: E731

        for u in range(X.m):
            closed = star(star(1 << u))
            meet = X.universe
            for opened in X.basic_opens:
                if bitsets.is_subset(closed, opened):
                    meet &= opened
            if meet != closed:
                raise VerificationFailed("canonical extension", f"{{{X.names[u]}}}** is not a meet of basic opens")
        for y in members:
            union = 0
            for u in range(X.m):
                if bitsets.is_subset(star(1 << u), y):
                    union |= star(1 << u)
            if star(star(union)) != y:
                raise VerificationFailed("canonical extension", f"{X.format(y)} is not a join of {{u}}*")

        small = [c for k in range(1, 3) for c in combinations(range(L.n), k)]
        for lower in small:
            meet_set = X.universe
            meet_elem = L.top
            for a in lower:
                meet_set &= X.basic_opens[a]
                meet_elem = L.meet_table[meet_elem][a]
            for upper in small:
                union = 0
                join_elem = L.bot
                for b in upper:
                    union |= X.basic_opens[b]
                    join_elem = L.join_table[join_elem][b]
                if bitsets.is_subset(meet_set, star(star(union))) and not L.le(meet_elem, join_elem):
                    raise VerificationFailed("canonical extension", f"compactness at {L.name_list(lower)}")

        iso = lattice_service.find_isomorphism(L, extension)
        if iso is None:
            raise VerificationFailed("canonical extension", "R(X) is not isomorphic to L")
        return CanonicalExtension(extension=extension, embedding=embedding, members=tuple(members), iso=iso)

    # ------------------------------------------------------------------
    # Congruences
    # ------------------------------------------------------------------

    def pugs(self, L: Ortholattice) -> List[PointSet]:
        """Principal up-sets closed under ⊄⊥ (relaxed), plus ∅ for the total congruence"""
        X = filter_service.dual_space(L)
        found = [0] + [X.up[x] for x in range(X.m) if uvo_service.is_generated_subframe(X, X.up[x])]
        return sorted(set(found), key=bitsets.canonical_key)

    def congruence_to_pugs(self, L: Ortholattice, theta: Congruence) -> PointSet:
        """θ ↦ ↑[1]_θ, ∅ when the 1-class is improper"""
        X = filter_service.dual_space(L)
        one_class = theta.block(L.top)
        if one_class >> L.bot & 1:
            return 0
        return X.up[X.point_of_filter[one_class]]

    def pugs_to_congruence(self, L: Ortholattice, subset: PointSet) -> Congruence:
        """S ↦ {(a, b) : â ∩ S = b̂ ∩ S}"""
        X = filter_service.dual_space(L)
        return Congruence.from_labels([X.basic_opens[a] & subset for a in range(L.n)])

    def _sasaki_agrees(self, L: Ortholattice, subset: PointSet, theta: Congruence) -> bool:
        # a θ b iff both hooks a → b and b → a have basic opens containing S
        X = filter_service.dual_space(L)
        for a in range(L.n):
            for b in range(L.n):
                forward = X.basic_opens[lattice_service.sasaki_hook(L, a, b)]
                backward = X.basic_opens[lattice_service.sasaki_hook(L, b, a)]
                hooked = bitsets.is_subset(subset, forward) and bitsets.is_subset(subset, backward)
                if hooked != theta.related(a, b):
                    return False
        return True

    def congruence_correspondence(self, L: Ortholattice) -> CongruenceCorrespondence:
        orthomodular, witness = lattice_service.is_orthomodular(L)
        if not orthomodular:
            raise NotOrthomodular(witness.names)
        congruences = lattice_service.congruences_bruteforce(L)
        pugs = self.pugs(L)
        pairs = []
        for theta in congruences:
            subset = self.congruence_to_pugs(L, theta)
            if subset not in pugs:
                raise VerificationFailed("congruence correspondence", f"image of {theta.classes} is not in PUGS")
            if self.pugs_to_congruence(L, subset) != theta:
                raise VerificationFailed("congruence correspondence", f"g(f(θ)) ≠ θ for {theta.classes}")
            pairs.append((theta, subset))
        for subset in pugs:
            theta = self.pugs_to_congruence(L, subset)
            if not lattice_service.is_congruence(L, theta):
                raise VerificationFailed("congruence correspondence", f"g({subset}) is not a congruence")
            if not self._sasaki_agrees(L, subset, theta):
                raise VerificationFailed("congruence correspondence", f"Sasaki hooks disagree at {subset}")
            if self.congruence_to_pugs(L, theta) != subset:
                raise VerificationFailed("congruence correspondence", f"f(g(S)) ≠ S for {subset}")
        if len(pugs) != len(congruences):
            raise VerificationFailed("congruence correspondence", f"{len(congruences)} congruences, {len(pugs)} sets")
        logger.info(f"Congruence correspondence verified on {len(pairs)} congruences")
        return CongruenceCorrespondence(pairs=tuple(pairs), pugs=tuple(pugs))


# Singleton instance
dictionary_service = DictionaryService()
