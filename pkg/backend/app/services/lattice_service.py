"""
Lattice Service - Validation, structure checks and constructions on finite ortholattices
"""

import logging
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.config import settings
from app.models.errors import (
    ComplementLawFails,
    DeMorganFails,
    NotAHomomorphism,
    NotALattice,
    NotAPoset,
    NotClosed,
    NotInvolutive,
    NotOrderReversing,
    SizeCapExceeded,
    raise_for,
)
from app.models.lattice import (
    BoundedLattice,
    Congruence,
    LatticeCandidate,
    LatticeHom,
    Ortholattice,
)
from app.models.schemas import LawWitness, SublatticeWitness, ValidationReport
from app.services import bitsets

logger = logging.getLogger(__name__)

Pair = Tuple[Union[int, str], Union[int, str]]


def transitive_closure(relation: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean matrix (Warshall)"""
    closure = np.array(relation, dtype=bool, copy=True)
    np.fill_diagonal(closure, True)
    for k in range(closure.shape[0]):
        closure |= np.outer(closure[:, k], closure[k, :])
    return closure


class LatticeService:
    """Service for building and inspecting finite (ortho)lattices"""

    def __init__(self):
        self.max_size = settings.max_size
        self.congruence_cap = settings.congruence_cap

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def _fail(self, cls, names: Sequence[str], witness: Sequence[int], message: str) -> ValidationReport:
        return ValidationReport(valid=False, law=cls.law, witness=[names[i] for i in witness],
                                message=message, size=len(names))

    def check_poset(self, names: Sequence[str], leq: np.ndarray) -> ValidationReport:
        """Reflexivity, antisymmetry and transitivity of a square boolean matrix"""
        n = len(names)
        if leq.shape != (n, n):
            return self._fail(NotAPoset, names, [], f"order matrix has shape {leq.shape}")
        missing = np.flatnonzero(~np.diag(leq))
        if missing.size:
            return self._fail(NotAPoset, names, [int(missing[0])], "relation is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            a, b = (int(v) for v in np.argwhere(both)[0])
            return self._fail(NotAPoset, names, [a, b], "relation is not antisymmetric")
        as_int = leq.astype(np.int64)
        broken = ((as_int @ as_int) > 0) & ~leq
        if broken.any():
            a, c = (int(v) for v in np.argwhere(broken)[0])
            b = int(np.flatnonzero(leq[a] & leq[:, c])[0])
            return self._fail(NotAPoset, names, [a, b, c], "relation is not transitive")
        return ValidationReport(valid=True, size=n)

    def _inspect(self, candidate: LatticeCandidate, ortho: bool):
        names = tuple(candidate.names)
        n = len(names)
        if n > self.max_size:
            raise SizeCapExceeded("lattice", n, self.max_size)
        if n == 0:
            return self._fail(NotALattice, names, [], "empty carrier"), None
        if len(set(names)) != n:
            return self._fail(NotAPoset, names, [], "duplicate element names"), None

        leq = np.asarray(candidate.leq, dtype=bool)
        report = self.check_poset(names, leq)
        if not report.valid:
            return report, None

        up = [bitsets.from_indices(np.flatnonzero(row).tolist()) for row in leq]
        down = [bitsets.from_indices(np.flatnonzero(col).tolist()) for col in leq.T]

        # Lattice laws: glb(a, b) is the element whose down-set is the set of common lower bounds
        by_down = {mask: x for x, mask in enumerate(down)}
        by_up = {mask: x for x, mask in enumerate(up)}
        meet = np.zeros((n, n), dtype=np.int64)
        join = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                m = by_down.get(down[a] & down[b])
                if m is None:
                    return self._fail(NotALattice, names, [a, b], "no greatest lower bound"), None
                j = by_up.get(up[a] & up[b])
                if j is None:
                    return self._fail(NotALattice, names, [a, b], "no least upper bound"), None
                meet[a, b] = meet[b, a] = m
                join[a, b] = join[b, a] = j
        universe = bitsets.full(n)
        bot = by_up[universe]
        top = by_down[universe]

        if not ortho:
            lattice = BoundedLattice(names=names, leq=leq.copy(), meet=meet, join=join, bot=bot, top=top)
            return ValidationReport(valid=True, size=n), lattice

        if candidate.ocomp is None:
            return self._fail(NotInvolutive, names, [], "no orthocomplement given"), None
        ocomp = tuple(int(v) for v in candidate.ocomp)
        if len(ocomp) != n or any(not 0 <= v < n for v in ocomp):
            return self._fail(NotInvolutive, names, [], "orthocomplement is not a map on the carrier"), None

        for a in range(n):
            if ocomp[ocomp[a]] != a:
                return self._fail(NotInvolutive, names, [a], "a⊥⊥ ≠ a"), None
        for a in range(n):
            if meet[a, ocomp[a]] != bot:
                return self._fail(ComplementLawFails, names, [a], "a ∧ a⊥ ≠ 0"), None
        for a in range(n):
            for b in bitsets.members(up[a]):
                if not leq[ocomp[b], ocomp[a]]:
                    return self._fail(NotOrderReversing, names, [a, b], "a ≤ b but b⊥ ≰ a⊥"), None
        for a in range(n):
            for b in range(n):
                if ocomp[meet[a, b]] != join[ocomp[a], ocomp[b]]:
                    return self._fail(DeMorganFails, names, [a, b], "(a ∧ b)⊥ ≠ a⊥ ∨ b⊥"), None

        lattice = Ortholattice(names=names, leq=leq.copy(), meet=meet, join=join,
                               bot=bot, top=top, ocomp=ocomp)
        return ValidationReport(valid=True, size=n), lattice

    def check_ortholattice(self, candidate: LatticeCandidate) -> ValidationReport:
        """Report the first violated law of a candidate ortholattice, never raising for law failures"""
        report, _ = self._inspect(candidate, ortho=True)
        return report

    def validate_ortholattice(self, candidate: LatticeCandidate) -> Ortholattice:
        report, lattice = self._inspect(candidate, ortho=True)
        raise_for(report)
        return lattice

    def check_lattice(self, candidate: LatticeCandidate) -> ValidationReport:
        report, _ = self._inspect(candidate, ortho=False)
        return report

    def validate_lattice(self, candidate: LatticeCandidate) -> BoundedLattice:
        report, lattice = self._inspect(candidate, ortho=False)
        raise_for(report)
        return lattice

    def build(self, candidate: LatticeCandidate) -> BoundedLattice:
        """Ortholattice when an orthocomplement is supplied, plain bounded lattice otherwise"""
        if candidate.ocomp is None:
            return self.validate_lattice(candidate)
        return self.validate_ortholattice(candidate)

    def from_covers(
        self,
        names: Sequence[str],
        covers: Iterable[Pair],
        ocomp: Optional[Iterable[Pair]] = None,
    ) -> BoundedLattice:
        """
        Build from cover pairs (a, b) meaning a < b, taking the reflexive-transitive
        closure. `ocomp` pairs are completed to an involution with 0 ↔ 1 implied.
        """
        names = tuple(names)
        index = {name: i for i, name in enumerate(names)}
        resolve = lambda v: index[v] if isinstance(v, str) else int(v)  # noqa: E731
        n = len(names)
        relation = np.zeros((n, n), dtype=bool)
        for a, b in covers:
            relation[resolve(a), resolve(b)] = True
        leq = transitive_closure(relation)
        if ocomp is None:
            return self.validate_lattice(LatticeCandidate(names, leq))
        involution = list(range(n))
        for a, b in ocomp:
            involution[resolve(a)] = resolve(b)
            involution[resolve(b)] = resolve(a)
        if n > 1:
            bot = int(np.flatnonzero(leq.all(axis=1))[0]) if leq.all(axis=1).any() else 0
            top = int(np.flatnonzero(leq.all(axis=0))[0]) if leq.all(axis=0).any() else n - 1
            involution[bot], involution[top] = top, bot
        return self.validate_ortholattice(LatticeCandidate(names, leq, tuple(involution)))

    # ------------------------------------------------------------------
    # Structure predicates
    # ------------------------------------------------------------------

    def m3_witnesses(self, L: BoundedLattice) -> Iterator[SublatticeWitness]:
        """All diamond sublattices (m, x, y, z, j), x < y < z by index"""
        mt, jt = L.meet_table, L.join_table
        n = L.n
        for x in range(n):
            for y in range(x + 1, n):
                if L.le(x, y) or L.le(y, x):
                    continue
                m, j = mt[x][y], jt[x][y]
                for z in range(y + 1, n):
                    if L.le(x, z) or L.le(z, x) or L.le(y, z) or L.le(z, y):
                        continue
                    if mt[x][z] == m == mt[y][z] and jt[x][z] == j == jt[y][z]:
                        elements = [m, x, y, z, j]
                        yield SublatticeWitness(kind="M3", elements=elements, names=L.name_list(elements))

    def n5_witnesses(self, L: BoundedLattice) -> Iterator[SublatticeWitness]:
        """All pentagon sublattices (m, low, high, side, j) with low < high"""
        mt, jt = L.meet_table, L.join_table
        n = L.n
        for low in range(n):
            for high in bitsets.members(L.up[low] & ~(1 << low)):
                for side in range(n):
                    if L.le(side, high) or L.le(low, side):
                        continue
                    if mt[low][side] == mt[high][side] and jt[low][side] == jt[high][side]:
                        elements = [mt[low][side], low, high, side, jt[low][side]]
                        yield SublatticeWitness(kind="N5", elements=elements, names=L.name_list(elements))

    def is_distributive(self, L: BoundedLattice) -> Tuple[bool, Optional[SublatticeWitness]]:
        witness = next(self.m3_witnesses(L), None) or next(self.n5_witnesses(L), None)
        if witness:
            logger.debug(f"Non-distributive: {witness.kind} witness {witness.names}")
        return witness is None, witness

    def check_distributive_laws(self, L: BoundedLattice) -> Tuple[bool, Optional[LawWitness]]:
        """Direct scan of both distributive identities over all triples"""
        mt, jt = L.meet_table, L.join_table
        n = L.n
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mt[a][jt[b][c]] != jt[mt[a][b]][mt[a][c]]:
                        return False, self._law("a∧(b∨c) = (a∧b)∨(a∧c)", L, [a, b, c])
                    if jt[a][mt[b][c]] != mt[jt[a][b]][jt[a][c]]:
                        return False, self._law("a∨(b∧c) = (a∨b)∧(a∨c)", L, [a, b, c])
        return True, None

    def is_modular(self, L: BoundedLattice) -> Tuple[bool, Optional[LawWitness]]:
        mt, jt = L.meet_table, L.join_table
        for a in range(L.n):
            for c in bitsets.members(L.up[a]):
                for b in range(L.n):
                    if jt[a][mt[b][c]] != mt[jt[a][b]][c]:
                        return False, self._law("a ≤ c ⟹ a∨(b∧c) = (a∨b)∧c", L, [a, b, c])
        return True, None

    def is_orthomodular(self, L: Ortholattice) -> Tuple[bool, Optional[LawWitness]]:
        mt, jt = L.meet_table, L.join_table
        for a in range(L.n):
            for b in bitsets.members(L.up[a]):
                if jt[a][mt[b][L.ocomp[a]]] != b:
                    return False, self._law("a ≤ b ⟹ b = a∨(b∧a⊥)", L, [a, b])
        return True, None

    def check_de_morgan(self, L: Ortholattice) -> Tuple[bool, Optional[LawWitness]]:
        """Full table scan of both De Morgan identities"""
        mt, jt, oc = L.meet_table, L.join_table, L.ocomp
        for a in range(L.n):
            for b in range(L.n):
                if oc[mt[a][b]] != jt[oc[a]][oc[b]]:
                    return False, self._law("(a∧b)⊥ = a⊥∨b⊥", L, [a, b])
                if oc[jt[a][b]] != mt[oc[a]][oc[b]]:
                    return False, self._law("(a∨b)⊥ = a⊥∧b⊥", L, [a, b])
        return True, None

    def _law(self, law: str, L: BoundedLattice, elements: List[int]) -> LawWitness:
        return LawWitness(law=law, elements=elements, names=L.name_list(elements))

    def atoms(self, L: BoundedLattice) -> List[int]:
        return [b for a, b in L.covers if a == L.bot]

    def sasaki_hook(self, L: Ortholattice, a: int, b: int) -> int:
        """a → b = a⊥ ∨ (b ∧ a)"""
        return L.join_table[L.ocomp[a]][L.meet_table[b][a]]

    # ------------------------------------------------------------------
    # Homomorphisms
    # ------------------------------------------------------------------

    def check_hom(self, source: BoundedLattice, target: BoundedLattice,
                  mapping: Sequence[int]) -> Optional[LawWitness]:
        """None when `mapping` preserves ∧, ⊥ and 0 (∨ and 1 as well for plain lattices)"""
        if len(mapping) != source.n or any(not 0 <= v < target.n for v in mapping):
            return LawWitness(law="not a total map", elements=[], names=[])
        f = list(mapping)
        if f[source.bot] != target.bot:
            return self._law("h(0) = 0", source, [source.bot])
        smt, tmt = source.meet_table, target.meet_table
        for a in range(source.n):
            for b in range(a + 1, source.n):
                if f[smt[a][b]] != tmt[f[a]][f[b]]:
                    return self._law("h(a∧b) = h(a)∧h(b)", source, [a, b])
        if source.is_ortho and target.is_ortho:
            for a in range(source.n):
                if f[source.ocomp[a]] != target.ocomp[f[a]]:
                    return self._law("h(a⊥) = h(a)⊥", source, [a])
        else:
            if f[source.top] != target.top:
                return self._law("h(1) = 1", source, [source.top])
            sjt, tjt = source.join_table, target.join_table
            for a in range(source.n):
                for b in range(a + 1, source.n):
                    if f[sjt[a][b]] != tjt[f[a]][f[b]]:
                        return self._law("h(a∨b) = h(a)∨h(b)", source, [a, b])
        return None

    def make_hom(self, source: BoundedLattice, target: BoundedLattice, mapping: Sequence[int]) -> LatticeHom:
        witness = self.check_hom(source, target, mapping)
        if witness is not None:
            raise NotAHomomorphism.build(witness.names, witness.law, source.n)
        return LatticeHom(source=source, target=target, map=tuple(int(v) for v in mapping))

    def identity_hom(self, L: BoundedLattice) -> LatticeHom:
        return LatticeHom(source=L, target=L, map=tuple(range(L.n)))

    def compose(self, h: LatticeHom, k: LatticeHom) -> LatticeHom:
        """k ∘ h (first h, then k)"""
        if h.target is not k.source:
            raise ValueError("homomorphisms are not composable")
        return LatticeHom(source=h.source, target=k.target, map=tuple(k.map[v] for v in h.map))

    # ------------------------------------------------------------------
    # Constructions
    # ------------------------------------------------------------------

    def product(self, L: BoundedLattice, M: BoundedLattice) -> BoundedLattice:
        """Componentwise product; element (i, j) has index i * |M| + j"""
        names = tuple(f"({a},{b})" for a in L.names for b in M.names)
        leq = np.kron(L.leq.astype(np.int64), M.leq.astype(np.int64)).astype(bool)
        if L.is_ortho and M.is_ortho:
            ocomp = tuple(L.ocomp[i] * M.n + M.ocomp[j] for i in range(L.n) for j in range(M.n))
            result = self.validate_ortholattice(LatticeCandidate(names, leq, ocomp))
        else:
            result = self.validate_lattice(LatticeCandidate(names, leq))
        logger.info(f"Built product of sizes {L.n} × {M.n} = {result.n}")
        return result

    def projection(self, P: BoundedLattice, L: BoundedLattice, M: BoundedLattice, side: int) -> LatticeHom:
        """Projection of P = L × M onto the factor `side` (0 for L, 1 for M)"""
        if P.n != L.n * M.n:
            raise ValueError("P is not the product of the given factors")
        if side == 0:
            mapping = [i // M.n for i in range(P.n)]
            return self.make_hom(P, L, mapping)
        mapping = [i % M.n for i in range(P.n)]
        return self.make_hom(P, M, mapping)

    def subalgebra_generated(self, L: Ortholattice, generators: int) -> Tuple[Ortholattice, LatticeHom]:
        """Closure of the generator bitset and both bounds under ∧, ∨ and ⊥"""
        mt, jt = L.meet_table, L.join_table
        closed = generators | (1 << L.bot) | (1 << L.top)
        changed = True
        while changed:
            changed = False
            elems = bitsets.to_list(closed)
            extra = 0
            for a in elems:
                if L.is_ortho:
                    extra |= 1 << L.ocomp[a]
                for b in elems:
                    extra |= (1 << mt[a][b]) | (1 << jt[a][b])
            if extra & ~closed:
                closed |= extra
                changed = True
        elems = bitsets.to_list(closed)
        position = {a: i for i, a in enumerate(elems)}
        leq = L.leq[np.ix_(elems, elems)]
        names = tuple(L.names[a] for a in elems)
        ocomp = tuple(position[L.ocomp[a]] for a in elems) if L.is_ortho else None
        sub = self.build(LatticeCandidate(names, leq, ocomp))
        return sub, self.make_hom(sub, L, elems)

    def is_congruence(self, L: BoundedLattice, theta: Congruence) -> bool:
        mt, jt = L.meet_table, L.join_table
        for block in theta.blocks():
            members = bitsets.to_list(block)
            first = members[0]
            for a in members[1:]:
                if L.is_ortho and not theta.related(L.ocomp[a], L.ocomp[first]):
                    return False
                for c in range(L.n):
                    if not theta.related(mt[a][c], mt[first][c]) or not theta.related(jt[a][c], jt[first][c]):
                        return False
        return True

    def quotient(self, L: BoundedLattice, theta: Congruence) -> Tuple[BoundedLattice, LatticeHom]:
        """Quotient lattice L/θ with the canonical surjection a ↦ [a]"""
        if len(theta.classes) != L.n or not self.is_congruence(L, theta):
            raise NotClosed.build([], "partition is not a congruence", L.n)
        reps = [bitsets.lowest(block) for block in theta.blocks()]
        k = len(reps)
        leq = np.zeros((k, k), dtype=bool)
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                leq[i, j] = theta.related(L.meet_table[a][b], a)
        names = tuple(f"[{L.names[a]}]" for a in reps)
        ocomp = tuple(theta.classes[L.ocomp[a]] for a in reps) if L.is_ortho else None
        Q = self.build(LatticeCandidate(names, leq, ocomp))
        return Q, self.make_hom(L, Q, theta.classes)

    def _close_partition(self, L: BoundedLattice, labels: List[int], a: int, b: int) -> Tuple[int, ...]:
        parent = list(labels)

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        mt, jt = L.meet_table, L.join_table
        pending = [(a, b)]
        while pending:
            x, y = pending.pop()
            rx, ry = find(x), find(y)
            if rx == ry:
                continue
            parent[max(rx, ry)] = min(rx, ry)
            for c in range(L.n):
                pending.append((mt[x][c], mt[y][c]))
                pending.append((jt[x][c], jt[y][c]))
            if L.is_ortho:
                pending.append((L.ocomp[x], L.ocomp[y]))
        return Congruence.from_labels([find(x) for x in range(L.n)]).classes

    def congruences_bruteforce(self, L: BoundedLattice, cap: Optional[int] = None) -> List[Congruence]:
        """
        All congruences, found by joining principal congruences onto known ones
        starting from the identity partition. Sorted by class-label tuple.
        """
        cap = self.congruence_cap if cap is None else cap
        if L.n > cap:
            raise SizeCapExceeded("congruence enumeration", L.n, cap)
        identity = tuple(range(L.n))
        seen = {identity}
        queue = [identity]
        while queue:
            classes = queue.pop()
            # representative labels: smallest member of each class
            labels = [classes.index(c) for c in classes]
            for b in range(L.n):
                for a in range(b):
                    if classes[a] == classes[b]:
                        continue
                    joined = self._close_partition(L, labels, a, b)
                    if joined not in seen:
                        seen.add(joined)
                        queue.append(joined)
        logger.debug(f"Found {len(seen)} congruences on a lattice of size {L.n}")
        return [Congruence(classes) for classes in sorted(seen)]

    # ------------------------------------------------------------------
    # Isomorphism
    # ------------------------------------------------------------------

    def _invariants(self, L: BoundedLattice) -> List[Tuple[int, int]]:
        return [(bitsets.size(L.down[a]), bitsets.size(L.up[a])) for a in range(L.n)]

    def find_isomorphism(self, L: BoundedLattice, M: BoundedLattice) -> Optional[Tuple[int, ...]]:
        """
        Backtracking search for an order- and orthocomplement-preserving bijection.
        Elements of L are assigned in index order and images tried in ascending
        order, so the first hit is the lexicographically smallest isomorphism.
        """
        if L.n != M.n or L.is_ortho != M.is_ortho:
            return None
        n = L.n
        inv_l, inv_m = self._invariants(L), self._invariants(M)
        if sorted(inv_l) != sorted(inv_m):
            return None
        candidates = [[b for b in range(n) if inv_m[b] == inv_l[a]] for a in range(n)]
        f = [-1] * n
        used = [False] * n
        assigned: List[int] = []

        def fits(a: int, b: int) -> bool:
            for u in assigned:
                if L.le(a, u) != M.le(b, f[u]) or L.le(u, a) != M.le(f[u], b):
                    return False
            return True

        def place(a: int, b: int) -> None:
            f[a] = b
            used[b] = True
            assigned.append(a)

        def unplace(a: int) -> None:
            used[f[a]] = False
            f[a] = -1
            assigned.pop()

        def search(a: int) -> bool:
            while a < n and f[a] != -1:
                a += 1
            if a == n:
                return True
            for b in candidates[a]:
                if used[b] or not fits(a, b):
                    continue
                place(a, b)
                if L.is_ortho:
                    c, d = L.ocomp[a], M.ocomp[b]
                    if c == a:
                        ok = d == b
                        if ok and search(a + 1):
                            return True
                    elif f[c] == -1 and not used[d] and d in candidates[c] and fits(c, d):
                        place(c, d)
                        if search(a + 1):
                            return True
                        unplace(c)
                elif search(a + 1):
                    return True
                unplace(a)
            return False

        if search(0):
            return tuple(f)
        return None

    def is_isomorphic(self, L: BoundedLattice, M: BoundedLattice) -> bool:
        return self.find_isomorphism(L, M) is not None


# Singleton instance
lattice_service = LatticeService()
