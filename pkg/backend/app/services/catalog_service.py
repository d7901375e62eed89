"""
Catalog Service - Built-in lattices and spaces, exhaustive enumeration and homomorphism search
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product as cartesian
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.models.errors import SizeCapExceeded, UnknownName
from app.models.lattice import BoundedLattice, LatticeCandidate, LatticeHom, Ortholattice
from app.models.space import UvoSpace
from app.services import bitsets
from app.services.lattice_service import lattice_service
from app.services.uvo_service import uvo_service

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    lattice: BoundedLattice
    provenance: str


def _boolean(atoms: str):
    """Names, covers and complements of the Boolean algebra on the given atom letters"""
    subsets = [frozenset(c) for k in range(len(atoms) + 1) for c in combinations(atoms, k)]
    label = {s: "".join(sorted(s)) for s in subsets}
    label[frozenset()] = "0"
    label[frozenset(atoms)] = "1"
    names = [label[s] for s in subsets]
    covers = [(label[s], label[t]) for s in subsets for t in subsets if s < t and len(t) == len(s) + 1]
    full = frozenset(atoms)
    ocomp = [(label[s], label[full - s]) for s in subsets if 0 < len(s) and label[s] < label[full - s]]
    return names, covers, ocomp


def _horizontal_sum(blocks: int):
    """MO_n: 0 and 1 with n incomparable pairs x, x' in between"""
    letters = "abcdefgh"[:blocks]
    middle = [name for x in letters for name in (x, f"{x}'")]
    names = ["0"] + middle + ["1"]
    covers = [("0", m) for m in middle] + [(m, "1") for m in middle]
    ocomp = [(x, f"{x}'") for x in letters]
    return names, covers, ocomp


# name -> (names, covers, ocomp pairs or None, provenance)
_DEFINITIONS: Dict[str, tuple] = {
    "O2": (["0", "1"], [("0", "1")], [], "two-element Boolean algebra"),
    "TwoByTwo": (
        ["0", "a", "a'", "1"],
        [("0", "a"), ("0", "a'"), ("a", "1"), ("a'", "1")],
        [("a", "a'")],
        "the 2×2 diamond",
    ),
    "O6": (
        ["0", "a", "b", "a'", "b'", "1"],
        [("0", "a"), ("a", "b'"), ("b'", "1"), ("0", "b"), ("b", "a'"), ("a'", "1")],
        [("a", "a'"), ("b", "b'")],
        "benzene ring, not orthomodular",
    ),
    "O10": (
        ["0", "a", "a'", "d", "d'", "b", "b'", "c", "c'", "1"],
        [("0", "a"), ("0", "a'"), ("0", "c'"), ("0", "b'"), ("0", "d"), ("0", "d'"),
         ("c'", "b"), ("b'", "c"),
         ("a", "1"), ("a'", "1"), ("b", "1"), ("c", "1"), ("d", "1"), ("d'", "1")],
        [("a", "a'"), ("b", "b'"), ("c", "c'"), ("d", "d'")],
        "ten-element ortholattice with M3 and N5 sublattices",
    ),
    "MO1": (*_horizontal_sum(1), "horizontal sum of one 2×2 block"),
    "MO2": (*_horizontal_sum(2), "horizontal sum of two 2×2 blocks, orthomodular, simple"),
    "MO3": (*_horizontal_sum(3), "horizontal sum of three 2×2 blocks"),
    "B4": (*_boolean("ab"), "Boolean algebra 2²"),
    "B8": (*_boolean("abc"), "Boolean algebra 2³"),
    "B16": (*_boolean("abcd"), "Boolean algebra 2⁴"),
    "M3_lattice_only": (
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        None,
        "diamond M3, admits no orthocomplement",
    ),
    "N5_lattice_only": (
        ["0", "c", "a", "b", "1"],
        [("0", "c"), ("c", "a"), ("a", "1"), ("0", "b"), ("b", "1")],
        None,
        "pentagon N5, admits no orthocomplement",
    ),
    "Chain4_lattice_only": (
        ["0", "p", "q", "1"],
        [("0", "p"), ("p", "q"), ("q", "1")],
        None,
        "four-element chain, admits no orthocomplement",
    ),
    "Degenerate": (["0"], [], [], "one-element ortholattice, 0 = 1"),
}

# name -> (points, covers, perp pairs, provenance)
_SPACES: Dict[str, tuple] = {
    "m3_spectrum_perp": (
        ["x", "y1", "y2", "y3"],
        [("x", "y1"), ("x", "y2"), ("x", "y3")],
        [("y1", "y2"), ("y2", "y3"), ("y1", "y3")],
        "filter spectrum of M3 drawn with pairwise orthogonal maximal points",
    ),
    "o2_spectrum": (["z"], [], [], "filter spectrum of O2"),
}


class CatalogService:
    """Service for the built-in instance library"""

    def __init__(self):
        self.hom_search_cap = settings.hom_search_cap
        self.enumerate_cap = settings.enumerate_cap
        self.enumerate_default = settings.enumerate_default
        self._built: Dict[str, BoundedLattice] = {}
        self._spaces: Dict[str, UvoSpace] = {}

    def names(self) -> List[str]:
        return list(_DEFINITIONS)

    def space_names(self) -> List[str]:
        return list(_SPACES)

    def builtin(self, name: str) -> BoundedLattice:
        if name not in _DEFINITIONS:
            raise UnknownName(name, self.names())
        if name not in self._built:
            names, covers, ocomp, _ = _DEFINITIONS[name]
            self._built[name] = lattice_service.from_covers(names, covers, ocomp)
        return self._built[name]

    def entry(self, name: str) -> CatalogEntry:
        lattice = self.builtin(name)
        return CatalogEntry(name=name, lattice=lattice, provenance=_DEFINITIONS[name][3])

    def entries(self) -> List[CatalogEntry]:
        return [self.entry(name) for name in self.names()]

    def ortholattices(self) -> List[Tuple[str, Ortholattice]]:
        return [(e.name, e.lattice) for e in self.entries() if e.lattice.is_ortho]

    def space(self, name: str) -> UvoSpace:
        if name not in _SPACES:
            raise UnknownName(name, self.space_names())
        if name not in self._spaces:
            points, covers, perp, _ = _SPACES[name]
            self._spaces[name] = uvo_service.from_covers(points, covers, perp)
        return self._spaces[name]

    # ------------------------------------------------------------------
    # Orthocomplements
    # ------------------------------------------------------------------

    def orthocomplementations(self, L: BoundedLattice) -> List[Tuple[int, ...]]:
        """Every valid orthocomplement of a bounded lattice, as element maps"""
        if L.n == 1:
            return [(0,)]
        middle = [a for a in range(L.n) if a not in (L.bot, L.top)]
        if len(middle) % 2:
            return []
        mt, jt = L.meet_table, L.join_table
        found = []
        involution = list(range(L.n))
        involution[L.bot], involution[L.top] = L.top, L.bot

        def match(rest: List[int]) -> None:
            if not rest:
                candidate = LatticeCandidate(L.names, L.leq, tuple(involution))
                if lattice_service.check_ortholattice(candidate).valid:
                    found.append(tuple(involution))
                return
            a = rest[0]
            for b in rest[1:]:
                if mt[a][b] != L.bot or jt[a][b] != L.top:
                    continue
                involution[a], involution[b] = b, a
                match([c for c in rest if c not in (a, b)])
            involution[a] = a

        match(middle)
        return sorted(found)

    # ------------------------------------------------------------------
    # Enumeration
    # ------------------------------------------------------------------

    def _invariant(self, L: BoundedLattice) -> Tuple:
        return tuple(sorted((bitsets.size(L.down[a]), bitsets.size(L.up[a])) for a in range(L.n)))

    def _dedupe(self, lattices: Iterator[Ortholattice]) -> Iterator[Ortholattice]:
        buckets: Dict[Tuple, List[Ortholattice]] = {}
        for L in lattices:
            bucket = buckets.setdefault(self._invariant(L), [])
            if any(lattice_service.is_isomorphic(L, seen) for seen in bucket):
                continue
            bucket.append(L)
            yield L

    def _names(self, n: int) -> Tuple[str, ...]:
        if n == 1:
            return ("0",)
        middle = [name for i in range((n - 2) // 2) for name in (f"p{i}", f"p{i}'")]
        return tuple(["0"] + middle + ["1"])

    def _candidates_of_size(self, n: int) -> Iterator[Ortholattice]:
        """
        Labelled candidates with a fixed involution: middle element 2i+1 is paired
        with 2i+2. Strict-order choices are made per orbit {u, v} ~ {v⊥, u⊥} with
        transitivity pruning on every decision.
        """
        if n == 1:
            yield lattice_service.from_covers(["0"], [], [])
            return
        if n % 2:
            return
        top = n - 1
        ocomp = list(range(n))
        ocomp[0], ocomp[top] = top, 0
        for i in range(1, top, 2):
            ocomp[i], ocomp[i + 1] = i + 1, i
        middle = range(1, top)
        orbits = []
        seen = set()
        for u, v in combinations(middle, 2):
            if v == ocomp[u] or (u, v) in seen:
                continue
            partner = tuple(sorted((ocomp[u], ocomp[v])))
            seen.update({(u, v), partner})
            orbits.append((u, v))

        lt = np.zeros((n, n), dtype=bool)
        lt[0, 1:] = True
        lt[:top, top] = True
        known = np.zeros((n, n), dtype=bool)
        known[0, :] = known[:, 0] = known[top, :] = known[:, top] = True
        for u in middle:
            known[u, ocomp[u]] = True
        names = self._names(n)

        def consistent(p: int, q: int) -> bool:
            if lt[q, p]:
                p, q = q, p
            for w in range(n):
                if w in (p, q):
                    continue
                if lt[p, q]:
                    if lt[w, p] and known[w, q] and not lt[w, q]:
                        return False
                    if lt[q, w] and known[p, w] and not lt[p, w]:
                        return False
                elif not lt[q, p]:
                    if (lt[p, w] and lt[w, q]) or (lt[q, w] and lt[w, p]):
                        return False
            return True

        def decide(p: int, q: int, less: int) -> None:
            # less: 0 incomparable, 1 p < q, 2 q < p
            known[p, q] = known[q, p] = True
            lt[p, q] = less == 1
            lt[q, p] = less == 2

        def undecide(p: int, q: int) -> None:
            known[p, q] = known[q, p] = False
            lt[p, q] = lt[q, p] = False

        def walk(i: int) -> Iterator[Ortholattice]:
            if i == len(orbits):
                leq = lt | np.eye(n, dtype=bool)
                candidate = LatticeCandidate(names, leq.copy(), tuple(ocomp))
                if lattice_service.check_ortholattice(candidate).valid:
                    yield lattice_service.validate_ortholattice(candidate)
                return
            u, v = orbits[i]
            cu, cv = ocomp[u], ocomp[v]
            for less in (0, 1, 2):
                # u < v forces v⊥ < u⊥
                decide(u, v, less)
                decide(cv, cu, less)
                if consistent(u, v) and consistent(cv, cu):
                    yield from walk(i + 1)
                undecide(u, v)
                undecide(cv, cu)

        yield from walk(0)

    def enumerate_ortholattices(self, n_max: Optional[int] = None, cap: Optional[int] = None) -> Iterator[Ortholattice]:
        """Ortholattices with at most n_max elements, one per isomorphism class, by size"""
        n_max = self.enumerate_default if n_max is None else n_max
        cap = self.enumerate_cap if cap is None else cap
        if n_max > cap:
            raise SizeCapExceeded("ortholattice enumeration", n_max, cap)
        for n in range(1, n_max + 1):
            count = 0
            for L in self._dedupe(self._candidates_of_size(n)):
                count += 1
                yield L
            logger.debug(f"Enumerated {count} ortholattices of size {n}")

    def enumerate_ortholattices_raw(self, n: int, cap: int = 6) -> List[Ortholattice]:
        """
        Oracle: every labelled bounded lattice on n elements (0 first, 1 last),
        then every valid orthocomplement, up to isomorphism.
        """
        if n > cap:
            raise SizeCapExceeded("raw ortholattice enumeration", n, cap)
        if n == 1:
            return [lattice_service.from_covers(["0"], [], [])]
        names = tuple(["0"] + [f"e{i}" for i in range(1, n - 1)] + ["1"])
        middle = list(range(1, n - 1))
        pairs = list(combinations(middle, 2))

        def lattices() -> Iterator[Ortholattice]:
            for choice in cartesian((0, 1, 2), repeat=len(pairs)):
                leq = np.eye(n, dtype=bool)
                leq[0, :] = True
                leq[:, n - 1] = True
                for (u, v), less in zip(pairs, choice):
                    if less == 1:
                        leq[u, v] = True
                    elif less == 2:
                        leq[v, u] = True
                candidate = LatticeCandidate(names, leq)
                if not lattice_service.check_lattice(candidate).valid:
                    continue
                L = lattice_service.validate_lattice(candidate)
                for ocomp in self.orthocomplementations(L):
                    yield lattice_service.validate_ortholattice(LatticeCandidate(names, leq, ocomp))

        found: Dict[Tuple, Ortholattice] = {}
        for L in lattices():
            found.setdefault(self.canonical_form(L), L)
        return list(found.values())

    def canonical_form(self, L: BoundedLattice) -> Tuple:
        """Minimum (order, orthocomplement) encoding over invariant-respecting element orders"""
        ocomp = tuple(L.ocomp) if L.is_ortho else None
        return _canonical_form(L.leq.tobytes(), L.n, ocomp)

    # ------------------------------------------------------------------
    # Homomorphisms
    # ------------------------------------------------------------------

    def all_homs(self, L: BoundedLattice, M: BoundedLattice, cap: Optional[int] = None) -> List[LatticeHom]:
        """
        Every homomorphism L → M. Elements are assigned by height (atoms first),
        an element together with its orthocomplement; partial maps are pruned on meets.
        """
        cap = self.hom_search_cap if cap is None else cap
        if max(L.n, M.n) > cap:
            raise SizeCapExceeded("homomorphism search", max(L.n, M.n), cap)
        ortho = L.is_ortho and M.is_ortho
        order = sorted(range(L.n), key=lambda a: (bitsets.size(L.down[a]), a))
        f = [-1] * L.n
        if L.n == 1 and M.n > 1:
            return []
        f[L.bot] = M.bot
        f[L.top] = M.top
        mt, nt = L.meet_table, M.meet_table
        found: List[LatticeHom] = []

        def partial_ok() -> bool:
            for a in range(L.n):
                if f[a] == -1:
                    continue
                for b in range(a + 1, L.n):
                    if f[b] == -1:
                        continue
                    m = f[mt[a][b]]
                    if m != -1 and m != nt[f[a]][f[b]]:
                        return False
            return True

        def search(k: int) -> None:
            while k < len(order) and f[order[k]] != -1:
                k += 1
            if k == len(order):
                if lattice_service.check_hom(L, M, f) is None:
                    found.append(LatticeHom(source=L, target=M, map=tuple(f)))
                return
            a = order[k]
            for v in range(M.n):
                f[a] = v
                if ortho:
                    c = L.ocomp[a]
                    if c == a:
                        if M.ocomp[v] != v:
                            continue
                    elif f[c] == -1:
                        f[c] = M.ocomp[v]
                        if partial_ok():
                            search(k + 1)
                        f[c] = -1
                        continue
                if partial_ok():
                    search(k + 1)
            f[a] = -1

        search(0)
        found.sort(key=lambda h: h.map)
        logger.debug(f"Found {len(found)} homomorphisms from {L.n} to {M.n} elements")
        return found


@lru_cache(maxsize=256)
def _canonical_form(leq_bytes: bytes, n: int, ocomp: Optional[Tuple[int, ...]]) -> Tuple:
    leq = np.frombuffer(leq_bytes, dtype=bool).reshape(n, n)
    down = leq.sum(axis=0)
    up = leq.sum(axis=1)
    invariant = [(int(down[a]), int(up[a])) for a in range(n)]
    classes: Dict[Tuple[int, int], List[int]] = {}
    for a in sorted(range(n), key=lambda a: invariant[a]):
        classes.setdefault(invariant[a], []).append(a)
    groups = [classes[key] for key in sorted(classes)]
    best = None
    for arrangement in cartesian(*(permutations(group) for group in groups)):
        order = [a for part in arrangement for a in part]
        position = {a: i for i, a in enumerate(order)}
        code_leq = tuple(bool(leq[order[i], order[j]]) for i in range(n) for j in range(n))
        code_ocomp = tuple(position[ocomp[a]] for a in order) if ocomp is not None else ()
        code = (code_leq, code_ocomp)
        if best is None or code < best:
            best = code
    return (n,) + (best or ((), ()))


# Singleton instance
catalog_service = CatalogService()
