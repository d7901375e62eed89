"""
Verification Service - The property suite behind `verify-all`
"""

import logging
import time
from itertools import product as cartesian
from typing import Callable, Dict, List, Optional, Tuple

from app.config import settings
from app.models.errors import OrthodualError, SizeCapExceeded, ValidationError
from app.models.lattice import BoundedLattice, Ortholattice
from app.models.schemas import CheckResult
from app.models.space import UvoSpace
from app.services.catalog_service import catalog_service
from app.services.dictionary_service import dictionary_service
from app.services.document_service import document_service
from app.services.duality_service import duality_service
from app.services.filter_service import filter_service
from app.services.lattice_service import lattice_service
from app.services.uvo_service import uvo_service

logger = logging.getLogger(__name__)

# (passed, detail, witness)
Outcome = Tuple[bool, str, Optional[str]]

RAW_ENUMERATION_COUNTS = {1: 1, 2: 1, 3: 0, 4: 1, 5: 0, 6: 2}


class VerificationService:
    """Service running the acceptance checks over the catalog and the enumeration"""

    def __init__(self):
        self.enumerate_default = settings.enumerate_default
        self.hom_pair_size = 6
        self.functor_triple_size = 4
        self.subset_space_size = 12
        self.n_max = self.enumerate_default
        self._enumerated: Dict[int, List[Ortholattice]] = {}

    # ------------------------------------------------------------------
    # Instances
    # ------------------------------------------------------------------

    def catalog_lattices(self) -> List[Tuple[str, Ortholattice]]:
        return catalog_service.ortholattices()

    def enumerated(self, n_max: Optional[int] = None) -> List[Ortholattice]:
        n_max = self.n_max if n_max is None else n_max
        if n_max not in self._enumerated:
            self._enumerated[n_max] = list(catalog_service.enumerate_ortholattices(n_max))
        return self._enumerated[n_max]

    def instances(self) -> List[Tuple[str, Ortholattice]]:
        labelled = self.catalog_lattices()
        labelled += [(f"enumerated#{i}({L.n})", L) for i, L in enumerate(self.enumerated())]
        return labelled

    def spaces(self) -> List[Tuple[str, UvoSpace]]:
        found = [(f"X+{name}", filter_service.dual_space(L)) for name, L in self.catalog_lattices()]
        found += [(name, catalog_service.space(name)) for name in catalog_service.space_names()]
        return found

    # ------------------------------------------------------------------
    # Checks
    # ------------------------------------------------------------------

    def check_spectrum_counts(self) -> Outcome:
        for name, L in self.instances():
            X = filter_service.dual_space(L)
            if X.m != L.n - 1:
                return False, "|X+L| = |L| - 1", f"{name}: {X.m} points for {L.n} elements"
        m3 = filter_service.dual_space(catalog_service.builtin("M3_lattice_only"))
        minimal = [x for x in range(m3.m) if m3.down[x] == 1 << x]
        if m3.m != 4 or len(minimal) != 1 or len(m3.covers) != 3:
            return False, "M3 spectrum shape", f"{m3.m} points, {len(m3.covers)} covers"
        if filter_service.dual_space(catalog_service.builtin("O2")).m != 1:
            return False, "O2 spectrum", "expected one point"
        return True, f"{len(self.instances())} lattices", None

    def check_representation(self) -> Outcome:
        for name, L in self.instances():
            duality_service.representation_map(L)
        return True, "a ↦ â is an isomorphism onto COR(X+L)", None

    def check_characterization(self) -> Outcome:
        for name, L in self.instances():
            X = filter_service.dual_space(L)
            report = uvo_service.validate_uvo(X)
            if not report.passed:
                failure = report.failures()[0]
                return False, f"axiom {failure.axiom} on {name}", failure.witness
            uvo_service.char_map(X)
        return True, "X ≅ X+COR(X) for every spectrum", None

    def check_spectral(self) -> Outcome:
        for name, X in self.spaces():
            report = filter_service.verify_spectral(X)
            if not report.passed:
                return False, f"spectral on {name}", report.witness
        return True, "T0, compact, coherent, sober", None

    def check_dual_equivalence(self) -> Outcome:
        small = [(n, L) for n, L in self.catalog_lattices() if L.n <= self.hom_pair_size]
        checked = 0
        for (ln, L), (mn, M) in cartesian(small, repeat=2):
            homs = catalog_service.all_homs(L, M)
            maps = duality_service.all_uvo_maps(filter_service.dual_space(M), filter_service.dual_space(L))
            if len(homs) != len(maps):
                return False, f"hom count {ln} → {mn}", f"{len(homs)} homomorphisms, {len(maps)} UVO-maps"
            for h in homs:
                f = duality_service.hom_to_uvomap(h)
                ok, witness = duality_service.check_naturality(L, h)
                if not ok:
                    return False, f"naturality {ln} → {mn}", witness
                ok, witness = duality_service.check_conaturality(f.source, f)
                if not ok:
                    return False, f"conaturality {ln} → {mn}", witness
                checked += 1
        tiny = [(n, L) for n, L in small if L.n <= self.functor_triple_size]
        for (ln, L), (mn, M), (nn, N) in cartesian(tiny, repeat=3):
            for h in catalog_service.all_homs(L, M):
                for k in catalog_service.all_homs(M, N):
                    whole = duality_service.hom_to_uvomap(lattice_service.compose(h, k))
                    parts = duality_service.compose_maps(duality_service.hom_to_uvomap(k),
                                                         duality_service.hom_to_uvomap(h))
                    if whole.map != parts.map:
                        return False, f"functoriality {ln} → {mn} → {nn}", whole.describe()
        composed = 0
        for (ln, L), (mn, M), (nn, N) in cartesian(tiny, repeat=3):
            X, Y, Z = (filter_service.dual_space(A) for A in (L, M, N))
            for f in duality_service.all_uvo_maps(X, Y):
                for g in duality_service.all_uvo_maps(Y, Z):
                    ok, witness = duality_service.check_contravariance(f, g)
                    if not ok:
                        return False, f"(g∘f)⁺ on X+{ln} → X+{mn} → X+{nn}", witness
                    composed += 1
        return True, f"{checked} homomorphisms, {composed} composable UVO-map pairs", None

    def check_dictionary(self) -> Outcome:
        for name, X in self.spaces():
            for check in (dictionary_service.meet_formula_check, dictionary_service.join_formula_check):
                ok, witness = check(X)
                if not ok:
                    return False, f"{check.__name__} on {name}", witness
        for name, L in self.catalog_lattices():
            dictionary_service.atoms_bijection(L)
            if not dictionary_service.is_atomic(L):
                return False, f"atomic {name}", None

        o2 = filter_service.dual_space(catalog_service.builtin("O2"))
        m3 = catalog_service.space("m3_spectrum_perp")
        S = dictionary_service.uvo_sum(o2, m3)
        if S.m != 9 or len(S.covers) != 13:
            return False, "sum of O2 and M3 spectra", f"{S.m} points, {len(S.covers)} covers"
        plain = filter_service.dual_space(catalog_service.builtin("M3_lattice_only"))
        if dictionary_service.uvo_sum(o2, plain, verify=False).covers != S.covers:
            return False, "sum over the M3 spectrum without orthogonality", "covers differ"

        for left, right in (("O2", "TwoByTwo"), ("TwoByTwo", "MO2")):
            dictionary_service.product_sum_homeo(catalog_service.builtin(left), catalog_service.builtin(right))
        ok, witness = dictionary_service.coproduct_check(
            o2, filter_service.dual_space(catalog_service.builtin("TwoByTwo")),
            filter_service.dual_space(catalog_service.builtin("TwoByTwo")),
        )
        if not ok:
            return False, "coproduct", witness

        for name, L in self.catalog_lattices():
            dictionary_service.macneille(L)
            dictionary_service.canonical_extension(L)

        for name, expected in (("B8", 8), ("MO2", 2)):
            found = len(dictionary_service.congruence_correspondence(catalog_service.builtin(name)).pairs)
            if found != expected:
                return False, f"congruences of {name}", f"{found} ≠ {expected}"
        return True, "meet/join formulas, atoms, sums, completions, congruences", None

    def check_subset_calculus(self) -> Outcome:
        for name, X in self.spaces():
            if X.m > self.subset_space_size:
                continue
            for u in range(1 << X.m):
                once = uvo_service.star(X, u)
                if uvo_service.star(X, once) != uvo_service.box_diamond(X, u):
                    return False, f"** = □◇ on {name}", X.format(u)
                if uvo_service.star(X, uvo_service.star(X, once)) != once:
                    return False, f"*** = * on {name}", X.format(u)
        return True, f"all subsets of spaces with at most {self.subset_space_size} points", None

    def check_negative_controls(self) -> Outcome:
        for name in ("Chain4_lattice_only", "M3_lattice_only", "N5_lattice_only"):
            if catalog_service.orthocomplementations(catalog_service.builtin(name)):
                return False, f"{name} admits an orthocomplement", None
        orthomodular, witness = lattice_service.is_orthomodular(catalog_service.builtin("O6"))
        if orthomodular or witness.names != ["a", "b'"]:
            return False, "O6 orthomodularity witness", str(witness.names if witness else None)
        o10 = catalog_service.builtin("O10")
        m3 = next(lattice_service.m3_witnesses(o10), None)
        n5 = next(lattice_service.n5_witnesses(o10), None)
        if m3 is None or m3.names != ["0", "a", "a'", "d", "1"] or n5 is None:
            return False, "O10 M3/N5 witnesses", None
        return True, "Chain4, M3, N5, O6, O10", None

    def check_enumeration_oracle(self) -> Outcome:
        for n, expected in RAW_ENUMERATION_COUNTS.items():
            fast = [L for L in self.enumerated(n) if L.n == n]
            raw = catalog_service.enumerate_ortholattices_raw(n)
            if len(fast) != expected or len(raw) != expected:
                return False, f"count at size {n}", f"fast {len(fast)}, raw {len(raw)}, expected {expected}"
            for L in fast:
                if not any(lattice_service.is_isomorphic(L, R) for R in raw):
                    return False, f"size {n}", "enumerated lattice missing from the raw oracle"
            if {catalog_service.canonical_form(L) for L in fast} != {catalog_service.canonical_form(R) for R in raw}:
                return False, f"size {n}", "canonical forms differ"
        return True, "sizes 1-6 agree", None

    def check_corpus(self) -> Outcome:
        documents = document_service.corpus()
        for path in documents:
            text = document_service.read(path)
            if "bad" in path.stem:
                try:
                    document_service.parse(text)
                except ValidationError:
                    continue
                return False, f"{path.name} should fail validation", None
            if document_service.serialize(document_service.parse(text)) != text:
                return False, f"{path.name} does not round-trip", None
        return True, f"{len(documents)} documents", None

    def checks(self) -> Dict[str, Callable[[], Outcome]]:
        return {
            "spectrum-counts": self.check_spectrum_counts,
            "representation": self.check_representation,
            "characterization": self.check_characterization,
            "spectral": self.check_spectral,
            "dual-equivalence": self.check_dual_equivalence,
            "dictionary": self.check_dictionary,
            "subset-calculus": self.check_subset_calculus,
            "negative-controls": self.check_negative_controls,
            "enumeration-oracle": self.check_enumeration_oracle,
            "corpus": self.check_corpus,
        }

    def run(self, name: str, check: Callable[[], Outcome]) -> CheckResult:
        start = time.perf_counter()
        try:
            passed, detail, witness = check()
        except OrthodualError as e:
            passed, detail, witness = False, type(e).__name__, str(e)
        seconds = round(time.perf_counter() - start, 3)
        if passed:
            logger.info(f"{name} passed in {seconds}s")
        else:
            logger.warning(f"{name} failed: {detail} {witness or ''}")
        return CheckResult(name=name, passed=passed, detail=detail, witness=witness, seconds=seconds)

    def run_all(self, only: Optional[List[str]] = None, n_max: Optional[int] = None) -> List[CheckResult]:
        """Run the named checks; `n_max` bounds the enumerated ortholattices they sweep"""
        n_max = self.enumerate_default if n_max is None else n_max
        if n_max > catalog_service.enumerate_cap:
            raise SizeCapExceeded("verification enumeration", n_max, catalog_service.enumerate_cap)
        self.n_max = n_max
        return [self.run(name, check) for name, check in self.checks().items() if not only or name in only]


# Singleton instance
verification_service = VerificationService()
