import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.models.errors import ComplementLawFails, NotALattice, NotAPoset, NotInvolutive, NotOrderReversing
from app.models.lattice import Congruence, LatticeCandidate
from app.services.catalog_service import catalog_service
from app.services.lattice_service import lattice_service
from tests.conftest import ORTHO_NAMES, builtin


def candidate_from(L, ocomp):
    return LatticeCandidate(L.names, L.leq, tuple(ocomp))


class TestValidation:
    @pytest.mark.parametrize("name", ORTHO_NAMES)
    def test_catalog_entries_validate(self, name):
        L = builtin(name)
        assert lattice_service.check_ortholattice(candidate_from(L, L.ocomp)).valid

    def test_m3_is_a_plain_lattice(self, m3):
        assert not m3.is_ortho
        assert m3.n == 5

    def test_complement_law_witness(self, m3):
        a, b, c = m3.index("a"), m3.index("b"), m3.index("c")
        ocomp = list(range(5))
        ocomp[0], ocomp[4] = 4, 0
        ocomp[a], ocomp[b], ocomp[c] = b, a, c
        report = lattice_service.check_ortholattice(LatticeCandidate(m3.names, m3.leq, tuple(ocomp)))
        assert not report.valid
        assert report.law == ComplementLawFails.law
        assert report.witness == ["c"]
        with pytest.raises(ComplementLawFails):
            lattice_service.validate_ortholattice(LatticeCandidate(m3.names, m3.leq, tuple(ocomp)))

    def test_not_involutive(self, two_by_two):
        report = lattice_service.check_ortholattice(candidate_from(two_by_two, (3, 2, 3, 0)))
        assert report.law == NotInvolutive.law
        assert report.witness == ["a"]

    def test_not_order_reversing(self, o6):
        a, b, a_, b_ = (o6.index(x) for x in ("a", "b", "a'", "b'"))
        ocomp = [5, b, a, b_, a_, 0]
        report = lattice_service.check_ortholattice(candidate_from(o6, ocomp))
        assert report.law == NotOrderReversing.law
        with pytest.raises(NotOrderReversing):
            lattice_service.validate_ortholattice(candidate_from(o6, ocomp))

    def test_two_upper_bounds_is_not_a_lattice(self):
        names = ("0", "a", "b", "c", "d", "1")
        covers = [("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")]
        with pytest.raises(NotALattice):
            lattice_service.from_covers(names, covers)

    def test_cycle_is_not_a_poset(self):
        leq = np.array([[1, 1], [1, 1]], dtype=bool)
        report = lattice_service.check_poset(("p", "q"), leq)
        assert report.law == NotAPoset.law


class TestStructure:
    def test_o10_first_m3_witness(self, o10):
        witness = next(lattice_service.m3_witnesses(o10))
        assert witness.names == ["0", "a", "a'", "d", "1"]

    def test_o10_first_n5_witness(self, o10):
        witness = next(lattice_service.n5_witnesses(o10))
        assert witness.names == ["0", "b'", "c", "a", "1"]

    def test_o10_pentagon_through_c_prime(self, o10):
        sets = {frozenset(w.names) for w in lattice_service.n5_witnesses(o10)}
        assert frozenset({"0", "c'", "b", "d", "1"}) in sets

    def test_distributive_reports_m3_first(self, o10):
        distributive, witness = lattice_service.is_distributive(o10)
        assert not distributive
        assert witness.kind == "M3"

    @pytest.mark.parametrize("name", catalog_service.names())
    def test_distributivity_two_ways(self, name):
        L = builtin(name)
        assert lattice_service.is_distributive(L)[0] == lattice_service.check_distributive_laws(L)[0]

    def test_boolean_algebras_are_distributive(self, b8):
        assert lattice_service.is_distributive(b8) == (True, None)

    def test_mo2_modular_not_distributive(self, mo2):
        assert lattice_service.is_modular(mo2)[0]
        assert not lattice_service.is_distributive(mo2)[0]

    def test_n5_is_not_modular(self):
        modular, witness = lattice_service.is_modular(builtin("N5_lattice_only"))
        assert not modular
        assert len(witness.elements) == 3

    def test_o6_orthomodular_witness(self, o6):
        orthomodular, witness = lattice_service.is_orthomodular(o6)
        assert not orthomodular
        assert witness.names == ["a", "b'"]

    def test_mo2_orthomodular(self, mo2):
        assert lattice_service.is_orthomodular(mo2) == (True, None)

    @pytest.mark.parametrize("name", ORTHO_NAMES)
    def test_de_morgan(self, name):
        assert lattice_service.check_de_morgan(builtin(name))[0]

    def test_atoms_of_o10(self, o10):
        assert set(o10.name_list(lattice_service.atoms(o10))) == {"a", "a'", "d", "d'", "b'", "c'"}

    def test_sasaki_hook(self, mo2):
        a, b = mo2.index("a"), mo2.index("b")
        assert mo2.names[lattice_service.sasaki_hook(mo2, a, b)] == "a'"

    @given(st.sampled_from(ORTHO_NAMES), st.data())
    def test_absorption(self, name, data):
        L = builtin(name)
        a = data.draw(st.integers(min_value=0, max_value=L.n - 1))
        b = data.draw(st.integers(min_value=0, max_value=L.n - 1))
        mt, jt = L.meet_table, L.join_table
        assert mt[a][b] == mt[b][a]
        assert mt[a][jt[a][b]] == a
        assert jt[a][mt[a][b]] == a
        assert L.ocomp[L.ocomp[a]] == a


class TestHomomorphisms:
    def test_identity_and_composition(self, two_by_two):
        identity = lattice_service.identity_hom(two_by_two)
        assert lattice_service.check_hom(two_by_two, two_by_two, identity.map) is None
        assert lattice_service.compose(identity, identity).map == identity.map

    def test_rejects_non_homomorphism(self, two_by_two):
        witness = lattice_service.check_hom(two_by_two, two_by_two, (0, 1, 1, 3))
        assert witness is not None

    def test_projections(self, two_by_two):
        O2 = builtin("O2")
        P = lattice_service.product(O2, two_by_two)
        first = lattice_service.projection(P, O2, two_by_two, 0)
        second = lattice_service.projection(P, O2, two_by_two, 1)
        assert first.is_surjective and second.is_surjective


class TestConstructions:
    def test_product_of_diamonds_is_b16(self, two_by_two):
        P = lattice_service.product(two_by_two, two_by_two)
        assert P.n == 16
        assert lattice_service.is_isomorphic(P, builtin("B16"))

    def test_o2_times_diamond_is_b8(self, two_by_two, b8):
        assert lattice_service.is_isomorphic(lattice_service.product(builtin("O2"), two_by_two), b8)

    def test_subalgebra_generated(self, o10):
        sub, inclusion = lattice_service.subalgebra_generated(o10, 1 << o10.index("a"))
        assert set(sub.names) == {"0", "a", "a'", "1"}
        assert inclusion.is_injective

    def test_congruence_counts(self, two_by_two, mo2, b8):
        assert len(lattice_service.congruences_bruteforce(two_by_two)) == 4
        assert len(lattice_service.congruences_bruteforce(mo2)) == 2
        assert len(lattice_service.congruences_bruteforce(b8)) == 8

    def test_quotient(self, two_by_two):
        theta = Congruence.from_labels([0, 0, 1, 1])
        Q, q = lattice_service.quotient(two_by_two, theta)
        assert Q.n == 2 and Q.is_ortho
        assert q.is_surjective

    def test_isomorphism(self, mo2, o6):
        relabelled = lattice_service.from_covers(
            ["0", "y", "x", "y'", "x'", "1"],
            [("0", "x"), ("0", "x'"), ("0", "y"), ("0", "y'"), ("x", "1"), ("x'", "1"), ("y", "1"), ("y'", "1")],
            [("x", "x'"), ("y", "y'")],
        )
        assert lattice_service.is_isomorphic(mo2, relabelled)
        assert not lattice_service.is_isomorphic(mo2, o6)
