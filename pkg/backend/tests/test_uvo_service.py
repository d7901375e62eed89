import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.models.errors import NotAnOrthospace, NotAPoset, SizeCapExceeded, VerificationFailed
from app.models.space import Orthoframe
from app.services.catalog_service import catalog_service
from app.services.lattice_service import lattice_service
from app.services.uvo_service import uvo_service
from tests.conftest import SMALL_ORTHO_NAMES, builtin, dual


def failed_axioms(X):
    return [a.axiom for a in uvo_service.validate_uvo(X).failures()]


class TestConstruction:
    def test_from_covers_closes_order_and_orthogonality(self):
        X = uvo_service.from_covers(["p", "q", "r"], [("p", "q"), ("q", "r")], [("r", "p")])
        assert X.le(0, 2)
        assert X.is_orth(0, 2) and X.is_orth(2, 0)

    def test_reflexive_orthogonality_is_rejected(self):
        with pytest.raises(NotAnOrthospace) as info:
            uvo_service.make_space(["p"], np.ones((1, 1), dtype=bool), np.ones((1, 1), dtype=bool))
        assert info.value.report.witness == ["p"]

    def test_asymmetric_orthogonality_is_rejected(self):
        perp = np.array([[0, 1], [0, 0]], dtype=bool)
        with pytest.raises(NotAnOrthospace):
            uvo_service.make_space(["p", "q"], np.eye(2, dtype=bool), perp)

    def test_order_must_be_a_poset(self):
        with pytest.raises(NotAPoset):
            uvo_service.make_space(["p", "q"], np.ones((2, 2), dtype=bool), np.zeros((2, 2), dtype=bool))


class TestSubsetCalculus:
    @given(st.sampled_from(SMALL_ORTHO_NAMES), st.data())
    def test_triple_star_is_star(self, name, data):
        X = dual(name)
        subset = data.draw(st.integers(min_value=0, max_value=X.universe))
        once = uvo_service.star(X, subset)
        assert uvo_service.star(X, uvo_service.star(X, once)) == once

    @given(st.sampled_from(SMALL_ORTHO_NAMES), st.data())
    def test_double_star_is_box_diamond(self, name, data):
        X = dual(name)
        subset = data.draw(st.integers(min_value=0, max_value=X.universe))
        assert uvo_service.star(X, uvo_service.star(X, subset)) == uvo_service.box_diamond(X, subset)

    @given(st.sampled_from(SMALL_ORTHO_NAMES), st.data())
    def test_interior_and_closure(self, name, data):
        X = dual(name)
        subset = data.draw(st.integers(min_value=0, max_value=X.universe))
        inner = uvo_service.interior(X, subset)
        assert uvo_service.is_up_set(X, inner)
        assert inner & ~subset == 0
        assert subset & ~uvo_service.closure(X, subset) == 0

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_up_sets_match_sweep(self, name):
        X = dual(name)
        assert sorted(uvo_service.up_sets(X)) == uvo_service.up_sets_bruteforce(X)

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_cor_matches_sweep(self, name):
        X = dual(name)
        assert list(uvo_service.cor(X).members) == uvo_service.cor_bruteforce(X)

    def test_sweep_cap(self):
        with pytest.raises(SizeCapExceeded):
            uvo_service.up_sets_bruteforce(dual("B8"), cap=3)


class TestCor:
    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_cor_of_spectrum_recovers_lattice(self, name):
        algebra, family = uvo_service.cor_algebra(dual(name))
        assert lattice_service.is_isomorphic(algebra, builtin(name))
        assert len(family) == builtin(name).n

    def test_cor_members_are_finite_unions(self):
        X = dual("O10")
        for u in uvo_service.cor(X).members:
            assert uvo_service.is_finite_union_of_cor(X, u)

    def test_cor_of_three_orthogonal_points_is_b8(self):
        X = catalog_service.space("m3_spectrum_perp")
        algebra, family = uvo_service.cor_algebra(X)
        assert len(family) == 8
        assert lattice_service.is_isomorphic(algebra, builtin("B8"))


class TestAxioms:
    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_spectra_are_uvo_spaces(self, name):
        report = uvo_service.validate_uvo(dual(name))
        assert report.passed
        assert [a.axiom for a in report.axioms] == [1, 2, 3, 4, 5]

    def test_orthogonal_pair_misses_a_filter(self):
        X = uvo_service.from_covers(["p", "q"], [], [("p", "q")])
        assert failed_axioms(X) == [4]

    def test_discrete_pair_has_no_basis(self):
        X = uvo_service.from_covers(["p", "q"], [])
        assert failed_axioms(X) == [3]

    def test_three_orthogonal_points_over_a_bottom_miss_filters(self):
        assert failed_axioms(catalog_service.space("m3_spectrum_perp")) == [4]


class TestCharacterization:
    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_char_map_is_a_homeomorphism(self, name):
        X = dual(name)
        g = uvo_service.char_map(X)
        assert g.verified
        assert sorted(g.map) == list(range(X.m))

    def test_char_map_needs_a_uvo_space(self):
        with pytest.raises(VerificationFailed):
            uvo_service.char_map(catalog_service.space("m3_spectrum_perp"))


class TestRegularSets:
    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_regular_sets_match_sweep(self, name):
        frame = dual(name).frame
        assert uvo_service.regular_sets(frame) == uvo_service.regular_sets_bruteforce(frame)

    def test_principal_frame_of_a_spectrum_keeps_every_point(self):
        X = dual("MO2")
        assert uvo_service.pframe(X).names == X.names

    def test_generated_subframe_readings(self):
        X = dual("TwoByTwo")
        a = X.index("↑a")
        assert uvo_service.is_generated_subframe(X, X.up[a])
        assert not uvo_service.is_generated_subframe(X, X.up[a], relaxed=False)
        assert uvo_service.is_generated_subframe(X, X.universe, relaxed=False)

    def test_orthoregular_sets_of_the_diamond(self):
        X = dual("TwoByTwo")
        a, top = X.index("↑a"), X.index("↑1")
        assert uvo_service.is_orthoregular(X, 1 << a)
        assert uvo_service.is_orthoregular(X, X.universe)
        assert not uvo_service.is_orthoregular(X, (1 << a) | (1 << top))

    def test_every_point_of_a_finite_space_is_principal(self):
        X = catalog_service.space("m3_spectrum_perp")
        assert uvo_service.principal_points(X) == X.universe

    def test_regular_algebra_of_the_diamond(self, two_by_two):
        algebra, members = uvo_service.regular_algebra(uvo_service.pframe(dual("TwoByTwo")))
        assert len(members) == 4
        assert lattice_service.is_isomorphic(algebra, two_by_two)

    def test_frame_without_orthogonality_has_two_regular_sets(self):
        frame = Orthoframe(names=("p", "q", "r"), rel=(0, 0, 0))
        algebra, members = uvo_service.regular_algebra(frame)
        assert members == [0, frame.universe]
        assert lattice_service.is_isomorphic(algebra, builtin("O2"))

    def test_regular_algebra_cap(self):
        frame = dual("TwoByTwo").frame
        with pytest.raises(SizeCapExceeded):
            uvo_service.regular_algebra(frame, cap=2)
        assert len(uvo_service.regular_algebra(frame, cap=3)[1]) == 4
