import pytest

from app.models.errors import NotOrthomodular, SizeCapExceeded, VerificationFailed
from app.services import bitsets
from app.services.catalog_service import catalog_service
from app.services.dictionary_service import dictionary_service
from app.services.duality_service import duality_service
from app.services.filter_service import filter_service
from app.services.lattice_service import lattice_service
from tests.conftest import SMALL_ORTHO_NAMES, builtin, dual


class TestCompleteness:
    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_meet_and_join_formulas(self, name):
        X = dual(name)
        assert dictionary_service.meet_formula_check(X) == (True, None)
        assert dictionary_service.join_formula_check(X) == (True, None)

    @pytest.mark.parametrize("name", ["TwoByTwo", "MO2", "O6"])
    def test_finite_spectra_are_complete(self, name):
        assert dictionary_service.is_complete_uvo(dual(name))

    def test_completeness_cap(self):
        with pytest.raises(SizeCapExceeded):
            dictionary_service.is_complete_uvo(dual("O10"), cap=4)


class TestAtoms:
    def test_atoms_are_isolated_points(self, b8):
        X = dual("B8")
        mapping = dictionary_service.atoms_bijection(b8)
        assert len(mapping) == 3
        assert bitsets.from_indices(mapping.values()) == dictionary_service.isolated_points(X)

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_finite_lattices_are_atomic(self, name):
        L = builtin(name)
        assert dictionary_service.is_atomic(L)
        assert not dictionary_service.is_atomless(L)

    def test_degenerate_lattice_is_atomless(self):
        assert dictionary_service.is_atomless(builtin("Degenerate"))


class TestSums:
    def test_sum_of_o2_and_m3_spectra(self):
        S = dictionary_service.uvo_sum(dual("O2"), catalog_service.space("m3_spectrum_perp"))
        assert S.m == 9
        assert len(S.covers) == 13
        assert S.tags[0] == ("L", 0)
        assert S.tags[1] == ("R", 0)
        assert dictionary_service.sum_order_check(S) == (True, None)

    def test_sum_without_orthogonality_is_not_generated(self, m3):
        X, Y = dual("O2"), filter_service.dual_space(m3)
        with pytest.raises(VerificationFailed):
            dictionary_service.uvo_sum(X, Y)
        S = dictionary_service.uvo_sum(X, Y, verify=False)
        assert (S.m, len(S.covers)) == (9, 13)
        assert dictionary_service.sum_order_check(S)[0] is False

    def test_clashing_names_are_prefixed(self):
        X = dual("TwoByTwo")
        S = dictionary_service.uvo_sum(X, X)
        assert S.names[0] == "l.↑a"
        assert S.names[X.m] == "r.↑a"
        assert S.names[2 * X.m] == "<↑a,↑a>"

    def test_sum_order_is_generated(self):
        S = dictionary_service.uvo_sum(dual("TwoByTwo"), dual("MO2"))
        assert dictionary_service.sum_order_check(S) == (True, None)

    @pytest.mark.parametrize("left,right", [("O2", "TwoByTwo"), ("TwoByTwo", "MO2"), ("O2", "O6")])
    def test_cor_of_sum_is_product(self, left, right):
        assert dictionary_service.sum_cor_product_check(dual(left), dual(right)) == (True, None)

    @pytest.mark.parametrize("left,right", [("O2", "TwoByTwo"), ("TwoByTwo", "MO2")])
    def test_product_spectrum_is_the_sum(self, left, right):
        f = dictionary_service.product_sum_homeo(builtin(left), builtin(right))
        assert duality_service.is_homeomorphism(f)

    def test_coprojections_use_the_relaxed_back_condition(self):
        S = dictionary_service.uvo_sum(dual("O2"), dual("TwoByTwo"))
        for inclusion in dictionary_service.coprojections(S):
            assert inclusion.report.back
            assert not inclusion.report.back_literal

    def test_sum_is_a_coproduct(self):
        diamond = dual("TwoByTwo")
        assert dictionary_service.coproduct_check(dual("O2"), diamond, diamond) == (True, None)

    def test_subalgebra_inclusion_dualizes_to_surjection(self, o10):
        assert dictionary_service.subalgebra_image_check(o10, [o10.index("a")]) == (True, None)
        assert dictionary_service.subalgebra_image_check(o10, [o10.index("b"), o10.index("d")]) == (True, None)


class TestCompletions:
    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_normal_subsets_match_sweep(self, name):
        L = builtin(name)
        assert dictionary_service.normal_subsets(L) == dictionary_service.normal_subsets_bruteforce(L)

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_macneille_completion_of_finite_lattice(self, name):
        L = builtin(name)
        completion = dictionary_service.macneille(L)
        assert completion.first.n == completion.second.n == L.n
        assert sorted(completion.iso) == list(range(L.n))

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_canonical_extension_of_finite_lattice(self, name):
        L = builtin(name)
        extension = dictionary_service.canonical_extension(L)
        assert extension.extension.n == L.n
        assert extension.embedding.is_bijective

    def test_maclaren_frames(self, mo2):
        full, reduced = dictionary_service.maclaren_regular_algebras(mo2)
        assert full.n == reduced.n == mo2.n
        assert dictionary_service.maclaren_frame(mo2, drop_bottom=True).m == mo2.n - 1


class TestCongruences:
    @pytest.mark.parametrize("name,expected", [("B8", 8), ("MO2", 2), ("TwoByTwo", 4), ("B4", 4)])
    def test_congruences_match_generated_subframes(self, name, expected):
        correspondence = dictionary_service.congruence_correspondence(builtin(name))
        assert len(correspondence.pairs) == expected
        assert len(correspondence.pugs) == expected

    def test_total_congruence_maps_to_empty_set(self, b8):
        total = lattice_service.congruences_bruteforce(b8)
        everything = [theta for theta in total if theta.num_classes == 1][0]
        assert dictionary_service.congruence_to_pugs(b8, everything) == 0
        assert dictionary_service.pugs_to_congruence(b8, 0) == everything

    def test_identity_congruence_maps_to_whole_space(self, mo2):
        identity = lattice_service.congruences_bruteforce(mo2)[-1]
        assert identity.num_classes == mo2.n
        assert dictionary_service.congruence_to_pugs(mo2, identity) == dual("MO2").universe

    def test_requires_orthomodularity(self, o6):
        with pytest.raises(NotOrthomodular) as info:
            dictionary_service.congruence_correspondence(o6)
        assert info.value.witness == ["a", "b'"]


def test_catalog_spaces_satisfy_the_formulas():
    for name in catalog_service.space_names():
        X = catalog_service.space(name)
        assert dictionary_service.meet_formula_check(X)[0]
        assert dictionary_service.join_formula_check(X)[0]
