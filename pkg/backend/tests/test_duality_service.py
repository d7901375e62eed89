import pytest

from app.models.errors import SizeCapExceeded, VerificationFailed
from app.services.catalog_service import catalog_service
from app.services.duality_service import duality_service
from app.services.lattice_service import lattice_service
from tests.conftest import SMALL_ORTHO_NAMES, builtin, dual

HOM_PAIRS = [("O2", "TwoByTwo"), ("TwoByTwo", "O2"), ("TwoByTwo", "TwoByTwo"), ("TwoByTwo", "MO2"),
             ("MO2", "MO2"), ("O6", "O6"), ("B4", "O6")]


class TestUvoMaps:
    def test_identity_is_a_uvo_map(self):
        X = dual("MO2")
        identity = duality_service.identity_map(X)
        assert identity.verified
        assert duality_service.is_homeomorphism(identity)
        assert duality_service.compose_maps(identity, identity).map == identity.map

    def test_order_violation_is_not_spectral(self):
        X = dual("TwoByTwo")
        report = duality_service.check_map([2, 1, 0], X, X)
        assert not report.spectral
        assert not report.verified
        with pytest.raises(VerificationFailed):
            duality_service.make_map(X, X, [2, 1, 0])

    def test_spectral_and_p_morphism_checks(self):
        X = dual("TwoByTwo")
        a, a_, top = X.index("↑a"), X.index("↑a'"), X.index("↑1")
        assert duality_service.is_spectral_map([0, 1, 2], X, X) == (True, None)
        assert duality_service.is_spectral_map([2, 1, 0], X, X)[0] is False
        swap = [0] * X.m
        swap[a], swap[a_], swap[top] = a_, a, top
        assert duality_service.is_p_morphism_nonperp(swap, X, X) == (True, None)
        collapse = [0] * X.m
        collapse[a], collapse[a_], collapse[top] = a, a_, a
        assert duality_service.is_p_morphism_nonperp(collapse, X, X)[0] is False

    def test_spectral_readings_must_agree(self):
        # COR is {∅, X}: every map has open preimages, but this swap breaks the order
        X = dual("M3_lattice_only")
        bottom, a = X.index("↑1"), X.index("↑a")
        swap = list(range(X.m))
        swap[bottom], swap[a] = a, bottom
        with pytest.raises(VerificationFailed, match="spectral map"):
            duality_service.is_spectral_map(swap, X, X)
        with pytest.raises(VerificationFailed):
            duality_service.check_map(swap, X, X)
        assert duality_service.is_spectral_map(list(range(X.m)), X, X) == (True, None)

    def test_constant_map_needs_relaxed_back(self, two_by_two):
        O2 = builtin("O2")
        a, a_ = two_by_two.index("a"), two_by_two.index("a'")
        mapping = [0] * two_by_two.n
        mapping[a_] = mapping[two_by_two.top] = 1
        h = lattice_service.make_hom(two_by_two, O2, mapping)
        f = duality_service.hom_to_uvomap(h)
        assert f.map == (dual("TwoByTwo").index("↑a'"),)
        assert f.report.back
        assert not f.report.back_literal

    def test_search_cap(self):
        with pytest.raises(SizeCapExceeded):
            duality_service.all_uvo_maps(dual("B8"), dual("B8"), cap=4)


class TestFunctors:
    @pytest.mark.parametrize("left,right", HOM_PAIRS)
    def test_homs_and_maps_are_counted_alike(self, left, right):
        L, M = builtin(left), builtin(right)
        homs = catalog_service.all_homs(L, M)
        maps = duality_service.all_uvo_maps(dual(right), dual(left))
        assert len(homs) == len(maps)
        assert sorted(duality_service.hom_to_uvomap(h).map for h in homs) == sorted(f.map for f in maps)

    def test_diamond_endomorphisms(self, two_by_two):
        homs = catalog_service.all_homs(two_by_two, two_by_two)
        assert len(homs) == 4
        assert sum(h.is_bijective for h in homs) == 2

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_identity_dualizes_to_identity(self, name):
        L = builtin(name)
        f = duality_service.hom_to_uvomap(lattice_service.identity_hom(L))
        assert f.map == tuple(range(L.n - 1))

    def test_composition_is_reversed(self, two_by_two, mo2):
        O2 = builtin("O2")
        for h in catalog_service.all_homs(O2, two_by_two):
            for k in catalog_service.all_homs(two_by_two, mo2):
                whole = duality_service.hom_to_uvomap(lattice_service.compose(h, k))
                parts = duality_service.compose_maps(duality_service.hom_to_uvomap(k),
                                                     duality_service.hom_to_uvomap(h))
                assert whole.map == parts.map

    @pytest.mark.parametrize("names", [("O2", "TwoByTwo", "O2"), ("TwoByTwo", "TwoByTwo", "TwoByTwo"),
                                       ("TwoByTwo", "O2", "TwoByTwo"), ("MO2", "TwoByTwo", "O2")])
    def test_lifting_reverses_composition_of_uvo_maps(self, names):
        X, Y, Z = (dual(name) for name in names)
        pairs = [(f, g) for f in duality_service.all_uvo_maps(X, Y) for g in duality_service.all_uvo_maps(Y, Z)]
        assert pairs
        for f, g in pairs:
            assert duality_service.check_contravariance(f, g) == (True, None)

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_representation_map(self, name):
        L = builtin(name)
        rep = duality_service.representation_map(L)
        assert rep.is_bijective
        assert rep.map[L.bot] == rep.target.bot
        assert rep.map[L.top] == rep.target.top


class TestNaturality:
    @pytest.mark.parametrize("left,right", HOM_PAIRS)
    def test_naturality(self, left, right):
        L = builtin(left)
        for h in catalog_service.all_homs(L, builtin(right)):
            assert duality_service.check_naturality(L, h) == (True, None)

    @pytest.mark.parametrize("left,right", HOM_PAIRS)
    def test_conaturality(self, left, right):
        X = dual(right)
        for f in duality_service.all_uvo_maps(X, dual(left)):
            assert duality_service.check_conaturality(X, f) == (True, None)

    def test_uvomap_round_trip(self, mo2):
        for h in catalog_service.all_homs(mo2, mo2):
            lifted = duality_service.uvomap_to_hom(duality_service.hom_to_uvomap(h))
            assert lifted.is_bijective == h.is_bijective


class TestEmbeddings:
    def test_surjection_dualizes_to_embedding(self, two_by_two):
        O2 = builtin("O2")
        P = lattice_service.product(O2, two_by_two)
        f = duality_service.hom_to_uvomap(lattice_service.projection(P, O2, two_by_two, 1))
        assert f.is_injective
        assert duality_service.is_uvo_embedding(f) == (True, None)

    def test_non_injective_map_is_not_an_embedding(self, two_by_two):
        O2 = builtin("O2")
        P = lattice_service.product(O2, two_by_two)
        inclusion = lattice_service.subalgebra_generated(P, 0)[1]
        f = duality_service.hom_to_uvomap(inclusion)
        assert f.is_surjective
        assert duality_service.is_uvo_embedding(f)[0] is False
