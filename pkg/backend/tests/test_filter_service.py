import pytest

from app.models.errors import Improper
from app.services import bitsets
from app.services.catalog_service import catalog_service
from app.services.filter_service import filter_service
from tests.conftest import ORTHO_NAMES, SMALL_ORTHO_NAMES, builtin, dual


class TestFilters:
    @pytest.mark.parametrize("name", ORTHO_NAMES)
    def test_one_point_per_nonzero_element(self, name):
        L = builtin(name)
        assert len(filter_service.enumerate_proper_filters(L)) == L.n - 1

    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES + ["M3_lattice_only", "N5_lattice_only"])
    def test_principal_filters_match_oracle(self, name):
        L = builtin(name)
        assert filter_service.filter_enumeration_oracle(L) == filter_service.principal_filters(L)

    def test_generated_filter(self, two_by_two):
        a = two_by_two.index("a")
        assert filter_service.filter_generated(two_by_two, 1 << a) == two_by_two.up[a]

    def test_complementary_generators_are_improper(self, two_by_two):
        generators = bitsets.from_indices([two_by_two.index("a"), two_by_two.index("a'")])
        with pytest.raises(Improper):
            filter_service.filter_generated(two_by_two, generators)

    def test_filter_orthogonality(self, two_by_two):
        up = two_by_two.up
        a, a_, top = two_by_two.index("a"), two_by_two.index("a'"), two_by_two.top
        assert filter_service.ortho_rel(two_by_two, up[a], up[a_])
        assert not filter_service.ortho_rel(two_by_two, up[a], up[top])


class TestDualSpace:
    def test_diamond_spectrum(self, two_by_two):
        X = dual("TwoByTwo")
        assert X.names == ("↑a", "↑a'", "↑1")
        assert X.perp_pairs == [(0, 1)]
        assert X.covers == [(2, 0), (2, 1)]

    def test_o2_spectrum_is_a_point(self):
        assert dual("O2").m == 1

    def test_degenerate_spectrum_is_empty(self):
        assert dual("Degenerate").m == 0

    def test_plain_lattice_has_empty_orthogonality(self, m3):
        X = filter_service.dual_space(m3)
        assert X.m == 4
        assert not X.perp.any()
        assert len(X.covers) == 3
        assert sum(1 for x in range(X.m) if X.down[x] == 1 << x) == 1

    def test_spectrum_is_cached(self, o10):
        assert filter_service.dual_space(o10) is filter_service.dual_space(o10)

    @pytest.mark.parametrize("name", ORTHO_NAMES)
    def test_order_is_dual_of_lattice(self, name):
        assert filter_service.check_order_dual(builtin(name))

    def test_basic_opens(self, two_by_two):
        X = dual("TwoByTwo")
        assert filter_service.basic_open(two_by_two, two_by_two.bot) == 0
        assert filter_service.basic_open(two_by_two, two_by_two.top) == X.universe
        assert X.format(filter_service.basic_open(two_by_two, two_by_two.index("a"))) == "{↑a}"


class TestSpectral:
    @pytest.mark.parametrize("name", SMALL_ORTHO_NAMES)
    def test_spectra_are_spectral(self, name):
        report = filter_service.verify_spectral(dual(name))
        assert report.passed
        assert report.witness is None

    @pytest.mark.parametrize("name", catalog_service.space_names())
    def test_catalog_spaces_are_spectral(self, name):
        assert filter_service.verify_spectral(catalog_service.space(name)).passed

    def test_open_count_of_diamond_spectrum(self):
        # up-sets of a V-shaped poset: ∅, {↑a}, {↑a'}, {↑a,↑a'}, everything
        assert filter_service.verify_spectral(dual("TwoByTwo")).open_count == 5
