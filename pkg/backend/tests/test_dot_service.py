from app.services.catalog_service import catalog_service
from app.services.dictionary_service import dictionary_service
from app.services.dot_service import dot_service
from app.services.filter_service import filter_service
from tests.conftest import builtin, dual


class TestDot:
    def test_o2_hasse_diagram(self):
        graph = dot_service.graph(builtin("O2"))
        assert dot_service.node_count(graph) == 2
        assert dot_service.edge_count(graph, "solid") == 1
        assert graph.get_rankdir() == "BT"

    def test_m3_spectrum(self, m3):
        graph = dot_service.graph(filter_service.dual_space(m3))
        assert dot_service.node_count(graph) == 4
        assert dot_service.edge_count(graph, "dotted") == 3
        assert dot_service.edge_count(graph, "dashed") == 0

    def test_sum_of_spectra(self):
        S = dictionary_service.uvo_sum(dual("O2"), catalog_service.space("m3_spectrum_perp"))
        graph = dot_service.graph(S, "sum")
        assert dot_service.node_count(graph) == 9
        assert dot_service.edge_count(graph, "dotted") == 13

    def test_orthogonality_overlay(self):
        X = dual("TwoByTwo")
        assert dot_service.edge_count(dot_service.graph(X), "dashed") == 1
        assert dot_service.edge_count(dot_service.graph(X, perp=False), "dashed") == 0

    def test_rendered_text(self):
        text = dot_service.to_dot(catalog_service.space("m3_spectrum_perp"), "m3 spectrum")
        assert text.startswith("digraph m3_spectrum {")
        assert "⊥" in text
        assert '"y1"' in text
