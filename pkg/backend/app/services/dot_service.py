"""
DOT Service - Hasse and specialization diagrams in graphviz DOT
"""

import logging
import re
from typing import Union

import pydotplus

from app.models.lattice import BoundedLattice
from app.models.space import UvoSpace

logger = logging.getLogger(__name__)


def _quoted(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


class DotService:
    """Service for diagram export"""

    def _graph(self, name: str) -> pydotplus.Dot:
        graph = pydotplus.Dot(graph_name=re.sub(r"\W", "_", name) or "G", graph_type="digraph")
        graph.set_rankdir("BT")
        graph.set_node_defaults(shape="plaintext")
        return graph

    def lattice_graph(self, L: BoundedLattice, name: str = "lattice") -> pydotplus.Dot:
        """Hasse covers as solid edges, lower element first"""
        graph = self._graph(name)
        for a in range(L.n):
            graph.add_node(pydotplus.Node(f"n{a}", label=_quoted(L.names[a])))
        for a, b in L.covers:
            graph.add_edge(pydotplus.Edge(f"n{a}", f"n{b}", style="solid", arrowhead="none"))
        return graph

    def space_graph(self, X: UvoSpace, name: str = "space", perp: bool = True) -> pydotplus.Dot:
        """Specialization covers dotted; orthogonal pairs as an undirected overlay"""
        graph = self._graph(name)
        for x in range(X.m):
            graph.add_node(pydotplus.Node(f"n{x}", label=_quoted(X.names[x])))
        for x, y in X.covers:
            graph.add_edge(pydotplus.Edge(f"n{x}", f"n{y}", style="dotted", arrowhead="none"))
        if perp:
            for x, y in X.perp_pairs:
                graph.add_edge(pydotplus.Edge(
                    f"n{x}", f"n{y}", style="dashed", dir="none", constraint="false", label=_quoted("⊥"),
                ))
        return graph

    def graph(self, value: Union[BoundedLattice, UvoSpace], name: str = "", perp: bool = True) -> pydotplus.Dot:
        if isinstance(value, UvoSpace):
            return self.space_graph(value, name or "space", perp)
        return self.lattice_graph(value, name or "lattice")

    def to_dot(self, value: Union[BoundedLattice, UvoSpace], name: str = "", perp: bool = True) -> str:
        graph = self.graph(value, name, perp)
        logger.debug(f"DOT graph with {self.node_count(graph)} nodes and {len(graph.get_edges())} edges")
        return graph.to_string()

    def node_count(self, graph: pydotplus.Dot) -> int:
        return sum(1 for node in graph.get_nodes() if node.get_name() not in ("node", "edge", "graph"))

    def edge_count(self, graph: pydotplus.Dot, style: str) -> int:
        return sum(1 for edge in graph.get_edges() if edge.get_style() == style)


# Singleton instance
dot_service = DotService()
