#!/usr/bin/env python3

__all__ = (
    "export_dot",
)

"""
Graphviz DOT export, for visualizing the knowledge graph.
"""

from .graph import KnowledgeGraph


def _quote(label: str) -> str:
    return '"%s"' % label.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def export_dot(graph: KnowledgeGraph) -> str:
    """
    :param graph: The graph to export.
    :return: A DOT digraph with one labelled edge per triple, in graph order.
    """

    lines = ["digraph kg {"]
    for triple in graph.triples:
        lines.append("  %s -> %s [label=%s];" % (_quote(triple.source), _quote(triple.target), _quote(triple.relation)))
    lines.append("}")
    return "\n".join(lines) + "\n"
