#!/usr/bin/env python3

__all__ = (
    "Triple", "KnowledgeGraph",
    "merge", "linearize",
)

"""
The personal knowledge graph: a set of (source, relation, target) triples.
"""

import logging
from typing import Any, FrozenSet, Iterable, Iterator, List, Tuple

logger = logging.getLogger("kgrag.kg.graph")


class Triple:
    """
    A labelled edge in the knowledge graph, remembering which document it came from.
    """

    __slots__ = ("source", "relation", "target", "provenance")

    @property
    def key(self) -> Tuple[str, str, str]:
        """
        :return: The (source, relation, target) labels, which identify this triple within a graph.
        """

        return self.source, self.relation, self.target

    def __init__(self, source: str, relation: str, target: str, provenance: str = "") -> None:
        """
        :param source: The source node's label.
        :param relation: The edge label.
        :param target: The target node's label.
        :param provenance: The ID of the document that this triple was extracted from.
        """

        for name, label in (("source", source), ("relation", relation), ("target", target)):
            if not label.strip():
                raise ValueError("Triple %s label must not be empty." % name)

        self.source = source
        self.relation = relation
        self.target = target
        self.provenance = provenance

    def __repr__(self) -> str:
        return "<Triple(source=%r, relation=%r, target=%r, provenance=%r) at %x>" % (
            self.source, self.relation, self.target, self.provenance, id(self),
        )

    def __str__(self) -> str:
        return "(%s, %s, %s)" % (self.source, self.relation, self.target)

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is Triple and
            other.source == self.source and
            other.relation == self.relation and
            other.target == self.target and
            other.provenance == self.provenance
        )

    def __hash__(self) -> int:
        return hash((self.source, self.relation, self.target, self.provenance))


class KnowledgeGraph:
    """
    An immutable, ordered set of triples. The first occurrence of a (source, relation, target) wins.
    """

    __slots__ = ("_triples", "_nodes")

    @property
    def triples(self) -> Tuple[Triple, ...]:
        """
        :return: The triples in this graph, in insertion order.
        """

        return self._triples

    @property
    def nodes(self) -> FrozenSet[str]:
        """
        :return: The labels of every source and target in this graph.
        """

        return self._nodes

    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        seen = set()
        triples_ = []
        for triple in triples:
            key = triple.key
            if key in seen:
                continue
            seen.add(key)
            triples_.append(triple)

        self._triples = tuple(triples_)
        self._nodes = frozenset(
            label for triple in self._triples for label in (triple.source, triple.target)
        )

    def __repr__(self) -> str:
        return "<KnowledgeGraph(triples=%i, nodes=%i) at %x>" % (len(self._triples), len(self._nodes), id(self))

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return other.__class__ is KnowledgeGraph and other._triples == self._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, item: Any) -> bool:
        if item.__class__ is Triple:
            item = item.key
        return any(triple.key == item for triple in self._triples)


def merge(a: KnowledgeGraph, b: KnowledgeGraph) -> KnowledgeGraph:
    """
    Unions two graphs.

    :param a: The first graph, its order is kept.
    :param b: The second graph, its novel triples are appended in order.
    :return: The merged graph.
    """

    return KnowledgeGraph(a.triples + b.triples)


def linearize(graph: KnowledgeGraph) -> List[Tuple[str, str]]:
    """
    Renders each triple as a sentence-like line of text, for embedding.

    :param graph: The graph to linearize.
    :return: (line, provenance) pairs, one per triple, in graph order.
    """

    return [
        ("%s %s %s." % (triple.source, triple.relation, triple.target), triple.provenance) for triple in graph.triples
    ]
