#!/usr/bin/env python3

__all__ = (
    "builder", "dot", "extract", "graph", "lexicon", "tsv",
    "Triple", "KnowledgeGraph", "merge", "linearize",
    "calendar_to_triples", "conversation_to_triples", "build_graph",
    "LexiconExtractor", "ProcessExtractor", "split_words", "extract_svo",
    "load_lexicon", "default_lexicon", "candidate_stems",
    "export_dot",
    "dumps_triples", "parse_triples", "write_triples", "read_triples",
)

"""
The personal knowledge graph: building it from calendars and conversations, linearizing it for embedding, and
exporting it for inspection.
"""

from . import builder, dot, extract, graph, lexicon, tsv
from .builder import *
from .dot import *
from .extract import *
from .graph import *
from .lexicon import *
from .tsv import *
