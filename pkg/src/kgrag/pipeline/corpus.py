#!/usr/bin/env python3

__all__ = (
    "baseline_documents", "build_baseline_corpus", "build_kg_corpus",
)

"""
The two compared corpora: raw calendar and conversation text, and linearized knowledge graph triples.
"""

import logging
from typing import Iterable, List, Tuple, Union

from .config import PipelineConfig
from ..abc import TripleExtractor
from ..dataset import Calendar, ConversationMessage, group_conversations
from ..index import ChunkKind, DocumentChunk, chunk_documents
from ..kg import build_graph, linearize

logger = logging.getLogger("kgrag.pipeline.corpus")


def baseline_documents(
        calendar: Union[Calendar, None], messages: Iterable[ConversationMessage] = (),
) -> List[Tuple[str, str]]:
    """
    Serializes the raw data into readable documents: one per calendar month, then one per conversation.

    :return: (text, provenance) pairs, the provenance being the month or the conversation ID.
    """

    documents = []
    if calendar is not None:
        for month, events in calendar.months.items():
            if not events:
                continue
            lines = ["%s's calendar for %s." % (calendar.owner, month)]
            lines.extend("%s." % event for event in events)
            documents.append(("\n".join(lines), month))

    for conversation_id, conversation in group_conversations(messages).items():
        lines = ["%s: %s" % (message.sender, message.text) for message in conversation]
        documents.append(("\n".join(lines), conversation_id))

    return documents


def build_baseline_corpus(
        calendar: Union[Calendar, None],
        messages: Iterable[ConversationMessage] = (),
        config: Union[PipelineConfig, None] = None,
) -> List[DocumentChunk]:
    """
    Builds the baseline corpus, with events as "<title> on <date> from <time>." lines and messages as
    "<sender>: <text>" lines, chunked per the config.

    :param calendar: The calendar, if any.
    :param messages: The conversation messages.
    :param config: The chunking config, if None, the defaults.
    :return: The raw chunks.
    """

    if config is None:
        config = PipelineConfig()
    chunks = chunk_documents(
        baseline_documents(calendar, messages), config.max_chars, config.overlap_chars, ChunkKind.RAW,
    )
    logger.debug("Built baseline corpus of %i chunk(s).", len(chunks))
    return chunks


def build_kg_corpus(
        calendar: Union[Calendar, None],
        messages: Iterable[ConversationMessage] = (),
        extractor: Union[TripleExtractor, None] = None,
        config: Union[PipelineConfig, None] = None,
) -> List[DocumentChunk]:
    """
    Builds the knowledge graph corpus, one chunk per linearized triple (longer lines are chunked like documents).

    :param calendar: The calendar, if any.
    :param messages: The conversation messages.
    :param extractor: The triple extractor for message texts, if None, the lexicon extractor.
    :param config: The chunking config, if None, the defaults.
    :return: The kg chunks.
    """

    if config is None:
        config = PipelineConfig()
    graph = build_graph(calendar, messages, extractor)
    chunks = chunk_documents(linearize(graph), config.max_chars, config.overlap_chars, ChunkKind.KG)
    logger.debug("Built kg corpus of %i chunk(s) from %i triple(s).", len(chunks), len(graph))
    return chunks
