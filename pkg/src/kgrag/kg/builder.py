#!/usr/bin/env python3

__all__ = (
    "calendar_to_triples", "conversation_to_triples", "build_graph",
)

"""
Builds knowledge graph triples from the personal dataset.
"""

import logging
import time
from typing import Iterable, List, Set, Tuple, Union

from .extract import extract_svo
from .graph import KnowledgeGraph, Triple, merge
from ..abc import TripleExtractor
from ..dataset import Calendar, ConversationMessage

logger = logging.getLogger("kgrag.kg.builder")

HAS_EVENT = "has event"
DATE = "date"
TIME = "time"
SAID_IN = "said in"


def event_label(title: str, date: str) -> str:
    """
    :return: The node label for an event, disambiguated by its date.
    """

    return "%s on %s" % (title, date)


def calendar_to_triples(calendar: Calendar) -> List[Triple]:
    """
    Maps every event E to (owner, "has event", L), (L, "date", E.date) and (L, "time", E.time), where L is
    "<title> on <date>". The provenance is the month group.

    :param calendar: The calendar.
    :return: Three triples per event, in calendar order.
    """

    triples = []
    for month, events in calendar.months.items():
        for event in events:
            date = event.date.isoformat()
            label = event_label(event.title, date)
            triples.append(Triple(calendar.owner, HAS_EVENT, label, month))
            triples.append(Triple(label, DATE, date, month))
            triples.append(Triple(label, TIME, event.time, month))
    return triples


def conversation_to_triples(
        messages: Iterable[ConversationMessage], extractor: Union[TripleExtractor, None] = None,
) -> List[Triple]:
    """
    Maps every message to a (sender, "said in", conversation_id) triple plus whatever the extractor finds in its text.
    Duplicate (source, relation, target) triples are collapsed, keeping the first.

    :param messages: The messages.
    :param extractor: The triple extractor, if None, the lexicon extractor.
    :return: The triples, in message order.
    """

    start = time.perf_counter_ns()

    seen: Set[Tuple[str, str, str]] = set()
    triples = []
    count = 0

    for message in messages:
        count += 1
        provenance = message.provenance
        for triple in (
            Triple(message.sender, SAID_IN, message.conversation_id, provenance),
            *extract_svo(message.text, extractor, provenance),
        ):
            if triple.key in seen:
                continue
            seen.add(triple.key)
            triples.append(triple)

    logger.debug(
        "Extracted %i triple(s) from %i message(s) in %.1fms.",
        len(triples), count, (time.perf_counter_ns() - start) / 1_000_000,
    )
    return triples


def build_graph(
        calendar: Union[Calendar, None],
        messages: Iterable[ConversationMessage] = (),
        extractor: Union[TripleExtractor, None] = None,
) -> KnowledgeGraph:
    """
    Builds one graph per user from their calendar and conversations.

    :param calendar: The calendar, if any.
    :param messages: The conversation messages.
    :param extractor: The triple extractor for message texts.
    :return: The merged knowledge graph.
    """

    calendar_graph = KnowledgeGraph(calendar_to_triples(calendar) if calendar is not None else ())
    return merge(calendar_graph, KnowledgeGraph(conversation_to_triples(messages, extractor)))
