#!/usr/bin/env python3

__all__ = (
    "Answer", "Pipeline",
    "answer",
)

"""
Answering queries end to end: embed, retrieve, prompt, generate.
"""

import logging
import time
from typing import Any, Callable, Iterable, Sequence, Tuple, Union

from .config import Mode, PipelineConfig
from .corpus import build_baseline_corpus, build_kg_corpus
from ..abc import EmbeddingProvider, LlmClient, PipelineError, TripleExtractor
from ..dataset import Calendar, ConversationMessage
from ..index import VectorIndex, build_index, top_k

logger = logging.getLogger("kgrag.pipeline.run")

Clock = Callable[[], float]


class Answer:
    """
    A generated answer and what it was generated from.
    """

    __slots__ = ("text", "retrieved", "latency_seconds")

    def __init__(self, text: str, retrieved: Sequence[Tuple[str, float]], latency_seconds: float) -> None:
        """
        :param text: The generated answer.
        :param retrieved: The (chunk ID, score) pairs that made up the context, in rank order.
        :param latency_seconds: How long retrieval and generation took.
        """

        if latency_seconds < 0.0:
            raise ValueError("Negative latency %r." % latency_seconds)

        self.text = text
        self.retrieved = tuple(retrieved)
        self.latency_seconds = latency_seconds

    def __repr__(self) -> str:
        return "<Answer(text=%r, retrieved=%i, latency_seconds=%.3f) at %x>" % (
            self.text, len(self.retrieved), self.latency_seconds, id(self),
        )

    def __str__(self) -> str:
        return self.text

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is Answer and
            other.text == self.text and
            other.retrieved == self.retrieved and
            other.latency_seconds == self.latency_seconds
        )

    def __hash__(self) -> int:
        return hash((self.text, self.retrieved))


def answer(
        query: str,
        index: VectorIndex,
        client: LlmClient,
        config: PipelineConfig,
        provider: Union[EmbeddingProvider, None] = None,
        clock: Clock = time.perf_counter,
) -> Answer:
    """
    Answers a query from an index.

    :param query: The user's question.
    :param index: The index to retrieve context from.
    :param client: The generation backend.
    :param config: Provides k, the prompt template and the generation parameters.
    :param provider: The provider to embed the query with, if None, the one the index was built with.
    :param clock: The clock that latency is measured with.
    :return: The answer, timed from embedding the query until generation finishes.
    """

    if provider is None:
        provider = index.provider
    if provider is None:
        raise PipelineError("embed", ValueError("index %r has no embedding provider attached" % index))

    start = clock()
    try:
        vector = provider.embed(query)
    except Exception as error:
        raise PipelineError("embed", error) from error

    try:
        retrieved = top_k(index, vector, config.k)
    except Exception as error:
        raise PipelineError("retrieve", error) from error

    context = "\n".join(index.chunks[chunk_id].text for chunk_id, _ in retrieved)
    try:
        text = client.generate(config.template.render(context, query), config.params)
    except Exception as error:
        raise PipelineError("generate", error) from error

    latency = max(0.0, clock() - start)
    logger.debug("Answered %r in %.1fms from %i chunk(s).", query, latency * 1000, len(retrieved))
    return Answer(text, retrieved, latency)


class Pipeline:
    """
    One RetrievalQA configuration: an index, the provider that built it and a generation backend.
    """

    __slots__ = ("config", "index", "provider", "client")

    @classmethod
    def build(
            cls,
            config: PipelineConfig,
            calendar: Union[Calendar, None],
            messages: Iterable[ConversationMessage],
            provider: EmbeddingProvider,
            client: LlmClient,
            extractor: Union[TripleExtractor, None] = None,
    ) -> "Pipeline":
        """
        Builds the corpus for the config's mode and indexes it.
        """

        start = time.perf_counter_ns()
        if config.mode is Mode.KG:
            chunks = build_kg_corpus(calendar, messages, extractor, config)
        else:
            chunks = build_baseline_corpus(calendar, messages, config)

        index = build_index(chunks, provider, {
            "mode": config.mode.value, "max_chars": config.max_chars, "overlap_chars": config.overlap_chars,
        })
        logger.debug(
            "Built %s pipeline over %i chunk(s) in %.1fms.",
            config.mode.value, len(index), (time.perf_counter_ns() - start) / 1_000_000,
        )
        return cls(config, index, provider, client)

    def __init__(
            self, config: PipelineConfig, index: VectorIndex, provider: EmbeddingProvider, client: LlmClient,
    ) -> None:
        if provider.dimension != index.dimension:
            raise ValueError("Provider %s doesn't match the index dimension %i." % (provider.name, index.dimension))

        self.config = config
        self.index = index
        self.provider = provider
        self.client = client

    def __repr__(self) -> str:
        return "<Pipeline(mode=%s, index=%r, client=%r) at %x>" % (
            self.config.mode.value, self.index, self.client, id(self),
        )

    def answer(self, query: str, clock: Clock = time.perf_counter) -> Answer:
        return answer(query, self.index, self.client, self.config, self.provider, clock)
