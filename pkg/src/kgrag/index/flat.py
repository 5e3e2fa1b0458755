#!/usr/bin/env python3

__all__ = (
    "VectorIndex",
    "build_index", "top_k",
)

"""
An exact (flat) vector index over document chunks.
"""

import logging
import time
from typing import Any, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np
from frozendict import frozendict

from .chunk import DocumentChunk
from ..abc import DimensionMismatch, DuplicateChunkId, EmbeddingProvider
from ..embed import EmbeddingVector

logger = logging.getLogger("kgrag.index.flat")


class VectorIndex:
    """
    An immutable, ordered collection of chunk embeddings.
    """

    __slots__ = ("dimension", "chunk_ids", "chunks", "matrix", "provider_name", "provider", "config")

    @property
    def entries(self) -> List[Tuple[EmbeddingVector, str]]:
        """
        :return: The (vector, chunk ID) entries, in insertion order.
        """

        return [
            (EmbeddingVector(row, bool(row.any())), chunk_id) for row, chunk_id in zip(self.matrix, self.chunk_ids)
        ]

    def __init__(
            self,
            dimension: int,
            chunks: Sequence[DocumentChunk],
            vectors: Union[Sequence[EmbeddingVector], np.ndarray],
            provider: Union[EmbeddingProvider, str] = "",
            config: Union[Mapping[str, Any], None] = None,
    ) -> None:
        """
        :param dimension: The dimension of every vector in the index.
        :param chunks: The indexed chunks, in order.
        :param vectors: The chunks' vectors, index-aligned, either as EmbeddingVectors or as an N x dimension matrix.
        :param provider: The embedding provider the vectors came from (which queries must be embedded with), or just
                         its name if it isn't available.
        :param config: Free-form settings the index was built with, persisted alongside it.
        """

        if isinstance(vectors, np.ndarray):
            matrix = np.array(vectors, dtype=np.float32).reshape(-1, dimension)
        else:
            for vector in vectors:
                if vector.dimension != dimension:
                    raise DimensionMismatch(dimension, vector.dimension)
            matrix = np.zeros((len(vectors), dimension), dtype=np.float32)
            for index, vector in enumerate(vectors):
                matrix[index] = vector.values
        if matrix.shape[0] != len(chunks):
            raise ValueError("Got %i vector(s) for %i chunk(s)." % (matrix.shape[0], len(chunks)))
        matrix.setflags(write=False)

        chunks_ = {}
        for chunk in chunks:
            if chunk.chunk_id in chunks_:
                raise DuplicateChunkId(chunk.chunk_id)
            chunks_[chunk.chunk_id] = chunk

        self.dimension = dimension
        self.chunk_ids: Tuple[str, ...] = tuple(chunk.chunk_id for chunk in chunks)
        self.chunks: frozendict[str, DocumentChunk] = frozendict(chunks_)
        self.matrix = matrix
        if isinstance(provider, EmbeddingProvider):
            self.provider_name = provider.name
            self.provider: Union[EmbeddingProvider, None] = provider
        else:
            self.provider_name = provider
            self.provider = None
        self.config: frozendict[str, Any] = frozendict(config or {})

    def __repr__(self) -> str:
        return "<VectorIndex(dimension=%i, entries=%i, provider=%r) at %x>" % (
            self.dimension, len(self.chunk_ids), self.provider_name, id(self),
        )

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is VectorIndex and
            other.dimension == self.dimension and
            other.chunk_ids == self.chunk_ids and
            all(other.chunks[chunk_id] == self.chunks[chunk_id] for chunk_id in self.chunk_ids) and
            np.array_equal(other.matrix, self.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.dimension, self.chunk_ids))

    def __len__(self) -> int:
        return len(self.chunk_ids)


def build_index(
        chunks: Iterable[DocumentChunk], provider: EmbeddingProvider, config: Union[Mapping[str, Any], None] = None,
) -> VectorIndex:
    """
    Embeds chunks and indexes them.

    :param chunks: The chunks to index, their IDs must be distinct.
    :param provider: The embedding provider to use, the index takes its dimension.
    :param config: Free-form settings to remember alongside the index.
    :return: The index, with one entry per chunk in input order.
    """

    chunks = list(chunks)
    seen = set()
    for chunk in chunks:
        if chunk.chunk_id in seen:
            raise DuplicateChunkId(chunk.chunk_id)
        seen.add(chunk.chunk_id)

    start = time.perf_counter_ns()
    vectors = provider.embed_batch([chunk.text for chunk in chunks]) if chunks else []
    index = VectorIndex(provider.dimension, chunks, vectors, provider, config)
    logger.debug(
        "Built index of %i chunk(s) with %s in %.1fms.",
        len(chunks), provider.name, (time.perf_counter_ns() - start) / 1_000_000,
    )
    return index


def top_k(index: VectorIndex, query: EmbeddingVector, k: int) -> List[Tuple[str, float]]:
    """
    Finds the chunks most similar to a query, by exhaustive search.

    :param index: The index to search.
    :param query: The query vector, of the index's dimension.
    :param k: How many results to return at most.
    :return: (chunk ID, score) pairs by descending score, ties kept in insertion order.
    """

    if k < 1:
        raise ValueError("k must be positive, got %i." % k)
    if query.dimension != index.dimension:
        raise DimensionMismatch(index.dimension, query.dimension)
    if not index.chunk_ids:
        return []

    scores = index.matrix.astype(np.float64) @ query.values.astype(np.float64)
    order = np.argsort(-scores, kind="stable")[:k]
    return [(index.chunk_ids[position], float(scores[position])) for position in order]
