#!/usr/bin/env python3

__all__ = (
    "EmbeddingVector", "HashEmbedder", "RemoteEmbedder",
    "hash_embed", "remote_embed", "cosine",
)

"""
Embedding vectors and providers: a deterministic offline hash embedder and a client for remote embedding services.
Vectors are L2-normalized here, at the provider boundary, so that a dot product is a cosine similarity.
"""

import hashlib
import logging
import threading
from typing import Any, List, Sequence, Union

import numpy as np

from ._http import JsonClient
from .abc import DimensionMismatch, EmbeddingProvider, ProtocolError

logger = logging.getLogger("kgrag.embed")

DEFAULT_DIMENSION = 256
MIN_HASH_DIMENSION = 16
NORM_TOLERANCE = 1e-5

_HASH_KEY = b"kgrag.hash_embed"  # Fixed so that vectors are stable across runs and platforms


class EmbeddingVector:
    """
    A fixed-dimension float32 vector, either unit length or all zeros.
    """

    __slots__ = ("values", "norm_flag")

    @classmethod
    def normalise(cls, raw: Any) -> "EmbeddingVector":
        """
        L2-normalizes some raw values.

        :param raw: The raw values.
        :return: The unit vector, or the zero vector (with norm_flag unset) if the raw norm is zero.
        """

        array = np.asarray(raw, dtype=np.float64)
        if array.ndim != 1 or not array.size:
            raise ValueError("Expected a non-empty 1D vector.")

        norm = float(np.linalg.norm(array))
        if norm > 0.0 and np.isfinite(norm):
            return cls((array / norm).astype(np.float32), True)
        return cls(np.zeros(array.size, dtype=np.float32), False)

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])

    def __init__(self, values: Any, norm_flag: bool) -> None:
        """
        :param values: The (already normalized) vector components.
        :param norm_flag: Was the norm nonzero before normalization?
        """

        values = np.array(values, dtype=np.float32)
        if values.ndim != 1 or not values.size:
            raise ValueError("Expected a non-empty 1D vector.")

        if norm_flag:
            norm = float(np.linalg.norm(values.astype(np.float64)))
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise ValueError("Vector flagged as normalized has norm %f." % norm)
        elif np.any(values):
            raise ValueError("Vector flagged as zero has nonzero components.")

        values.setflags(write=False)
        self.values = values
        self.norm_flag = norm_flag

    def __repr__(self) -> str:
        return "<EmbeddingVector(dimension=%i, norm_flag=%s) at %x>" % (self.dimension, self.norm_flag, id(self))

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is EmbeddingVector and
            other.norm_flag == self.norm_flag and
            np.array_equal(other.values, self.values)
        )

    def __hash__(self) -> int:
        return hash((self.values.tobytes(), self.norm_flag))

    def __len__(self) -> int:
        return self.dimension


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """
    :return: The cosine similarity of two vectors, 0 if either is the zero vector.
    """

    if a.dimension != b.dimension:
        raise DimensionMismatch(a.dimension, b.dimension)
    if not a.norm_flag or not b.norm_flag:
        return 0.0
    return float(np.dot(a.values.astype(np.float64), b.values.astype(np.float64)))


# ------------------------------ Hash embedding ------------------------------ #

def hash_embed(text: str, dimension: int = DEFAULT_DIMENSION) -> EmbeddingVector:
    """
    Embeds text by bucketing its lowercase character trigrams with a fixed 64-bit hash.

    :param text: The text to embed.
    :param dimension: The vector dimension, at least 16.
    :return: The normalized trigram count vector, the zero vector for texts shorter than 3 characters.
    """

    if dimension < MIN_HASH_DIMENSION:
        raise ValueError("Hash embedding dimension must be at least %i, got %i." % (MIN_HASH_DIMENSION, dimension))

    text = text.lower()
    counts = np.zeros(dimension, dtype=np.float64)
    for index in range(len(text) - 2):
        digest = hashlib.blake2b(text[index: index + 3].encode("utf-8"), digest_size=8, key=_HASH_KEY).digest()
        counts[int.from_bytes(digest, "little") % dimension] += 1.0

    if not counts.any():
        return EmbeddingVector(np.zeros(dimension, dtype=np.float32), False)
    return EmbeddingVector.normalise(counts)


class HashEmbedder(EmbeddingProvider):
    """
    The offline, deterministic trigram hash embedder.
    """

    __slots__ = ("_dimension",)

    def __init__(self, dimension: int = DEFAULT_DIMENSION) -> None:
        if dimension < MIN_HASH_DIMENSION:
            raise ValueError("Hash embedding dimension must be at least %i, got %i." % (MIN_HASH_DIMENSION, dimension))
        self._dimension = dimension

    def __repr__(self) -> str:
        return "<HashEmbedder(dimension=%i) at %x>" % (self._dimension, id(self))

    @property
    def name(self) -> str:
        return "hash-%i" % self._dimension

    @property
    def dimension(self) -> int:
        return self._dimension

    def embed_batch(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        return [hash_embed(text, self._dimension) for text in texts]


# ------------------------------ Remote embedding ------------------------------ #

def _parse_embeddings(body: Any, count: int, dimension: Union[int, None]) -> List[EmbeddingVector]:
    if not isinstance(body, dict) or not isinstance(body.get("data"), list):
        raise ProtocolError("Expected an object with a 'data' array.")
    data = body["data"]
    if len(data) != count:
        raise ProtocolError("Expected %i embedding(s), got %i." % (count, len(data)))

    rows = []
    for item in data:
        if not isinstance(item, dict) or not "index" in item or not "embedding" in item:
            raise ProtocolError("Embedding item is missing 'index' or 'embedding'.")
        index, embedding = item["index"], item["embedding"]
        if not isinstance(index, int) or isinstance(index, bool) or not isinstance(embedding, list) or not embedding:
            raise ProtocolError("Malformed embedding item at index %r." % (index,))
        if not all(isinstance(value, (int, float)) and not isinstance(value, bool) for value in embedding):
            raise ProtocolError("Embedding %i contains non-numeric values." % index)

        if dimension is None:
            dimension = len(embedding)
        elif len(embedding) != dimension:
            raise DimensionMismatch(dimension, len(embedding))
        rows.append((index, embedding))

    rows.sort(key=lambda row: row[0])
    if [index for index, _ in rows] != list(range(count)):
        raise ProtocolError("Embedding indices aren't 0..%i." % (count - 1))

    return [EmbeddingVector.normalise(embedding) for _, embedding in rows]


def remote_embed(
        endpoint: Union[str, JsonClient],
        texts: Sequence[str],
        token: Union[str, None] = None,
        dimension: Union[int, None] = None,
) -> List[EmbeddingVector]:
    """
    Embeds texts with a remote service speaking {"input": [...]} -> {"data": [{"index", "embedding"}, ...]}.

    :param endpoint: The service URL (or an existing client for it).
    :param texts: The texts to embed, non-empty.
    :param token: A bearer token, if any.
    :param dimension: The expected dimension, if None, it's taken from the first vector in the response.
    :return: The normalized vectors, index-aligned with the texts.
    """

    if not texts:
        raise ValueError("Expected at least one text to embed.")

    if isinstance(endpoint, JsonClient):
        return _parse_embeddings(endpoint.post({"input": list(texts)}), len(texts), dimension)

    client = JsonClient(endpoint, token)
    try:
        return _parse_embeddings(client.post({"input": list(texts)}), len(texts), dimension)
    finally:
        client.close()


class RemoteEmbedder(EmbeddingProvider):
    """
    An embedding provider backed by a remote service. The dimension is learned from the first response (unless
    given) and enforced for every later one.
    """

    __slots__ = ("client", "batch_size", "_dimension", "_lock")

    PROBE_TEXT = "dimension probe"

    def __init__(
            self,
            endpoint: str,
            token: Union[str, None] = None,
            dimension: Union[int, None] = None,
            batch_size: int = 64,
            timeout: float = 60.0,
    ) -> None:
        if batch_size < 1:
            raise ValueError("Batch size must be positive.")

        self.client = JsonClient(endpoint, token, timeout)
        self.batch_size = batch_size

        self._dimension = dimension
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return "<RemoteEmbedder(endpoint=%r, dimension=%s) at %x>" % (self.client.endpoint, self._dimension, id(self))

    @property
    def name(self) -> str:
        return "remote:%s" % self.client.endpoint

    def close(self) -> None:
        self.client.close()

    @property
    def dimension(self) -> int:
        if self._dimension is None:
            self.embed_batch((RemoteEmbedder.PROBE_TEXT,))
        return self._dimension

    def embed_batch(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        vectors = []
        for start in range(0, len(texts), self.batch_size):
            batch = remote_embed(self.client, texts[start: start + self.batch_size], dimension=self._dimension)
            with self._lock:
                if self._dimension is None:
                    self._dimension = batch[0].dimension
                    logger.debug("Learned embedding dimension %i from %s.", self._dimension, self.client.endpoint)
                elif batch[0].dimension != self._dimension:
                    raise DimensionMismatch(self._dimension, batch[0].dimension)
            vectors.extend(batch)
        return vectors
