#!/usr/bin/env python3

__all__ = (
    "ChunkKind", "DocumentChunk",
    "chunk_documents",
)

"""
Splitting documents into overlapping, whitespace-aligned windows.
"""

import bisect
import logging
import re
from enum import Enum
from typing import Any, Dict, Iterable, List, Tuple, Union

from ..abc import InvalidChunkParams

logger = logging.getLogger("kgrag.index.chunk")

MIN_MAX_CHARS = 64

_WORD = re.compile(r"\S+")


class ChunkKind(Enum):
    """
    Which corpus a chunk belongs to.
    """

    RAW = "raw"
    KG = "kg"


class DocumentChunk:
    """
    A retrievable piece of a document.
    """

    __slots__ = ("chunk_id", "text", "kind", "provenance", "start", "end")

    def __init__(
            self,
            chunk_id: str,
            text: str,
            kind: ChunkKind,
            provenance: str,
            start: int = 0,
            end: Union[int, None] = None,
    ) -> None:
        """
        :param chunk_id: This chunk's ID, unique within an index.
        :param text: The chunk's text, non-empty.
        :param kind: The corpus this chunk belongs to.
        :param provenance: The ID of the source document.
        :param start: The offset of this chunk in the source document.
        :param end: The offset just past this chunk in the source document.
        """

        if not text:
            raise ValueError("Chunk text must not be empty.")
        if end is None:
            end = start + len(text)
        if start < 0 or end - start != len(text):
            raise ValueError("Chunk span [%i, %i) doesn't match its text length %i." % (start, end, len(text)))

        self.chunk_id = chunk_id
        self.text = text
        self.kind = kind
        self.provenance = provenance
        self.start = start
        self.end = end

    def __repr__(self) -> str:
        return "<DocumentChunk(chunk_id=%r, kind=%s, start=%i, end=%i) at %x>" % (
            self.chunk_id, self.kind.value, self.start, self.end, id(self),
        )

    def __str__(self) -> str:
        return self.text

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is DocumentChunk and
            other.chunk_id == self.chunk_id and
            other.text == self.text and
            other.kind == self.kind and
            other.provenance == self.provenance and
            other.start == self.start and
            other.end == self.end
        )

    def __hash__(self) -> int:
        return hash((self.chunk_id, self.text, self.kind, self.provenance, self.start))


def _windows(text: str, max_chars: int, overlap_chars: int) -> List[Tuple[int, int]]:
    length = len(text)
    if length <= max_chars:
        return [(0, length)]

    starts = []
    ends = []
    for match in _WORD.finditer(text):
        starts.append(match.start())
        ends.append(match.end())

    spans = []
    start = 0
    while length - start > max_chars:
        # Last word end that fits, or a hard split inside a word that doesn't.
        index = bisect.bisect_right(ends, start + max_chars) - 1
        if index >= 0 and ends[index] > start:
            end = ends[index]
        else:
            end = start + max_chars
        spans.append((start, end))

        if not text[end:].strip():
            return spans

        # Back up to the earliest word that starts in the overlap, if any.
        next_start = end
        index = bisect.bisect_left(starts, max(end - overlap_chars, start + 1))
        if index < len(starts) and starts[index] < end:
            next_start = starts[index]
        start = next_start

    spans.append((start, length))
    return spans


def chunk_documents(
        documents: Iterable[Tuple[str, str]],
        max_chars: int = 512,
        overlap_chars: int = 64,
        kind: ChunkKind = ChunkKind.RAW,
) -> List[DocumentChunk]:
    """
    Splits documents into windows of at most `max_chars` characters. Windows end at word boundaries (unless a
    single word is longer than a window) and the next window starts at the earliest word beginning within the
    last `overlap_chars` characters of the previous one. Documents that fit in one window are kept as they are.

    :param documents: (text, provenance) pairs. Empty and whitespace-only documents are skipped.
    :param max_chars: The maximum length of a chunk, at least 64.
    :param overlap_chars: How much consecutive chunks may overlap by, in [0, max_chars).
    :param kind: The kind of the chunks produced.
    :return: The chunks, with IDs "<provenance>#<i>" counted per provenance.
    """

    if max_chars < MIN_MAX_CHARS:
        raise InvalidChunkParams("max_chars must be at least %i, got %i." % (MIN_MAX_CHARS, max_chars))
    if not 0 <= overlap_chars < max_chars:
        raise InvalidChunkParams("overlap_chars must be in [0, %i), got %i." % (max_chars, overlap_chars))

    counters: Dict[str, int] = {}
    chunks = []

    for text, provenance in documents:
        if not text.strip():
            logger.debug("Skipping empty document %r.", provenance)
            continue
        for start, end in _windows(text, max_chars, overlap_chars):
            index = counters.get(provenance, 0)
            counters[provenance] = index + 1
            chunks.append(DocumentChunk("%s#%i" % (provenance, index), text[start: end], kind, provenance, start, end))

    return chunks
