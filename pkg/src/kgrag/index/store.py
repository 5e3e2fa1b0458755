#!/usr/bin/env python3

__all__ = (
    "IndexHeader",
    "write_index", "read_index",
)

"""
On-disk indices: a JSON sidecar with the chunks and settings, and a flat binary of the vectors.
"""

import json
import logging
import os
import struct
from typing import IO, Any, List, Union

import numpy as np

from .chunk import ChunkKind, DocumentChunk
from .flat import VectorIndex
from ..abc import DataError, DimensionMismatch, EmbeddingProvider, FileNotFound, IoError, SchemaViolation
from ..dataset._file import parse_json, read_text
from ..dataset.source import FileOffset, JsonPointer

logger = logging.getLogger("kgrag.index.store")

SIDECAR_NAME = "index.json"
VECTORS_NAME = "vectors.bin"
FORMAT_VERSION = 1


class IndexHeader:
    """
    The 16 byte header of a vectors file, followed by count x dimension little-endian float32s, row-major.
    """

    __slots__ = ("dimension", "count")

    MAGIC = b"KGRAGIDX"
    FORMAT = "<8sII"
    SIZE = struct.calcsize(FORMAT)

    @classmethod
    def read(cls, buffer: IO[bytes]) -> "IndexHeader":
        data = buffer.read(cls.SIZE)
        if len(data) != cls.SIZE:
            raise ValueError("truncated header")
        magic, dimension, count = struct.unpack(cls.FORMAT, data)
        if magic != cls.MAGIC:
            raise ValueError("bad magic %r" % magic)
        return cls(dimension, count)

    def __init__(self, dimension: int, count: int) -> None:
        self.dimension = dimension
        self.count = count

    def __repr__(self) -> str:
        return "<IndexHeader(dimension=%i, count=%i) at %x>" % (self.dimension, self.count, id(self))

    def write(self, buffer: IO[bytes]) -> None:
        buffer.write(struct.pack(IndexHeader.FORMAT, IndexHeader.MAGIC, self.dimension, self.count))


def write_index(index: VectorIndex, directory: Union[str, "os.PathLike[str]"]) -> None:
    """
    Writes an index to a directory, creating it if needed.

    :param index: The index to write.
    :param directory: The directory to write the sidecar and vectors file to.
    """

    directory = os.fspath(directory)
    sidecar = {
        "format": FORMAT_VERSION,
        "provider": index.provider_name,
        "dimension": index.dimension,
        "config": dict(index.config),
        "chunks": [
            {
                "chunk_id": chunk.chunk_id,
                "text": chunk.text,
                "kind": chunk.kind.value,
                "provenance": chunk.provenance,
                "start": chunk.start,
                "end": chunk.end,
            } for chunk in (index.chunks[chunk_id] for chunk_id in index.chunk_ids)
        ],
    }

    path = directory
    try:
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, SIDECAR_NAME)
        with open(path, "w", encoding="utf-8") as stream:
            stream.write(json.dumps(sidecar, indent=2, ensure_ascii=False) + "\n")
        path = os.path.join(directory, VECTORS_NAME)
        with open(path, "wb") as stream:
            IndexHeader(index.dimension, len(index)).write(stream)
            stream.write(index.matrix.astype("<f4").tobytes())
    except OSError as error:
        raise IoError(path, error)

    logger.debug("Wrote index of %i chunk(s) to %r.", len(index), directory)


def _parse_chunks(value: Any, pointer: JsonPointer) -> List[DocumentChunk]:
    if not isinstance(value, list):
        raise SchemaViolation(pointer, "expected an array of chunks")

    chunks = []
    for index, item in enumerate(value):
        item_pointer = pointer.child(index)
        if not isinstance(item, dict):
            raise SchemaViolation(item_pointer, "expected a chunk object")
        for field, type_ in (
                ("chunk_id", str), ("text", str), ("kind", str), ("provenance", str), ("start", int), ("end", int),
        ):
            if not isinstance(item.get(field), type_):
                raise SchemaViolation(item_pointer.child(field), "expected a %s" % type_.__name__)
        try:
            chunks.append(DocumentChunk(
                item["chunk_id"], item["text"], ChunkKind(item["kind"]), item["provenance"], item["start"], item["end"],
            ))
        except ValueError as error:
            raise SchemaViolation(item_pointer, str(error))
    return chunks


def read_index(
        directory: Union[str, "os.PathLike[str]"], provider: Union[EmbeddingProvider, None] = None,
) -> VectorIndex:
    """
    Reads an index written by `write_index`.

    :param directory: The directory the index was written to.
    :param provider: The provider that queries will be embedded with, its dimension must match the index's.
    :return: The index.
    """

    directory = os.fspath(directory)
    path = os.path.join(directory, SIDECAR_NAME)
    sidecar = parse_json(read_text(path), path)
    root = JsonPointer(path)
    if not isinstance(sidecar, dict):
        raise SchemaViolation(root, "expected an index object")
    if sidecar.get("format") != FORMAT_VERSION:
        raise SchemaViolation(root.child("format"), "unsupported format %r" % sidecar.get("format"))
    dimension = sidecar.get("dimension")
    if not isinstance(dimension, int) or dimension < 1:
        raise SchemaViolation(root.child("dimension"), "expected a positive integer")
    if not isinstance(sidecar.get("provider"), str):
        raise SchemaViolation(root.child("provider"), "expected a string")
    if not isinstance(sidecar.get("config", {}), dict):
        raise SchemaViolation(root.child("config"), "expected an object")
    chunks = _parse_chunks(sidecar.get("chunks"), root.child("chunks"))

    path = os.path.join(directory, VECTORS_NAME)
    try:
        with open(path, "rb") as stream:
            try:
                header = IndexHeader.read(stream)
            except ValueError as error:
                raise DataError(FileOffset(path, 0), str(error))
            data = stream.read()
    except FileNotFoundError:
        raise FileNotFound(FileOffset(path, 0), "no such file")

    if header.dimension != dimension or header.count != len(chunks):
        raise DataError(
            FileOffset(path, 0),
            "header says %i x %i, sidecar says %i x %i" % (header.count, header.dimension, len(chunks), dimension),
        )
    expected = header.count * header.dimension * 4
    if len(data) != expected:
        raise DataError(FileOffset(path, IndexHeader.SIZE), "expected %i byte(s) of vectors, got %i" % (expected, len(data)))
    matrix = np.frombuffer(data, dtype="<f4").astype(np.float32).reshape(header.count, header.dimension)

    if provider is not None:
        if provider.dimension != dimension:
            raise DimensionMismatch(dimension, provider.dimension)
        if provider.name != sidecar["provider"]:
            logger.warning("Index %r was built with %s, querying it with %s.", directory, sidecar["provider"], provider.name)

    return VectorIndex(
        dimension, chunks, matrix, sidecar["provider"] if provider is None else provider, sidecar.get("config", {}),
    )
