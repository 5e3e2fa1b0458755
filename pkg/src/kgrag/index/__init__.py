#!/usr/bin/env python3

__all__ = (
    "chunk", "flat", "store",
    "ChunkKind", "DocumentChunk", "chunk_documents",
    "VectorIndex", "build_index", "top_k",
    "IndexHeader", "write_index", "read_index",
)

"""
Chunking corpora, exact vector indices and their on-disk form.
"""

from . import chunk, flat, store
from .chunk import *
from .flat import *
from .store import *
