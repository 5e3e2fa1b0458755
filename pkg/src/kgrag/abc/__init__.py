#!/usr/bin/env python3

__all__ = (
    "Source",
    "EmbeddingProvider", "LlmClient", "TripleExtractor",
    "KgragError", "DataError", "FileNotFound", "MalformedJson", "SchemaViolation", "DuplicateId",
    "EmptyInput", "InvalidChunkParams", "DuplicateChunkId", "DimensionMismatch", "MissingPlaceholder", "InvalidN",
    "RemoteError", "TransportError", "ProtocolError", "BackendError",
    "PipelineError", "QuestionError", "IoError", "ConfigError",
)

"""
Abstract base classes for the contracts used throughout kgrag.
"""

from abc import ABC


class Source(ABC):
    """
    The source of a particular value (a location in some input file), for error reporting mainly.
    """

    ...


from .error import *
from .contracts import *
