#!/usr/bin/env python3

__all__ = (
    "KgragError",
    "DataError", "FileNotFound", "MalformedJson", "SchemaViolation", "DuplicateId",
    "EmptyInput", "InvalidChunkParams", "DuplicateChunkId", "DimensionMismatch", "MissingPlaceholder", "InvalidN",
    "RemoteError", "TransportError", "ProtocolError", "BackendError",
    "PipelineError", "QuestionError", "IoError", "ConfigError",
)

"""
The kgrag exception hierarchy.
"""

import typing
from typing import Any, Tuple, Union

if typing.TYPE_CHECKING:
    from . import Source


class KgragError(Exception):
    """
    Base class for all errors raised by kgrag.
    """

    ...


# ------------------------------ Data errors ------------------------------ #

class DataError(KgragError):
    """
    An error in some input data, always carrying the location it was found at.
    """

    def __init__(self, source: Union["Source", None], *messages: Tuple[object, ...]) -> None:
        """
        :param source: Where in the input the error was found.
        :param messages: Information about the error that occurred.
        """

        self.source = source
        self.messages = messages

        super().__init__(str(self))

    def __repr__(self) -> str:
        return "<%s(source=%r, messages=%r) at %x>" % (self.__class__.__name__, self.source, self.messages, id(self))

    def __str__(self) -> str:
        if self.source is None:
            return "error: %s" % ", ".join(map(str, self.messages))
        return "error at %r: %s" % (str(self.source), ", ".join(map(str, self.messages)))

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return other.__class__ is self.__class__ and other.source == self.source and other.messages == self.messages

    def __hash__(self) -> int:
        return hash((self.__class__, str(self.source), self.messages))


class FileNotFound(DataError):
    """
    The input file doesn't exist.
    """

    ...


class MalformedJson(DataError):
    """
    The input isn't valid JSON (or a JSON line is missing required fields).
    """

    ...


class SchemaViolation(DataError):
    """
    The input is valid JSON but doesn't describe a valid value.
    """

    ...


class DuplicateId(DataError):
    """
    Two records share an ID that must be unique.
    """

    def __init__(self, source: Union["Source", None], id_: str) -> None:
        self.id = id_
        super().__init__(source, "duplicate id %r" % id_)


class EmptyInput(KgragError, ValueError):
    """
    An operation that needs at least one item was given none.
    """

    ...


# ------------------------------ Argument errors ------------------------------ #

class InvalidChunkParams(KgragError, ValueError):
    """
    The chunking window parameters are out of range.
    """

    ...


class DuplicateChunkId(KgragError, ValueError):
    """
    Two chunks given to the same index share an ID.
    """

    def __init__(self, chunk_id: str) -> None:
        self.chunk_id = chunk_id
        super().__init__("Duplicate chunk id %r." % chunk_id)


class DimensionMismatch(KgragError, ValueError):
    """
    A vector doesn't have the dimension that was expected of it.
    """

    def __init__(self, expected: int, actual: int) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__("Expected dimension %i, got %i." % (expected, actual))


class MissingPlaceholder(KgragError, ValueError):
    """
    A prompt template doesn't contain a required placeholder exactly once.
    """

    ...


class InvalidN(KgragError, ValueError):
    """
    An n-gram order is out of the supported range.
    """

    ...


# ------------------------------ Remote errors ------------------------------ #

class RemoteError(KgragError):
    """
    Base class for errors talking to a remote embedding or generation backend.
    """

    ...


class TransportError(RemoteError):
    """
    The backend couldn't be reached (connection refused, timeout, ...).
    """

    ...


class ProtocolError(RemoteError):
    """
    The backend answered, but not in the expected shape.
    """

    ...


class BackendError(RemoteError):
    """
    The backend answered with a non-2xx status.
    """

    def __init__(self, status: int, body: str) -> None:
        self.status = status
        self.body = body
        super().__init__("Backend returned status %i: %s" % (status, body))


# ------------------------------ Context errors ------------------------------ #

class PipelineError(KgragError):
    """
    An error raised by one of the stages of answering a query.
    """

    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__("%s stage failed: %s" % (stage, cause))


class QuestionError(KgragError):
    """
    An error while evaluating a particular question.
    """

    def __init__(self, qa_id: str, cause: BaseException) -> None:
        self.qa_id = qa_id
        self.cause = cause
        super().__init__("question %r: %s" % (qa_id, cause))


class IoError(KgragError):
    """
    Writing an output file failed.
    """

    def __init__(self, path: str, cause: BaseException) -> None:
        self.path = path
        self.cause = cause
        super().__init__("Couldn't write %r: %s" % (path, cause))


class ConfigError(KgragError):
    """
    The configuration (file, flags or environment) is invalid.
    """

    ...
