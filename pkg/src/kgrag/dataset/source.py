#!/usr/bin/env python3

__all__ = (
    "JsonPointer", "LineNumber", "FileOffset",
)

"""
Locations in dataset files.
"""

from typing import Any, Iterable, Union

from ..abc import Source


class JsonPointer(Source):
    """
    A location inside a JSON document, given as an RFC 6901 pointer.
    """

    __slots__ = ("path", "pointer")

    @classmethod
    def of(cls, path: str, *tokens: Iterable[Union[str, int]]) -> "JsonPointer":
        """
        Creates a pointer from unescaped reference tokens.

        :param path: The file that the document was read from.
        :param tokens: The keys and indices leading to the value.
        :return: The pointer.
        """

        return cls(path, "".join("/" + str(token).replace("~", "~0").replace("/", "~1") for token in tokens))

    def __init__(self, path: str, pointer: str = "") -> None:
        self.path = path
        self.pointer = pointer

    def __repr__(self) -> str:
        return "<JsonPointer(path=%r, pointer=%r) at %x>" % (self.path, self.pointer, id(self))

    def __str__(self) -> str:
        return "%s#%s" % (self.path, self.pointer)

    def __eq__(self, other: Any) -> bool:
        return other.__class__ is JsonPointer and other.path == self.path and other.pointer == self.pointer

    def __hash__(self) -> int:
        return hash((self.path, self.pointer))

    def child(self, token: Union[str, int]) -> "JsonPointer":
        """
        :param token: The key or index of the child value.
        :return: A pointer to the child value.
        """

        return JsonPointer(self.path, self.pointer + "/" + str(token).replace("~", "~0").replace("/", "~1"))


class LineNumber(Source):
    """
    A 1-based line in a text file.
    """

    __slots__ = ("path", "line")

    def __init__(self, path: str, line: int) -> None:
        self.path = path
        self.line = line

    def __repr__(self) -> str:
        return "<LineNumber(path=%r, line=%i) at %x>" % (self.path, self.line, id(self))

    def __str__(self) -> str:
        return "%s:%i" % (self.path, self.line)

    def __eq__(self, other: Any) -> bool:
        return other.__class__ is LineNumber and other.path == self.path and other.line == self.line

    def __hash__(self) -> int:
        return hash((self.path, self.line))


class FileOffset(Source):
    """
    A byte offset into a binary file.
    """

    __slots__ = ("path", "offset")

    def __init__(self, path: str, offset: int) -> None:
        self.path = path
        self.offset = offset

    def __repr__(self) -> str:
        return "<FileOffset(path=%r, offset=%i) at %x>" % (self.path, self.offset, id(self))

    def __str__(self) -> str:
        return "%s@%i" % (self.path, self.offset)

    def __eq__(self, other: Any) -> bool:
        return other.__class__ is FileOffset and other.path == self.path and other.offset == self.offset

    def __hash__(self) -> int:
        return hash((self.path, self.offset))
