#!/usr/bin/env python3

__all__ = (
    "dumps_triples", "parse_triples", "write_triples", "read_triples",
)

"""
Triple persistence as tab-separated values: source, relation, target, provenance, one triple per line. Backslashes,
tabs and newlines inside labels are backslash-escaped.
"""

import os
from typing import Iterable, List, Union

from .graph import Triple
from ..abc import DataError
from ..dataset import LineNumber

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def _escape(value: str) -> str:
    return "".join(_ESCAPES.get(char, char) for char in value)


def _unescape(value: str) -> str:
    chars = []
    index = 0
    while index < len(value):
        char = value[index]
        if char == "\\" and index + 1 < len(value):
            index += 1
            chars.append(_UNESCAPES.get(value[index], "\\" + value[index]))
        else:
            chars.append(char)
        index += 1
    return "".join(chars)


def dumps_triples(triples: Iterable[Triple]) -> str:
    """
    :param triples: The triples to serialize.
    :return: The TSV text.
    """

    return "".join(
        "\t".join(map(_escape, (triple.source, triple.relation, triple.target, triple.provenance))) + "\n"
        for triple in triples
    )


def parse_triples(text: str, path: str = "<string>") -> List[Triple]:
    """
    :param text: The TSV text.
    :param path: The file the text came from, for error locations.
    :return: The triples, in file order.
    """

    triples = []
    for line_number, line in enumerate(text.split("\n"), 1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise DataError(LineNumber(path, line_number), "expected 4 tab-separated fields, got %i" % len(fields))
        try:
            triples.append(Triple(*map(_unescape, fields)))
        except ValueError as error:
            raise DataError(LineNumber(path, line_number), str(error))
    return triples


def write_triples(triples: Iterable[Triple], path: Union[str, "os.PathLike[str]"]) -> None:
    """
    :param triples: The triples to write.
    :param path: The file to write to.
    """

    with open(path, "w", encoding="utf-8", newline="") as stream:
        stream.write(dumps_triples(triples))


def read_triples(path: Union[str, "os.PathLike[str]"]) -> List[Triple]:
    """
    :param path: The file to read from.
    :return: The triples, in file order.
    """

    path = os.fspath(path)
    with open(path, "r", encoding="utf-8", newline="") as stream:
        return parse_triples(stream.read(), path)
