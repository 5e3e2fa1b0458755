#!/usr/bin/env python3

"""
Shared file reading for the dataset loaders.
"""

import json
import os
from typing import Any, Union

from .source import JsonPointer, LineNumber
from ..abc import FileNotFound, MalformedJson


def read_text(path: Union[str, "os.PathLike[str]"]) -> str:
    """
    Reads a UTF-8 file.

    :param path: The file to read.
    :return: The file's contents.
    """

    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8") as stream:
            return stream.read()
    except FileNotFoundError:
        raise FileNotFound(JsonPointer(path), "no such file")
    except UnicodeDecodeError as error:
        raise MalformedJson(JsonPointer(path), "not UTF-8: %s" % error)


def parse_json(text: str, path: str) -> Any:
    """
    Parses a JSON document, converting decode errors into located errors.

    :param text: The JSON text.
    :param path: The file that the text was read from.
    :return: The decoded value.
    """

    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise MalformedJson(LineNumber(path, error.lineno), "%s (column %i)" % (error.msg, error.colno))
