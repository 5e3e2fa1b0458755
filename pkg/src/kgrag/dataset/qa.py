#!/usr/bin/env python3

__all__ = (
    "QAPair",
    "parse_qa_pairs", "load_qa_pairs", "dumps_qa_pairs",
)

"""
Question and golden answer pairs, stored as a JSON array of {id, question, golden_answer}.
"""

import json
import logging
import os
from typing import Any, Iterable, List, Set, Union

from ._file import parse_json, read_text
from .source import JsonPointer
from ..abc import DuplicateId, MalformedJson

logger = logging.getLogger("kgrag.dataset.qa")

_FIELDS = ("id", "question", "golden_answer")


class QAPair:
    """
    A question with its golden (ground truth) answer.
    """

    __slots__ = ("id", "question", "golden_answer")

    def __init__(self, id_: str, question: str, golden_answer: str) -> None:
        if not question.strip():
            raise ValueError("Question must not be empty.")
        if not golden_answer.strip():
            raise ValueError("Golden answer must not be empty.")

        self.id = id_
        self.question = question
        self.golden_answer = golden_answer

    def __repr__(self) -> str:
        return "<QAPair(id=%r, question=%r) at %x>" % (self.id, self.question, id(self))

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is QAPair and
            other.id == self.id and
            other.question == self.question and
            other.golden_answer == self.golden_answer
        )

    def __hash__(self) -> int:
        return hash((self.id, self.question, self.golden_answer))


def parse_qa_pairs(text: str, path: str = "<string>") -> List[QAPair]:
    """
    Parses a QA pair file.

    :param text: The JSON text.
    :param path: The file the text came from, for error locations.
    :return: The pairs, in file order.
    """

    data = parse_json(text, path)
    root = JsonPointer(path)
    if not isinstance(data, list):
        raise MalformedJson(root, "expected an array of QA pairs")

    pairs = []
    seen: Set[str] = set()

    for index, value in enumerate(data):
        pointer = root.child(index)
        if not isinstance(value, dict):
            raise MalformedJson(pointer, "expected a QA pair object")

        for field in _FIELDS:
            if not field in value:
                raise MalformedJson(pointer.child(field), "missing %r" % field)
            if not isinstance(value[field], str):
                raise MalformedJson(pointer.child(field), "expected a string")
        for field in value:
            if not field in _FIELDS:
                logger.warning("Ignoring unknown field %r at %s.", field, pointer.child(field))
        for field in ("question", "golden_answer"):
            if not value[field].strip():
                raise MalformedJson(pointer.child(field), "empty %r" % field)

        id_ = value["id"]
        if id_ in seen:
            raise DuplicateId(pointer.child("id"), id_)
        seen.add(id_)

        pairs.append(QAPair(id_, value["question"], value["golden_answer"]))

    return pairs


def load_qa_pairs(path: Union[str, "os.PathLike[str]"]) -> List[QAPair]:
    """
    Loads a QA pair file.

    :param path: The JSON file to load.
    :return: The pairs, in file order.
    """

    path = os.fspath(path)
    return parse_qa_pairs(read_text(path), path)


def dumps_qa_pairs(pairs: Iterable[QAPair]) -> str:
    """
    :param pairs: The pairs to serialize.
    :return: The JSON text.
    """

    data = [{"id": pair.id, "question": pair.question, "golden_answer": pair.golden_answer} for pair in pairs]
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
