#!/usr/bin/env python3

__all__ = (
    "ConversationMessage",
    "parse_conversations", "load_conversations", "dumps_conversations", "group_conversations",
)

"""
Conversation logs, stored as line-delimited JSON with one message per line:

    {"conversation_id": "c1", "sender": "Priya", "text": "Are you coming home for Raksha Bandhan?"}

Messages are numbered (seq) by their order of appearance within their conversation.
"""

import json
import logging
import os
from typing import Any, Dict, Iterable, List, Tuple, Union

from ._file import read_text
from .source import LineNumber
from ..abc import MalformedJson

logger = logging.getLogger("kgrag.dataset.conversation")

MIN_MESSAGES = 10
MAX_MESSAGES = 20

_FIELDS = ("conversation_id", "sender", "text")


class ConversationMessage:
    """
    A single message in a conversation.
    """

    __slots__ = ("conversation_id", "seq", "sender", "text")

    @property
    def provenance(self) -> str:
        """
        :return: The document ID of this message, "<conversation_id>:<seq>".
        """

        return "%s:%i" % (self.conversation_id, self.seq)

    def __init__(self, conversation_id: str, seq: int, sender: str, text: str) -> None:
        if seq < 0:
            raise ValueError("Message seq must not be negative.")
        if not text.strip():
            raise ValueError("Message text must not be empty.")

        self.conversation_id = conversation_id
        self.seq = seq
        self.sender = sender
        self.text = text

    def __repr__(self) -> str:
        return "<ConversationMessage(conversation_id=%r, seq=%i, sender=%r) at %x>" % (
            self.conversation_id, self.seq, self.sender, id(self),
        )

    def __str__(self) -> str:
        return "%s: %s" % (self.sender, self.text)

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is ConversationMessage and
            other.conversation_id == self.conversation_id and
            other.seq == self.seq and
            other.sender == self.sender and
            other.text == self.text
        )

    def __hash__(self) -> int:
        return hash((self.conversation_id, self.seq))


def group_conversations(messages: Iterable[ConversationMessage]) -> Dict[str, Tuple[ConversationMessage, ...]]:
    """
    Groups messages by conversation.

    :param messages: The messages, ordered by (conversation_id, seq).
    :return: Conversation IDs mapping to their messages, in order of first appearance.
    """

    grouped: Dict[str, List[ConversationMessage]] = {}
    for message in messages:
        grouped.setdefault(message.conversation_id, []).append(message)
    return {conversation_id: tuple(messages_) for conversation_id, messages_ in grouped.items()}


def parse_conversations(text: str, path: str = "<string>") -> List[ConversationMessage]:
    """
    Parses a conversation log.

    :param text: The JSONL text.
    :param path: The file the text came from, for error locations.
    :return: The messages, ordered by (conversation_id, seq).
    """

    messages = []
    counters: Dict[str, int] = {}

    for line_number, line in enumerate(text.split("\n"), 1):
        line = line[:-1] if line.endswith("\r") else line
        if not line.strip():
            continue
        source = LineNumber(path, line_number)

        try:
            value = json.loads(line)
        except json.JSONDecodeError as error:
            raise MalformedJson(source, "%s (column %i)" % (error.msg, error.colno))
        if not isinstance(value, dict):
            raise MalformedJson(source, "expected a message object")

        for field in _FIELDS:
            if not field in value:
                raise MalformedJson(source, "missing %r" % field)
            if not isinstance(value[field], str):
                raise MalformedJson(source, "%r must be a string" % field)
        for field in value:
            if not field in _FIELDS:
                logger.warning("Ignoring unknown field %r at %s.", field, source)
        for field in _FIELDS:
            if not value[field].strip():
                raise MalformedJson(source, "empty %r" % field)

        conversation_id = value["conversation_id"]
        seq = counters.get(conversation_id, 0)
        counters[conversation_id] = seq + 1
        messages.append(ConversationMessage(conversation_id, seq, value["sender"], value["text"]))

    messages.sort(key=lambda message: (message.conversation_id, message.seq))

    for conversation_id, count in counters.items():
        if not MIN_MESSAGES <= count <= MAX_MESSAGES:
            logger.warning(
                "Conversation %r in %s has %i message(s), expected %i to %i.",
                conversation_id, path, count, MIN_MESSAGES, MAX_MESSAGES,
            )

    logger.debug("Parsed %i message(s) in %i conversation(s).", len(messages), len(counters))
    return messages


def load_conversations(path: Union[str, "os.PathLike[str]"]) -> List[ConversationMessage]:
    """
    Loads a conversation log file.

    :param path: The JSONL file to load.
    :return: The messages, ordered by (conversation_id, seq).
    """

    path = os.fspath(path)
    return parse_conversations(read_text(path), path)


def dumps_conversations(messages: Iterable[ConversationMessage]) -> str:
    """
    Serializes messages back into the JSONL format. The seq values are implied by line order.

    :param messages: The messages, ordered by (conversation_id, seq).
    :return: The JSONL text.
    """

    return "".join(
        json.dumps(
            {"conversation_id": message.conversation_id, "sender": message.sender, "text": message.text},
            ensure_ascii=False,
        ) + "\n" for message in messages
    )
