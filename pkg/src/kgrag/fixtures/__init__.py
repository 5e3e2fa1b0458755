#!/usr/bin/env python3

__all__ = (
    "CALENDAR", "CONVERSATIONS", "QA_PAIRS",
    "fixture_path",
)

"""
The bundled fixture dataset: Alex's 2024 calendar, three conversations and 22 QA pairs.
"""

import os

CALENDAR = "calendar.json"
CONVERSATIONS = "conversations.jsonl"
QA_PAIRS = "qa_pairs.json"


def fixture_path(name: str) -> str:
    """
    :param name: The fixture's file name.
    :return: The path of the bundled fixture.
    """

    path = os.path.join(os.path.dirname(__file__), name)
    if not os.path.isfile(path):
        raise LookupError("No bundled fixture named %r." % name)
    return path
