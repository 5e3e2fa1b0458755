#!/usr/bin/env python3

__all__ = (
    "calendar", "conversation", "qa", "source",
    "CalendarEvent", "Calendar",
    "ConversationMessage",
    "QAPair",
    "JsonPointer", "LineNumber", "FileOffset",
    "parse_calendars", "load_calendars", "load_calendar", "dumps_calendar", "dumps_calendars",
    "parse_conversations", "load_conversations", "dumps_conversations", "group_conversations",
    "parse_qa_pairs", "load_qa_pairs", "dumps_qa_pairs",
)

"""
Loading, validating and serializing the personal dataset: calendars, conversations and QA pairs.
"""

from . import calendar, conversation, qa, source
from .calendar import *
from .conversation import *
from .qa import *
from .source import *
