#!/usr/bin/env python3

__all__ = (
    "CalendarEvent", "Calendar",
    "parse_calendars", "load_calendars", "load_calendar",
    "dumps_calendar", "dumps_calendars",
)

"""
Calendar exports, in the shape of:

    {"AlexCalendar2024": {"January": [{"event": "Team Meeting", "date": "2024-01-15", "time": "09:00 - 10:00"}]}}
"""

import datetime
import json
import logging
import os
import re
from frozendict import frozendict
from typing import Any, Dict, Iterable, List, Mapping, Tuple, Union

from ._file import parse_json, read_text
from .source import JsonPointer
from ..abc import SchemaViolation

logger = logging.getLogger("kgrag.dataset.calendar")

MONTHS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)

_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_TIME_RANGE = re.compile(r"^([01]\d|2[0-3]):([0-5]\d) - ([01]\d|2[0-3]):([0-5]\d)$")
_FIELDS = ("event", "date", "time")


class CalendarEvent:
    """
    A single calendar entry.
    """

    __slots__ = ("title", "date", "time")

    ALL_DAY = "All day"

    @classmethod
    def is_valid_time(cls, time: str) -> bool:
        """
        :param time: The time value to check.
        :return: Is this either "All day" or a "HH:MM - HH:MM" range that doesn't end before it starts?
        """

        if time == cls.ALL_DAY:
            return True
        match = _TIME_RANGE.match(time)
        if match is None:
            return False
        start_hour, start_minute, end_hour, end_minute = map(int, match.groups())
        return (start_hour, start_minute) <= (end_hour, end_minute)

    @property
    def all_day(self) -> bool:
        """
        :return: Does this event last all day?
        """

        return self.time == CalendarEvent.ALL_DAY

    def __init__(self, title: str, date: datetime.date, time: str) -> None:
        """
        :param title: The event's title, non-empty.
        :param date: The day the event is on.
        :param time: Either "HH:MM - HH:MM" or "All day".
        """

        if not title.strip():
            raise ValueError("Event title must not be empty.")
        if not CalendarEvent.is_valid_time(time):
            raise ValueError("Invalid event time %r." % time)

        self.title = title
        self.date = date
        self.time = time

    def __repr__(self) -> str:
        return "<CalendarEvent(title=%r, date=%s, time=%r) at %x>" % (self.title, self.date, self.time, id(self))

    def __str__(self) -> str:
        return "%s on %s from %s" % (self.title, self.date.isoformat(), self.time)

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is CalendarEvent and
            other.title == self.title and
            other.date == self.date and
            other.time == self.time
        )

    def __hash__(self) -> int:
        return hash((self.title, self.date, self.time))


class Calendar:
    """
    A person's calendar, with the events grouped by month.
    """

    __slots__ = ("name", "owner", "months")

    @staticmethod
    def owner_of(name: str) -> str:
        """
        :param name: The calendar's key, for instance "AlexCalendar2024".
        :return: The owner's name, taken from the key prefix before "Calendar".
        """

        index = name.find("Calendar")
        if index > 0:
            return name[:index]
        return name

    @property
    def events(self) -> Tuple[CalendarEvent, ...]:
        """
        :return: All the events in this calendar, in file order.
        """

        events = []
        for month_events in self.months.values():
            events.extend(month_events)
        return tuple(events)

    def __init__(self, name: str, months: Mapping[str, Iterable[CalendarEvent]]) -> None:
        """
        :param name: The calendar's key in the export.
        :param months: Month names mapping to that month's events, in order.
        """

        self.name = name
        self.owner = Calendar.owner_of(name)
        self.months: frozendict[str, Tuple[CalendarEvent, ...]] = frozendict(
            (month, tuple(events)) for month, events in months.items()
        )

        for month, events in self.months.items():
            if not month in MONTHS:
                raise ValueError("Unknown month %r." % month)
            for event in events:
                if MONTHS[event.date.month - 1] != month:
                    raise ValueError("Event %r is not in %s." % (event, month))

    def __repr__(self) -> str:
        return "<Calendar(owner=%r, months=%i, events=%i) at %x>" % (
            self.owner, len(self.months), len(self.events), id(self),
        )

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is Calendar and
            other.name == self.name and
            tuple(other.months.items()) == tuple(self.months.items())
        )

    def __hash__(self) -> int:
        return hash((self.name, tuple(self.months.items())))


# ------------------------------ Parsing ------------------------------ #

def _parse_event(value: Any, pointer: JsonPointer, month: str) -> CalendarEvent:
    if not isinstance(value, dict):
        raise SchemaViolation(pointer, "expected an event object")

    for field in _FIELDS:
        if not field in value:
            raise SchemaViolation(pointer.child(field), "missing %r" % field)
        if not isinstance(value[field], str):
            raise SchemaViolation(pointer.child(field), "expected a string")
    for field in value:
        if not field in _FIELDS:
            logger.warning("Ignoring unknown field %r at %s.", field, pointer.child(field))

    title = value["event"]
    if not title.strip():
        raise SchemaViolation(pointer.child("event"), "empty event title")

    date_text = value["date"]
    try:
        if _DATE.match(date_text) is None:
            raise ValueError("not YYYY-MM-DD")
        date = datetime.date.fromisoformat(date_text)
    except ValueError as error:
        raise SchemaViolation(pointer.child("date"), "invalid date %r (%s)" % (date_text, error))
    if MONTHS[date.month - 1] != month:
        raise SchemaViolation(pointer.child("date"), "date %s is not in %s" % (date_text, month))

    time = value["time"]
    if not CalendarEvent.is_valid_time(time):
        raise SchemaViolation(pointer.child("time"), "invalid time %r, expected 'HH:MM - HH:MM' or 'All day'" % time)

    return CalendarEvent(title, date, time)


def parse_calendars(text: str, path: str = "<string>") -> List[Calendar]:
    """
    Parses every calendar in a calendar export.

    :param text: The JSON text.
    :param path: The file the text came from, for error locations.
    :return: The calendars, in file order.
    """

    data = parse_json(text, path)
    root = JsonPointer(path)
    if not isinstance(data, dict):
        raise SchemaViolation(root, "expected an object of calendars")

    calendars = []
    for name, months in data.items():
        calendar_pointer = root.child(name)
        if not isinstance(months, dict):
            raise SchemaViolation(calendar_pointer, "expected an object of months")

        parsed: Dict[str, List[CalendarEvent]] = {}
        for month, entries in months.items():
            month_pointer = calendar_pointer.child(month)
            if not month in MONTHS:
                raise SchemaViolation(month_pointer, "unknown month %r" % month)
            if not isinstance(entries, list):
                raise SchemaViolation(month_pointer, "expected an array of events")
            parsed[month] = [
                _parse_event(entry, month_pointer.child(index), month) for index, entry in enumerate(entries)
            ]

        calendar = Calendar(name, parsed)
        logger.debug("Parsed calendar %r with %i event(s).", name, len(calendar.events))
        calendars.append(calendar)

    return calendars


def load_calendars(path: Union[str, "os.PathLike[str]"]) -> List[Calendar]:
    """
    Loads every calendar in a calendar export file.

    :param path: The file to load.
    :return: The calendars, in file order.
    """

    path = os.fspath(path)
    return parse_calendars(read_text(path), path)


def load_calendar(path: Union[str, "os.PathLike[str]"], name: Union[str, None] = None) -> Calendar:
    """
    Loads a single calendar from a calendar export file.

    :param path: The file to load.
    :param name: The key of the calendar to load, if None, the file must contain exactly one calendar.
    :return: The calendar.
    """

    path = os.fspath(path)
    calendars = load_calendars(path)

    if name is not None:
        for calendar in calendars:
            if calendar.name == name:
                return calendar
        raise SchemaViolation(JsonPointer.of(path, name), "no calendar named %r" % name)

    if len(calendars) != 1:
        raise SchemaViolation(JsonPointer(path), "expected exactly one calendar, found %i" % len(calendars))
    return calendars[0]


# ------------------------------ Serializing ------------------------------ #

def dumps_calendars(calendars: Iterable[Calendar]) -> str:
    """
    Serializes calendars back into the export format.

    :param calendars: The calendars to serialize.
    :return: The JSON text.
    """

    data = {
        calendar.name: {
            month: [
                {"event": event.title, "date": event.date.isoformat(), "time": event.time} for event in events
            ] for month, events in calendar.months.items()
        } for calendar in calendars
    }
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def dumps_calendar(calendar: Calendar) -> str:
    """
    :param calendar: The calendar to serialize.
    :return: The JSON text.
    """

    return dumps_calendars((calendar,))
