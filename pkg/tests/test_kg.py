#!/usr/bin/env python3

import datetime
import os
import sys
import tempfile
import unittest

from kgrag.abc import DataError
from kgrag.dataset import Calendar, CalendarEvent, ConversationMessage, LineNumber, load_calendar, load_conversations
from kgrag.fixtures import CALENDAR, CONVERSATIONS, fixture_path
from kgrag.kg import (
    KnowledgeGraph, LexiconExtractor, ProcessExtractor, Triple,
    build_graph, calendar_to_triples, candidate_stems, conversation_to_triples, dumps_triples, export_dot,
    extract_svo, linearize, merge, parse_triples, read_triples, split_words, write_triples,
)

DATA = os.path.join(os.path.dirname(__file__), "data")

CABIN = "Sam booked the cabin for the lake trip last night."


class TestBuilder(unittest.TestCase):

    def test_calendar_triples(self) -> None:
        calendar = load_calendar(os.path.join(DATA, "listing1_calendar.json"))
        golden = read_triples(os.path.join(DATA, "listing1_triples.tsv"))

        self.assertEqual(9, len(golden))
        self.assertEqual(golden, calendar_to_triples(calendar))

    def test_linearize(self) -> None:
        calendar = load_calendar(os.path.join(DATA, "listing1_calendar.json"))
        lines = linearize(KnowledgeGraph(calendar_to_triples(calendar)))

        self.assertEqual(9, len(lines))
        self.assertEqual(("Alex has event Catch-up with Friends on 2024-01-10.", "January"), lines[0])
        self.assertEqual(("Team Meeting on 2024-01-15 time 09:00 - 10:00.", "January"), lines[5])

    def test_same_title(self) -> None:
        calendar = Calendar("AlexCalendar2024", {"January": [
            CalendarEvent("Team Meeting", datetime.date(2024, 1, 15), "09:00 - 10:00"),
            CalendarEvent("Team Meeting", datetime.date(2024, 1, 22), "09:00 - 10:00"),
        ]})
        triples = calendar_to_triples(calendar)

        self.assertEqual(6, len(triples))
        self.assertEqual(6, len(KnowledgeGraph(triples)))
        self.assertEqual(
            ["Team Meeting on 2024-01-15", "Team Meeting on 2024-01-22"],
            [triple.target for triple in triples if triple.relation == "has event"],
        )

    def test_conversation_triples(self) -> None:
        messages = [
            ConversationMessage("c2", 2, "Jordan", CABIN),
            ConversationMessage("c2", 3, "Jordan", "Lovely weather today."),
        ]

        self.assertEqual(
            [
                Triple("Jordan", "said in", "c2", "c2:2"),
                Triple("Sam", "booked", "the cabin for the lake trip last night", "c2:2"),
            ],
            conversation_to_triples(messages),
        )

    def test_fixture_graph(self) -> None:
        calendar = load_calendar(fixture_path(CALENDAR))
        graph = build_graph(calendar, load_conversations(fixture_path(CONVERSATIONS)))

        self.assertEqual(calendar_to_triples(calendar), list(graph.triples[:63]))
        self.assertIn(("Alex", "has event", "Raksha Bandhan on 2024-08-19"), graph)
        self.assertIn(("Sam", "booked", "the cabin for the lake trip last night"), graph)
        self.assertIn("Alex has event Raksha Bandhan on 2024-08-19.", [line for line, _ in linearize(graph)])

    def test_empty(self) -> None:
        graph = build_graph(None)

        self.assertEqual(0, len(graph))
        self.assertEqual([], linearize(graph))


class TestGraph(unittest.TestCase):

    def test_dedup(self) -> None:
        graph = KnowledgeGraph([
            Triple("Alex", "visits", "Paris", "c1:0"),
            Triple("Alex", "visits", "Paris", "c1:5"),
            Triple("Alex", "likes", "Paris", "c1:1"),
        ])

        self.assertEqual(2, len(graph))
        self.assertEqual("c1:0", graph.triples[0].provenance)
        self.assertEqual(frozenset({"Alex", "Paris"}), graph.nodes)

    def test_merge(self) -> None:
        a = KnowledgeGraph([Triple("a", "r", "b", "x"), Triple("b", "r", "c", "x")])
        b = KnowledgeGraph([Triple("b", "r", "c", "y"), Triple("c", "r", "d", "y")])
        merged = merge(a, b)

        self.assertEqual([("a", "r", "b"), ("b", "r", "c"), ("c", "r", "d")], [triple.key for triple in merged])
        self.assertEqual("x", merged.triples[1].provenance)
        self.assertEqual(a, merge(a, KnowledgeGraph()))

    def test_empty_label(self) -> None:
        with self.assertRaises(ValueError):
            Triple("Alex", " ", "Paris")


class TestExtract(unittest.TestCase):

    def test_split_words(self) -> None:
        self.assertEqual(["Yes", "it's", "on", "August", "24th"], split_words("Yes, it's on “August 24th.”"))

    def test_extract(self) -> None:
        extractor = LexiconExtractor()

        self.assertEqual([("Sam", "booked", "the cabin for the lake trip last night")], extractor.extract(CABIN))
        self.assertEqual(
            [("Aunt Meera", "hosts", "the Thanksgiving Dinner this year")],
            extractor.extract("Aunt Meera hosts the Thanksgiving Dinner this year."),
        )
        self.assertEqual([], extractor.extract("Lovely weather today."))
        self.assertEqual([("Alex", "attends", "Team Meeting")], extractor.extract("Alex attends Team Meeting"))
        self.assertEqual([("Sam", "booked", "the cabin")], extractor.extract("Sam booked the cabin"))
        self.assertEqual([], extractor.extract("Hello!"))
        self.assertEqual([], extractor.extract("Book the cabin tonight."))
        self.assertEqual([], extractor.extract(""))

    def test_custom_lexicon(self) -> None:
        extractor = LexiconExtractor(frozenset({"cabin"}))
        self.assertEqual([("Sam booked the", "cabin", "for the lake trip last night")], extractor.extract(CABIN))

    def test_extract_svo(self) -> None:
        self.assertEqual(
            [Triple("Sam", "booked", "the cabin for the lake trip last night", "c2:2")], extract_svo(CABIN, None, "c2:2"),
        )
        self.assertEqual([], extract_svo("   "))

    def test_candidate_stems(self) -> None:
        self.assertEqual("book", candidate_stems("book")[0])
        self.assertIn("book", candidate_stems("booked"))
        self.assertIn("book", candidate_stems("booking"))
        self.assertIn("plan", candidate_stems("planned"))
        self.assertIn("run", candidate_stems("running"))
        self.assertIn("party", candidate_stems("parties"))
        self.assertIn("make", candidate_stems("making"))
        self.assertIn("host", candidate_stems("hosts"))
        self.assertEqual(["class"], candidate_stems("class"))

    def test_process_extractor(self) -> None:
        script = (
            "import sys\n"
            "words = sys.stdin.read().split()\n"
            "print('\\t'.join((words[0], words[1], ' '.join(words[2:]))))\n"
            "print('junk')\n"
        )
        extractor = ProcessExtractor((sys.executable, "-c", script))

        self.assertEqual(
            [("Sam", "booked", "the cabin for the lake trip last night.")], extractor.extract(CABIN),
        )

    def test_process_extractor_failure(self) -> None:
        extractor = ProcessExtractor((sys.executable, "-c", "import sys; sys.exit(3)"))
        with self.assertLogs("kgrag.kg.extract", "WARNING"):
            self.assertEqual([], extractor.extract(CABIN))

        with self.assertRaises(ValueError):
            ProcessExtractor(())


class TestExport(unittest.TestCase):

    def test_dot(self) -> None:
        self.assertEqual("digraph kg {\n}\n", export_dot(KnowledgeGraph()))

        graph = KnowledgeGraph([Triple("Alex", "said", 'hi "there"')])
        self.assertEqual(
            'digraph kg {\n  "Alex" -> "hi \\"there\\"" [label="said"];\n}\n', export_dot(graph),
        )

    def test_tsv_escape(self) -> None:
        triples = [Triple("a\tb", "r", "line\nbreak", "back\\slash")]
        text = dumps_triples(triples)

        self.assertEqual("a\\tb\tr\tline\\nbreak\tback\\\\slash\n", text)
        self.assertEqual(triples, parse_triples(text))

    def test_tsv_file(self) -> None:
        calendar = load_calendar(os.path.join(DATA, "listing1_calendar.json"))
        triples = calendar_to_triples(calendar)

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "triples.tsv")
            write_triples(triples, path)
            self.assertEqual(triples, read_triples(path))

    def test_tsv_bad_line(self) -> None:
        with self.assertRaises(DataError) as context:
            parse_triples("a\tr\tb\tp\na\tr\n", "triples.tsv")
        self.assertEqual(LineNumber("triples.tsv", 2), context.exception.source)

        with self.assertRaises(DataError):
            parse_triples("a\t\tb\tp\n")


if __name__ == "__main__":
    unittest.main()
