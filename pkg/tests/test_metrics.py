#!/usr/bin/env python3

import functools
import math
import random
import unittest
from typing import Dict, Sequence, Tuple

from kgrag.abc import EmptyInput, InvalidN
from kgrag.metrics import MetricRow, ScoreTriple, aggregate, bleu, rouge_l, rouge_n, score, tokenize

ALPHABET = ("a", "b", "c", "d", "e")


def _counts(tokens: Sequence[str], n: int) -> Dict[Tuple[str, ...], int]:
    counts: Dict[Tuple[str, ...], int] = {}
    for index in range(len(tokens) - n + 1):
        gram = tuple(tokens[index: index + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def _oracle_overlap(candidate: Sequence[str], reference: Sequence[str], n: int) -> Tuple[int, int, int]:
    candidate_counts = _counts(candidate, n)
    reference_counts = _counts(reference, n)
    overlap = 0
    for gram, count in candidate_counts.items():
        overlap += min(count, reference_counts.get(gram, 0))
    return overlap, sum(candidate_counts.values()), sum(reference_counts.values())


def _oracle_lcs(a: Sequence[str], b: Sequence[str]) -> int:
    @functools.lru_cache(maxsize=None)
    def lcs(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + lcs(i + 1, j + 1)
        return max(lcs(i + 1, j), lcs(i, j + 1))
    return lcs(0, 0)


def _oracle_f1(overlap: int, candidate_total: int, reference_total: int) -> Tuple[float, float, float]:
    precision = overlap / candidate_total if candidate_total else 0.0
    recall = overlap / reference_total if reference_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def _random_pair(rng: random.Random) -> Tuple[Sequence[str], Sequence[str]]:
    return (
        [rng.choice(ALPHABET) for _ in range(rng.randint(0, 12))],
        [rng.choice(ALPHABET) for _ in range(rng.randint(0, 12))],
    )


def _row(qa_id: str, f1: float, bleu1: float = 0.0, latency: float = 0.0) -> MetricRow:
    triple = ScoreTriple(f1, f1, f1)
    return MetricRow(qa_id, triple, triple, triple, bleu1, latency)


class TestTokenize(unittest.TestCase):

    def test_examples(self) -> None:
        self.assertEqual(["team", "meeting", "09", "00"], tokenize("Team Meeting, 09:00!"))
        self.assertEqual([], tokenize(""))
        self.assertEqual([], tokenize(" ...! "))
        self.assertEqual(["raksha", "bandhan", "observed", "all", "day"], tokenize("“Raksha Bandhan,” observed all day."))
        self.assertEqual(["snake", "case"], tokenize("snake_case"))

    def test_case_folding(self) -> None:
        for text in ("Team Meeting on 2024-01-15", "Alex has event X.", "what IS the Event?"):
            self.assertEqual(tokenize(text), tokenize(text.upper()))


class TestRouge(unittest.TestCase):

    def test_examples(self) -> None:
        self.assertEqual(ScoreTriple(1.0, 1.0, 1.0), rouge_n("the cat sat", "the cat sat", 1))
        self.assertEqual(ScoreTriple(1.0, 1.0, 1.0), rouge_n("the cat sat", "the cat sat", 2))
        self.assertEqual(ScoreTriple.ZERO, rouge_n("the cat", "a dog", 1))

        triple = rouge_n("the cat sat", "the cat sat down", 1)
        self.assertEqual(1.0, triple.precision)
        self.assertEqual(0.75, triple.recall)
        self.assertAlmostEqual(6 / 7, triple.f1, places=12)

        triple = rouge_n("the cat sat", "the cat sat down", 2)
        self.assertEqual(1.0, triple.precision)
        self.assertAlmostEqual(2 / 3, triple.recall, places=12)

    def test_clipping(self) -> None:
        triple = rouge_n("the the the", "the cat", 1)
        self.assertAlmostEqual(1 / 3, triple.precision, places=12)
        self.assertEqual(0.5, triple.recall)

    def test_empty(self) -> None:
        self.assertEqual(ScoreTriple.ZERO, rouge_n("", "the cat", 1))
        self.assertEqual(ScoreTriple.ZERO, rouge_n("cat", "the cat", 2))
        self.assertEqual(ScoreTriple.ZERO, rouge_l("", "the cat"))
        self.assertEqual(ScoreTriple.ZERO, rouge_l("", ""))

    def test_invalid_n(self) -> None:
        for n in (0, 3, -1):
            with self.subTest(n=n), self.assertRaises(InvalidN):
                rouge_n("a", "a", n)

    def test_rouge_l(self) -> None:
        self.assertEqual(ScoreTriple(1.0, 1.0, 1.0), rouge_l("the cat sat", "The cat sat."))

        triple = rouge_l("a c b", "a b c")
        self.assertAlmostEqual(2 / 3, triple.precision, places=12)
        self.assertAlmostEqual(2 / 3, triple.recall, places=12)
        self.assertAlmostEqual(2 / 3, triple.f1, places=12)

    def test_symmetry(self) -> None:
        rng = random.Random(7)
        for _ in range(100):
            a, b = (" ".join(tokens) for tokens in _random_pair(rng))
            for n in (1, 2):
                self.assertEqual(rouge_n(a, b, n).precision, rouge_n(b, a, n).recall)
            self.assertEqual(rouge_l(a, b).precision, rouge_l(b, a).recall)

    def test_oracle(self) -> None:
        rng = random.Random(1234)
        for _ in range(200):
            candidate, reference = _random_pair(rng)
            candidate_text = " ".join(candidate)
            reference_text = " ".join(reference)

            for n in (1, 2):
                expected = _oracle_f1(*_oracle_overlap(candidate, reference, n))
                actual = rouge_n(candidate_text, reference_text, n)
                for want, got in zip(expected, (actual.precision, actual.recall, actual.f1)):
                    self.assertAlmostEqual(want, got, delta=1e-9)

            lcs = _oracle_lcs(tuple(candidate), tuple(reference))
            self.assertLessEqual(lcs, min(len(candidate), len(reference)))
            expected = _oracle_f1(lcs, len(candidate), len(reference))
            actual = rouge_l(candidate_text, reference_text)
            for want, got in zip(expected, (actual.precision, actual.recall, actual.f1)):
                self.assertAlmostEqual(want, got, delta=1e-9)

            for triple in (actual, rouge_n(candidate_text, reference_text, 1)):
                self.assertLessEqual(triple.f1, max(triple.precision, triple.recall) + 1e-12)


class TestBleu(unittest.TestCase):

    def test_identical(self) -> None:
        text = "Alex has event Raksha Bandhan on 2024-08-19"
        for max_n in (1, 2, 3, 4):
            self.assertAlmostEqual(1.0, bleu(text, text, max_n), places=12)

    def test_clipped_unigrams(self) -> None:
        # Candidate is longer than the reference, so there's no brevity penalty.
        self.assertAlmostEqual(1 / 3, bleu("the the the", "the cat", 1), places=12)

    def test_brevity_penalty(self) -> None:
        self.assertAlmostEqual(math.exp(1.0 - 4 / 2), bleu("the cat", "the cat sat down", 1), places=12)

    def test_zero(self) -> None:
        self.assertEqual(0.0, bleu("", "the cat", 1))
        self.assertEqual(0.0, bleu("dog", "the cat", 1))
        self.assertEqual(0.0, bleu("cat the", "the cat", 2))

    def test_invalid_n(self) -> None:
        for max_n in (0, 5):
            with self.subTest(max_n=max_n), self.assertRaises(InvalidN):
                bleu("a", "a", max_n)

    def test_oracle(self) -> None:
        rng = random.Random(99)
        for _ in range(100):
            candidate, reference = _random_pair(rng)
            max_n = rng.randint(1, 4)

            c = len(candidate)
            r = len(reference)
            precisions = []
            for n in range(1, max_n + 1):
                overlap, total, _ = _oracle_overlap(candidate, reference, n)
                precisions.append(overlap / total if total else 0.0)
            if not c or not all(precisions):
                expected = 0.0
            else:
                geometric = math.exp(sum(math.log(p) for p in precisions) / max_n)
                expected = min(1.0, (1.0 if c > r else math.exp(1.0 - r / c)) * geometric)

            self.assertAlmostEqual(expected, bleu(" ".join(candidate), " ".join(reference), max_n), delta=1e-9)


class TestAggregate(unittest.TestCase):

    def test_single(self) -> None:
        row = score("q1", "the cat sat", "the cat sat down", 0.25)
        mean = aggregate([row])

        self.assertEqual("MEAN", mean.qa_id)
        self.assertEqual(row.rouge1, mean.rouge1)
        self.assertEqual(row.rougeL, mean.rougeL)
        self.assertEqual(row.bleu1, mean.bleu1)
        self.assertEqual(0.25, mean.latency_seconds)

    def test_mean(self) -> None:
        mean = aggregate([_row("q1", 0.4, 0.2, 1.0), _row("q2", 0.6, 0.4, 3.0)])

        self.assertAlmostEqual(0.5, mean.rouge1.f1, places=12)
        self.assertAlmostEqual(0.3, mean.bleu1, places=12)
        self.assertEqual(2.0, mean.latency_seconds)

    def test_bounds(self) -> None:
        rng = random.Random(5)
        rows = [_row("q%i" % index, rng.random(), rng.random(), rng.random()) for index in range(20)]
        mean = aggregate(rows)

        for column in (lambda row: row.rouge1.f1, lambda row: row.bleu1, lambda row: row.latency_seconds):
            values = [column(row) for row in rows]
            self.assertTrue(min(values) <= column(mean) <= max(values))

    def test_empty(self) -> None:
        with self.assertRaises(EmptyInput):
            aggregate([])


class TestRows(unittest.TestCase):

    def test_score_triple(self) -> None:
        self.assertEqual(ScoreTriple.ZERO, ScoreTriple.of(0.0, 0.0))
        self.assertAlmostEqual(0.48, ScoreTriple.of(0.4, 0.6).f1, places=12)
        with self.assertRaises(ValueError):
            ScoreTriple(1.5, 0.0, 0.0)

    def test_dict(self) -> None:
        row = score("q8", "Alex has event Raksha Bandhan", "The event is Raksha Bandhan", 0.5)

        self.assertNotIn("note", row.to_dict())
        self.assertEqual(row, MetricRow.from_dict(row.to_dict()))

        failed = score("q9", "", "The event is Raksha Bandhan", 0.0, "generate stage failed")
        self.assertEqual("generate stage failed", failed.to_dict()["note"])
        self.assertEqual(ScoreTriple.ZERO, failed.rouge1)


if __name__ == "__main__":
    unittest.main()
