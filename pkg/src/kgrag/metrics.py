#!/usr/bin/env python3

__all__ = (
    "ScoreTriple", "MetricRow",
    "tokenize", "ngrams", "rouge_n", "rouge_l", "bleu", "aggregate", "score",
)

"""
ROUGE and BLEU scoring of generated answers against golden answers.
"""

import math
import re
from collections import Counter
from typing import Any, Dict, List, Sequence, Tuple, Union

from .abc import EmptyInput, InvalidN

MEAN_ID = "MEAN"

_TOKEN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> List[str]:
    """
    Lowercases text and splits it on every run of non-alphanumeric characters.
    """

    return _TOKEN.findall(text.lower())


def ngrams(tokens: Sequence[str], n: int) -> "Counter[Tuple[str, ...]]":
    """
    :return: The counts of each n-gram in some tokens.
    """

    return Counter(tuple(tokens[index: index + n]) for index in range(len(tokens) - n + 1))


class ScoreTriple:
    """
    Precision, recall and F1, all in [0, 1].
    """

    __slots__ = ("precision", "recall", "f1")

    ZERO: "ScoreTriple"

    @classmethod
    def of(cls, precision: float, recall: float) -> "ScoreTriple":
        """
        :return: The triple for a precision and recall, with F1 as their harmonic mean (0 if both are 0).
        """

        if precision + recall > 0.0:
            return cls(precision, recall, 2.0 * precision * recall / (precision + recall))
        return cls(precision, recall, 0.0)

    @classmethod
    def ratio(cls, overlap: int, candidate_total: int, reference_total: int) -> "ScoreTriple":
        """
        :return: The triple for an overlap count, where a zero total makes that component 0.
        """

        return cls.of(
            overlap / candidate_total if candidate_total else 0.0,
            overlap / reference_total if reference_total else 0.0,
        )

    def __init__(self, precision: float, recall: float, f1: float) -> None:
        for name, value in (("precision", precision), ("recall", recall), ("f1", f1)):
            if not 0.0 <= value <= 1.0:
                raise ValueError("%s %r is not in [0, 1]." % (name, value))

        self.precision = precision
        self.recall = recall
        self.f1 = f1

    def __repr__(self) -> str:
        return "<ScoreTriple(precision=%.3f, recall=%.3f, f1=%.3f) at %x>" % (
            self.precision, self.recall, self.f1, id(self),
        )

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is ScoreTriple and
            other.precision == self.precision and
            other.recall == self.recall and
            other.f1 == self.f1
        )

    def __hash__(self) -> int:
        return hash((self.precision, self.recall, self.f1))

    def to_dict(self) -> Dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScoreTriple":
        return cls(float(data["precision"]), float(data["recall"]), float(data["f1"]))


ScoreTriple.ZERO = ScoreTriple(0.0, 0.0, 0.0)


# ------------------------------ Metrics ------------------------------ #

def rouge_n(candidate: str, reference: str, n: int = 1) -> ScoreTriple:
    """
    ROUGE-N over clipped n-gram overlap.

    :param candidate: The generated answer.
    :param reference: The golden answer.
    :param n: The n-gram order, 1 or 2.
    :return: The precision, recall and F1.
    """

    if not n in (1, 2):
        raise InvalidN("ROUGE-N is supported for n = 1 or 2, not %r." % n)

    candidate_counts = ngrams(tokenize(candidate), n)
    reference_counts = ngrams(tokenize(reference), n)
    overlap = sum((candidate_counts & reference_counts).values())
    return ScoreTriple.ratio(overlap, sum(candidate_counts.values()), sum(reference_counts.values()))


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for index, other in enumerate(b):
            if token == other:
                current.append(previous[index] + 1)
            else:
                current.append(max(previous[index + 1], current[index]))
        previous = current
    return previous[-1]


def rouge_l(candidate: str, reference: str) -> ScoreTriple:
    """
    ROUGE-L over the longest common subsequence of the whole token sequences.
    """

    candidate_tokens = tokenize(candidate)
    reference_tokens = tokenize(reference)
    return ScoreTriple.ratio(
        _lcs_length(candidate_tokens, reference_tokens), len(candidate_tokens), len(reference_tokens),
    )


def bleu(candidate: str, reference: str, max_n: int = 1) -> float:
    """
    Unsmoothed BLEU against a single reference, with uniform weights.

    :param candidate: The generated answer.
    :param reference: The golden answer.
    :param max_n: The highest n-gram order, 1 to 4.
    :return: The geometric mean of the clipped precisions times the brevity penalty. Any zero precision (or an
             empty candidate) gives 0.
    """

    if not 1 <= max_n <= 4:
        raise InvalidN("BLEU is supported for max_n in 1..4, not %r." % max_n)

    candidate_tokens = tokenize(candidate)
    reference_tokens = tokenize(reference)
    c = len(candidate_tokens)
    r = len(reference_tokens)
    if not c:
        return 0.0

    log_precision = 0.0
    for n in range(1, max_n + 1):
        candidate_counts = ngrams(candidate_tokens, n)
        total = sum(candidate_counts.values())
        clipped = sum((candidate_counts & ngrams(reference_tokens, n)).values())
        if not total or not clipped:
            return 0.0
        log_precision += math.log(clipped / total) / max_n

    brevity_penalty = 1.0 if c > r else math.exp(1.0 - r / c)
    return min(1.0, brevity_penalty * math.exp(log_precision))


# ------------------------------ Rows ------------------------------ #

class MetricRow:
    """
    The scores for a single answer (or the means over many, see `aggregate`).
    """

    __slots__ = ("qa_id", "rouge1", "rouge2", "rougeL", "bleu1", "latency_seconds", "note")

    def __init__(
            self,
            qa_id: str,
            rouge1: ScoreTriple,
            rouge2: ScoreTriple,
            rougeL: ScoreTriple,
            bleu1: float,
            latency_seconds: float,
            note: Union[str, None] = None,
    ) -> None:
        """
        :param qa_id: The ID of the question that was answered.
        :param note: Why the answer was scored zero, if it failed.
        """

        if not 0.0 <= bleu1 <= 1.0:
            raise ValueError("BLEU-1 %r is not in [0, 1]." % bleu1)
        if latency_seconds < 0.0:
            raise ValueError("Negative latency %r." % latency_seconds)

        self.qa_id = qa_id
        self.rouge1 = rouge1
        self.rouge2 = rouge2
        self.rougeL = rougeL
        self.bleu1 = bleu1
        self.latency_seconds = latency_seconds
        self.note = note

    def __repr__(self) -> str:
        return "<MetricRow(qa_id=%r, rouge1=%.3f, bleu1=%.3f, latency_seconds=%.3f) at %x>" % (
            self.qa_id, self.rouge1.f1, self.bleu1, self.latency_seconds, id(self),
        )

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is MetricRow and
            other.qa_id == self.qa_id and
            other.rouge1 == self.rouge1 and
            other.rouge2 == self.rouge2 and
            other.rougeL == self.rougeL and
            other.bleu1 == self.bleu1 and
            other.latency_seconds == self.latency_seconds and
            other.note == self.note
        )

    def __hash__(self) -> int:
        return hash((self.qa_id, self.rouge1, self.rouge2, self.rougeL, self.bleu1))

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "qa_id": self.qa_id,
            "rouge1": self.rouge1.to_dict(),
            "rouge2": self.rouge2.to_dict(),
            "rougeL": self.rougeL.to_dict(),
            "bleu1": self.bleu1,
            "latency_seconds": self.latency_seconds,
        }
        if self.note is not None:
            data["note"] = self.note
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricRow":
        return cls(
            data["qa_id"],
            ScoreTriple.from_dict(data["rouge1"]),
            ScoreTriple.from_dict(data["rouge2"]),
            ScoreTriple.from_dict(data["rougeL"]),
            float(data["bleu1"]),
            float(data["latency_seconds"]),
            data.get("note"),
        )


def score(
        qa_id: str, candidate: str, reference: str, latency_seconds: float, note: Union[str, None] = None,
) -> MetricRow:
    """
    Scores a generated answer against its golden answer with every metric.
    """

    return MetricRow(
        qa_id,
        rouge_n(candidate, reference, 1),
        rouge_n(candidate, reference, 2),
        rouge_l(candidate, reference),
        bleu(candidate, reference, 1),
        latency_seconds,
        note,
    )


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _mean_triple(triples: Sequence[ScoreTriple]) -> ScoreTriple:
    # F1 is the mean of the F1s, not recomputed from the mean precision and recall.
    return ScoreTriple(
        _mean([triple.precision for triple in triples]),
        _mean([triple.recall for triple in triples]),
        _mean([triple.f1 for triple in triples]),
    )


def aggregate(rows: Sequence[MetricRow]) -> MetricRow:
    """
    :param rows: The rows to aggregate, at least one.
    :return: A row of the arithmetic means of every field, with the qa_id "MEAN".
    """

    if not rows:
        raise EmptyInput("Can't aggregate zero metric rows.")

    return MetricRow(
        MEAN_ID,
        _mean_triple([row.rouge1 for row in rows]),
        _mean_triple([row.rouge2 for row in rows]),
        _mean_triple([row.rougeL for row in rows]),
        _mean([row.bleu1 for row in rows]),
        _mean([row.latency_seconds for row in rows]),
    )
