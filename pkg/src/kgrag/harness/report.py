#!/usr/bin/env python3

__all__ = (
    "AnswerRecord", "ModeResult", "EvalReport",
    "run_eval", "emit_report", "load_report", "render_markdown", "render_comparison", "relative_change",
)

"""
Evaluation runs and their reports.
"""

import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from frozendict import frozendict

from ..abc import (
    EmbeddingProvider, EmptyInput, IoError, LlmClient, PipelineError, QuestionError, SchemaViolation, TripleExtractor,
)
from ..dataset import JsonPointer, QAPair, load_calendar, load_conversations, load_qa_pairs
from ..dataset._file import parse_json, read_text
from ..environment import Environment
from ..metrics import MetricRow, ScoreTriple, aggregate, score
from ..pipeline import Mode, Pipeline, PipelineConfig
from ..pipeline.run import Clock

logger = logging.getLogger("kgrag.harness.report")

JSON_NAME = "report.json"
MARKDOWN_NAME = "report.md"


class AnswerRecord:
    """
    What was asked, what was expected and what was answered.
    """

    __slots__ = ("qa_id", "question", "golden_answer", "answer", "retrieved")

    def __init__(
            self, qa_id: str, question: str, golden_answer: str, answer: str, retrieved: Sequence[Tuple[str, float]],
    ) -> None:
        self.qa_id = qa_id
        self.question = question
        self.golden_answer = golden_answer
        self.answer = answer
        self.retrieved = tuple((chunk_id, float(score_)) for chunk_id, score_ in retrieved)

    def __repr__(self) -> str:
        return "<AnswerRecord(qa_id=%r, answer=%r) at %x>" % (self.qa_id, self.answer, id(self))

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is AnswerRecord and
            other.qa_id == self.qa_id and
            other.question == self.question and
            other.golden_answer == self.golden_answer and
            other.answer == self.answer and
            other.retrieved == self.retrieved
        )

    def __hash__(self) -> int:
        return hash((self.qa_id, self.answer))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "qa_id": self.qa_id,
            "question": self.question,
            "golden_answer": self.golden_answer,
            "answer": self.answer,
            "retrieved": [[chunk_id, score_] for chunk_id, score_ in self.retrieved],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnswerRecord":
        return cls(
            data["qa_id"], data["question"], data["golden_answer"], data["answer"],
            [(chunk_id, score_) for chunk_id, score_ in data["retrieved"]],
        )


class ModeResult:
    """
    Every question's scores in one mode, ordered by question ID, and their means.
    """

    __slots__ = ("mode", "rows", "answers", "mean")

    def __init__(self, mode: Mode, rows: Iterable[MetricRow], answers: Iterable[AnswerRecord]) -> None:
        self.mode = mode
        self.rows = tuple(sorted(rows, key=lambda row: row.qa_id))
        self.answers = tuple(sorted(answers, key=lambda record: record.qa_id))
        self.mean = aggregate(self.rows)

    def __repr__(self) -> str:
        return "<ModeResult(mode=%s, rows=%i) at %x>" % (self.mode.value, len(self.rows), id(self))

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is ModeResult and
            other.mode == self.mode and
            other.rows == self.rows and
            other.answers == self.answers and
            other.mean == self.mean
        )

    def __hash__(self) -> int:
        return hash((self.mode, self.rows))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "mean": self.mean.to_dict(),
            "answers": [record.to_dict() for record in self.answers],
        }


class EvalReport:
    """
    The result of an evaluation run: a config snapshot and the per-mode results.
    """

    __slots__ = ("config", "llm_model", "llm_parameters", "results")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EvalReport":
        results = []
        for mode, result in data["modes"].items():
            mode_result = ModeResult(
                Mode(mode),
                (MetricRow.from_dict(row) for row in result["rows"]),
                (AnswerRecord.from_dict(record) for record in result["answers"]),
            )
            if mode_result.mean != MetricRow.from_dict(result["mean"]):
                raise ValueError("mean row of %s doesn't match its rows" % mode)
            results.append(mode_result)
        return cls(data["config"], data["llm_model"], data["llm_parameters"], results)

    def __init__(
            self, config: Mapping[str, Any], llm_model: str, llm_parameters: str, results: Iterable[ModeResult],
    ) -> None:
        """
        :param config: The config snapshot, as `PipelineConfig.to_dict` gives it.
        :param llm_model: The name of the model that generated the answers.
        :param llm_parameters: The model's size label.
        :param results: The per-mode results.
        """

        self.config = dict(config)
        self.llm_model = llm_model
        self.llm_parameters = llm_parameters
        self.results: frozendict[Mode, ModeResult] = frozendict(
            (result.mode, result) for result in sorted(results, key=lambda result: list(Mode).index(result.mode))
        )

    def __repr__(self) -> str:
        return "<EvalReport(llm_model=%r, modes=%s) at %x>" % (
            self.llm_model, ",".join(mode.value for mode in self.results), id(self),
        )

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return (
            other.__class__ is EvalReport and
            other.config == self.config and
            other.llm_model == self.llm_model and
            other.llm_parameters == self.llm_parameters and
            other.results == self.results
        )

    def __hash__(self) -> int:
        return hash((self.llm_model, self.results))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "llm_model": self.llm_model,
            "llm_parameters": self.llm_parameters,
            "modes": {mode.value: result.to_dict() for mode, result in self.results.items()},
        }


# ------------------------------ Running ------------------------------ #

def _evaluate(pipeline: Pipeline, pair: QAPair, clock: Clock) -> Tuple[MetricRow, AnswerRecord]:
    try:
        answer = pipeline.answer(pair.question, clock)
    except PipelineError as error:
        logger.warning("Question %r failed in %s mode: %s", pair.id, pipeline.config.mode.value, error)
        row = MetricRow(pair.id, ScoreTriple.ZERO, ScoreTriple.ZERO, ScoreTriple.ZERO, 0.0, 0.0, str(error))
        return row, AnswerRecord(pair.id, pair.question, pair.golden_answer, "", ())
    except Exception as error:
        raise QuestionError(pair.id, error) from error

    row = score(pair.id, answer.text, pair.golden_answer, answer.latency_seconds)
    return row, AnswerRecord(pair.id, pair.question, pair.golden_answer, answer.text, answer.retrieved)


def run_eval(
        config: PipelineConfig,
        calendar_path: Union[str, "os.PathLike[str]"],
        conversations_path: Union[str, "os.PathLike[str]"],
        qa_path: Union[str, "os.PathLike[str]"],
        modes: Sequence[Mode] = (Mode.BASELINE, Mode.KG),
        provider: Union[EmbeddingProvider, None] = None,
        client: Union[LlmClient, None] = None,
        extractor: Union[TripleExtractor, None] = None,
        clock: Clock = time.perf_counter,
) -> EvalReport:
    """
    Answers and scores every question in every mode. Each mode gets its own index, built once.

    :param config: The config, its mode is ignored in favour of `modes`.
    :param calendar_path: The calendar export, with exactly one calendar.
    :param conversations_path: The conversations JSONL file.
    :param qa_path: The QA pairs file, with at least one pair.
    :param modes: The modes to evaluate.
    :param provider: The embedding provider, if None, the one the config names, closed once the run is done.
    :param client: The generation backend, if None, the one the config names, closed once the run is done.
    :param extractor: The triple extractor for kg mode, if None, the lexicon extractor.
    :param clock: The clock latencies are measured with.
    :return: The report.
    """

    calendar = load_calendar(calendar_path)
    messages = load_conversations(conversations_path)
    pairs = load_qa_pairs(qa_path)
    if not pairs:
        raise EmptyInput("No QA pairs in %r." % os.fspath(qa_path))

    owned: List[Union[EmbeddingProvider, LlmClient]] = []
    if provider is None:
        provider = Environment.create_embedder(config.embedder, config.dimension)
        owned.append(provider)
    if client is None:
        client = Environment.create_llm(config.llm, config.template)
        owned.append(client)

    start = time.perf_counter_ns()
    try:
        pipelines = [
            Pipeline.build(config.replace(mode=mode), calendar, messages, provider, client, extractor) for mode in modes
        ]

        with ThreadPoolExecutor(max_workers=config.in_flight) as executor:
            futures = [
                (pipeline.config.mode, executor.submit(_evaluate, pipeline, pair, clock))
                for pipeline in pipelines for pair in pairs
            ]
            outcomes: Dict[Mode, List[Tuple[MetricRow, AnswerRecord]]] = {mode: [] for mode in modes}
            for mode, future in futures:
                outcomes[mode].append(future.result())
    finally:
        for backend in owned:
            backend.close()

    results = [
        ModeResult(mode, (row for row, _ in outcomes[mode]), (record for _, record in outcomes[mode]))
        for mode in modes
    ]
    logger.debug(
        "Evaluated %i question(s) in %i mode(s) in %.1fms.",
        len(pairs), len(modes), (time.perf_counter_ns() - start) / 1_000_000,
    )
    return EvalReport(config.to_dict(), Environment.llm_model(client), Environment.llm_parameters(), results)


# ------------------------------ Emitting ------------------------------ #

_SCORES = (("ROUGE-1", "rouge1"), ("ROUGE-2", "rouge2"), ("ROUGE-L", "rougeL"))
_COMPARED = ("rouge1", "rouge2", "rougeL", "bleu1")


def relative_change(value: float, baseline: float) -> Union[float, None]:
    """
    :return: How much `value` gained over `baseline`, in percent, or None if the baseline is zero.
    """

    if baseline == 0.0:
        return None
    return (value - baseline) / baseline * 100.0


def _f1(row: MetricRow, attribute: str) -> float:
    return row.bleu1 if attribute == "bleu1" else getattr(row, attribute).f1


def _change(report: EvalReport, mode: Mode, attribute: str) -> str:
    baseline = report.results.get(Mode.BASELINE)
    kg = report.results.get(Mode.KG)
    if mode is not Mode.KG or baseline is None or kg is None:
        return "-"
    change = relative_change(_f1(kg.mean, attribute), _f1(baseline.mean, attribute))
    return "-" if change is None else "%+.2f%%" % change


def _cell(value: Any) -> str:
    return str(value).replace("|", "\\|").replace("\n", " ")


def _table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> List[str]:
    lines = [
        "| %s |" % " | ".join(header),
        "| %s |" % " | ".join("---" for _ in header),
    ]
    lines.extend("| %s |" % " | ".join(map(_cell, row)) for row in rows)
    lines.append("")
    return lines


def _latencies(report: EvalReport) -> List[str]:
    latencies = []
    for mode in Mode:
        result = report.results.get(mode)
        latencies.append("-" if result is None else "%.3f" % result.mean.latency_seconds)
    return latencies


def render_markdown(report: EvalReport) -> str:
    """
    Renders a report as markdown tables: P/R/F1 per ROUGE variant, BLEU-1, latency and per question scores.
    The "change" columns give our approach's gain over the baseline, in percent.
    """

    lines = ["# Evaluation report", ""]

    for title, attribute in _SCORES:
        lines.extend(("## %s" % title, ""))
        lines.extend(_table(("Mode", "Precision", "Recall", "F1", "F1 change"), (
            (
                mode.title,
                "%.3f" % getattr(result.mean, attribute).precision,
                "%.3f" % getattr(result.mean, attribute).recall,
                "%.3f" % getattr(result.mean, attribute).f1,
                _change(report, mode, attribute),
            ) for mode, result in report.results.items()
        )))

    lines.extend(("## BLEU-1", ""))
    lines.extend(_table(("Mode", "BLEU-1", "Change"), (
        (mode.title, "%.3f" % result.mean.bleu1, _change(report, mode, "bleu1"))
        for mode, result in report.results.items()
    )))

    lines.extend(("## Execution time (seconds)", ""))
    lines.extend(_table(("LLM Model", "Parameters") + tuple(mode.title for mode in Mode), (
        (report.llm_model, report.llm_parameters, *_latencies(report)),
    )))

    lines.extend(("## Per question", ""))
    lines.extend(_table(
        ("ID", "Mode", "ROUGE-1 F1", "ROUGE-2 F1", "ROUGE-L F1", "BLEU-1", "Latency (s)", "Answer"),
        (
            (
                row.qa_id, mode.title,
                "%.3f" % row.rouge1.f1, "%.3f" % row.rouge2.f1, "%.3f" % row.rougeL.f1, "%.3f" % row.bleu1,
                "%.3f" % row.latency_seconds,
                record.answer if row.note is None else "(failed: %s)" % row.note,
            ) for mode, result in report.results.items() for row, record in zip(result.rows, result.answers)
        ),
    ))

    return "\n".join(lines)


def render_comparison(reports: Sequence[EvalReport]) -> str:
    """
    Renders several reports, typically one per model size, side by side.

    :param reports: The reports, in the order their rows should appear.
    :return: Markdown tables of the latencies, the mean scores and our approach's gains over the baseline.
    """

    if not reports:
        raise EmptyInput("No reports to compare.")

    lines = ["# Model comparison", ""]

    lines.extend(("## Execution time (seconds)", ""))
    lines.extend(_table(("LLM Model", "Parameters") + tuple(mode.title for mode in Mode), (
        (report.llm_model, report.llm_parameters, *_latencies(report)) for report in reports
    )))

    lines.extend(("## Scores", ""))
    lines.extend(_table(
        ("LLM Model", "Parameters", "Mode") + tuple("%s F1" % title for title, _ in _SCORES) + ("BLEU-1",),
        (
            (
                report.llm_model, report.llm_parameters, mode.title,
                *("%.3f" % _f1(result.mean, attribute) for _, attribute in _SCORES),
                "%.3f" % result.mean.bleu1,
            ) for report in reports for mode, result in report.results.items()
        ),
    ))

    lines.extend(("## Change over baseline", ""))
    lines.extend(_table(
        ("LLM Model", "Parameters") + tuple("%s F1" % title for title, _ in _SCORES) + ("BLEU-1",),
        (
            (
                report.llm_model, report.llm_parameters,
                *(_change(report, Mode.KG, attribute) for attribute in _COMPARED),
            ) for report in reports
        ),
    ))

    return "\n".join(lines)


def emit_report(report: EvalReport, directory: Union[str, "os.PathLike[str]"]) -> Tuple[str, str]:
    """
    Writes report.json and report.md to a directory, creating it if needed.

    :return: The paths of the two files.
    """

    directory = os.fspath(directory)
    json_path = os.path.join(directory, JSON_NAME)
    markdown_path = os.path.join(directory, MARKDOWN_NAME)

    path = directory
    try:
        os.makedirs(directory, exist_ok=True)
        path = json_path
        with open(json_path, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n")
        path = markdown_path
        with open(markdown_path, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(render_markdown(report))
    except OSError as error:
        raise IoError(path, error)

    logger.debug("Wrote report to %r.", directory)
    return json_path, markdown_path


def load_report(path: Union[str, "os.PathLike[str]"]) -> EvalReport:
    """
    Loads a report.json written by `emit_report`.
    """

    path = os.fspath(path)
    data = parse_json(read_text(path), path)
    try:
        return EvalReport.from_dict(data)
    except (KeyError, TypeError, ValueError, AttributeError) as error:
        raise SchemaViolation(JsonPointer(path), "not a report: %s" % error)
