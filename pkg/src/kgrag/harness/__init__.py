#!/usr/bin/env python3

__all__ = (
    "cli", "report",
    "AnswerRecord", "ModeResult", "EvalReport",
    "run_eval", "emit_report", "load_report", "render_markdown", "render_comparison", "relative_change",
)

"""
Evaluation of both pipeline modes against golden answers, and the command line that drives it.
"""

from . import report
from .report import *
from . import cli
