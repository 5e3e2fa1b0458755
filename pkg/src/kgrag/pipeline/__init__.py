#!/usr/bin/env python3

__all__ = (
    "config", "corpus", "run",
    "Mode", "PipelineConfig",
    "baseline_documents", "build_baseline_corpus", "build_kg_corpus",
    "Answer", "Pipeline", "answer",
)

"""
The two compared RetrievalQA configurations: baseline (raw text) and kg (linearized triples).
"""

from . import config, corpus, run
from .config import *
from .corpus import *
from .run import *
