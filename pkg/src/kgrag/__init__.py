#!/usr/bin/env python3

__all__ = (
    "abc", "dataset", "embed", "environment", "fixtures", "harness", "index", "kg", "llm", "metrics", "pipeline",
    "Environment",
)

"""
kgrag - Personalized question answering with retrieval over a personal knowledge graph.
"""

__version__ = "0.1.0"

# Expose API
from . import abc, dataset, embed, environment, fixtures, index, kg, llm, metrics, pipeline
from .abc import *
from .dataset import *
from .embed import *
from .environment import *
from .index import *
from .kg import *
from .llm import *
from .metrics import *
from .pipeline import *
from . import harness
from .harness import *
