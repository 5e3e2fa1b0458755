#!/usr/bin/env python3

__all__ = (
    "load_lexicon", "default_lexicon", "candidate_stems",
)

"""
The bundled English verb lexicon.
"""

import logging
import os
import threading
from typing import FrozenSet, List, Union

logger = logging.getLogger("kgrag.kg.lexicon")

_LEXICON_PATH = os.path.join(os.path.dirname(__file__), "verbs.txt")
_VOWELS = "aeiou"

_default: Union[FrozenSet[str], None] = None
_lock = threading.Lock()


def load_lexicon(path: Union[str, None] = None) -> FrozenSet[str]:
    """
    Loads a verb lexicon, one lowercase base form per line, "#" starts a comment.

    :param path: The lexicon file, if None, the bundled lexicon is used.
    :return: The verbs.
    """

    if path is None:
        path = _LEXICON_PATH

    verbs = set()
    with open(path, "r", encoding="utf-8") as stream:
        for line in stream:
            line = line.split("#", 1)[0].strip().lower()
            if line:
                verbs.add(line)

    logger.debug("Loaded %i verb(s) from %r.", len(verbs), path)
    return frozenset(verbs)


def default_lexicon() -> FrozenSet[str]:
    """
    :return: The bundled lexicon, loaded once.
    """

    global _default

    with _lock:
        if _default is None:
            _default = load_lexicon()
        return _default


def candidate_stems(word: str) -> List[str]:
    """
    Strips "-s", "-ed" and "-ing" inflections off a word.

    :param word: The lowercase word.
    :return: The word itself followed by the stems that it might have been inflected from.
    """

    candidates = [word]

    def add(stem: str) -> None:
        if len(stem) >= 2 and not stem in candidates:
            candidates.append(stem)

    def add_undoubled(stem: str) -> None:  # planned -> plan, running -> run
        if len(stem) >= 3 and stem[-1] == stem[-2] and not stem[-1] in _VOWELS:
            add(stem[:-1])

    if word.endswith("ies"):
        add(word[:-3] + "y")
    elif word.endswith("es"):
        add(word[:-2])
        add(word[:-1])
    elif word.endswith("s") and not word.endswith("ss"):
        add(word[:-1])

    if word.endswith("ied"):
        add(word[:-3] + "y")
    elif word.endswith("ed"):
        add(word[:-2])
        add(word[:-1])
        add_undoubled(word[:-2])

    if word.endswith("ing"):
        add(word[:-3])
        add(word[:-3] + "e")
        add_undoubled(word[:-3])

    return candidates
