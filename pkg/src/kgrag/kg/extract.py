#!/usr/bin/env python3

__all__ = (
    "LexiconExtractor", "ProcessExtractor",
    "split_words", "extract_svo",
)

"""
Subject-verb-object triple extraction. The root verb becomes the edge, the words before it the source and the words
after it the target.
"""

import logging
import string
import subprocess
from typing import FrozenSet, List, Sequence, Tuple, Union

from .graph import Triple
from .lexicon import candidate_stems, default_lexicon
from ..abc import TripleExtractor

logger = logging.getLogger("kgrag.kg.extract")

_PUNCTUATION = string.punctuation + "‘’“”"


def split_words(sentence: str) -> List[str]:
    """
    Splits a sentence on whitespace and strips surrounding punctuation off each word.

    :param sentence: The sentence to split.
    :return: The non-empty words, in order.
    """

    words = []
    for word in sentence.split():
        word = word.strip(_PUNCTUATION)
        if word:
            words.append(word)
    return words


class LexiconExtractor(TripleExtractor):
    """
    Finds the first word that is a known verb (after inflection stripping) and splits the sentence around it. The
    relation label keeps the verb's surface form.
    """

    __slots__ = ("lexicon",)

    def __init__(self, lexicon: Union[FrozenSet[str], None] = None) -> None:
        """
        :param lexicon: The verb base forms, if None, the bundled lexicon is used.
        """

        self.lexicon = default_lexicon() if lexicon is None else lexicon

    def __repr__(self) -> str:
        return "<LexiconExtractor(verbs=%i) at %x>" % (len(self.lexicon), id(self))

    def is_verb(self, word: str) -> bool:
        """
        :param word: The word to check.
        :return: Is the word, or one of its possible stems, in the lexicon?
        """

        return any(stem in self.lexicon for stem in candidate_stems(word.lower()))

    def extract(self, sentence: str) -> List[Tuple[str, str, str]]:
        words = split_words(sentence)
        for index, word in enumerate(words):
            if self.is_verb(word):
                source = " ".join(words[:index])
                target = " ".join(words[index + 1:])
                if source and target:
                    return [(source, word, target)]
                return []
        return []


class ProcessExtractor(TripleExtractor):
    """
    Delegates extraction to an external parser process, for instance a dependency parser. The sentence is written to
    the process's stdin and each "source<TAB>relation<TAB>target" line on its stdout becomes a triple.
    """

    __slots__ = ("command", "timeout")

    def __init__(self, command: Sequence[str], timeout: float = 30.0) -> None:
        """
        :param command: The command line to run, once per sentence.
        :param timeout: Seconds to wait for the process before giving up on the sentence.
        """

        if not command:
            raise ValueError("Extractor command must not be empty.")

        self.command = tuple(command)
        self.timeout = timeout

    def __repr__(self) -> str:
        return "<ProcessExtractor(command=%r) at %x>" % (" ".join(self.command), id(self))

    def extract(self, sentence: str) -> List[Tuple[str, str, str]]:
        try:
            result = subprocess.run(
                self.command, input=sentence, capture_output=True, text=True, timeout=self.timeout, check=False,
            )
        except (OSError, subprocess.SubprocessError) as error:
            logger.warning("Extractor %r failed on %r: %s", self.command[0], sentence, error)
            return []

        if result.returncode != 0:
            logger.warning(
                "Extractor %r exited with %i on %r: %s",
                self.command[0], result.returncode, sentence, result.stderr.strip(),
            )
            return []

        triples = []
        for line in result.stdout.splitlines():
            parts = line.split("\t")
            if len(parts) != 3 or not all(part.strip() for part in parts):
                logger.debug("Skipping extractor output line %r.", line)
                continue
            triples.append((parts[0].strip(), parts[1].strip(), parts[2].strip()))
        return triples


_default_extractor: Union[LexiconExtractor, None] = None


def extract_svo(
        sentence: str, extractor: Union[TripleExtractor, None] = None, provenance: str = "",
) -> List[Triple]:
    """
    Extracts triples from a sentence.

    :param sentence: The sentence to extract from.
    :param extractor: The extractor to use, if None, the lexicon extractor.
    :param provenance: The document ID to attach to the triples.
    :return: The extracted triples, possibly none.
    """

    global _default_extractor

    if not sentence.strip():
        return []
    if extractor is None:
        if _default_extractor is None:
            _default_extractor = LexiconExtractor()
        extractor = _default_extractor

    triples = []
    for source, relation, target in extractor.extract(sentence):
        if source.strip() and relation.strip() and target.strip():
            triples.append(Triple(source, relation, target, provenance))
    return triples
