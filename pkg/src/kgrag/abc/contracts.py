#!/usr/bin/env python3

__all__ = (
    "EmbeddingProvider", "LlmClient", "TripleExtractor",
)

"""
The pluggable contracts: embedding providers, LLM clients and triple extractors.
"""

import typing
from abc import abstractmethod, ABC
from typing import List, Sequence, Tuple

if typing.TYPE_CHECKING:
    from ..embed import EmbeddingVector
    from ..llm import GenerationParams


class EmbeddingProvider(ABC):
    """
    Something that turns text into fixed-dimension unit vectors.
    Implementations must be deterministic and safe for concurrent calls.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """
        :return: A short human-readable name for this provider.
        """

        ...

    @property
    @abstractmethod
    def dimension(self) -> int:
        """
        :return: The dimension of the vectors that this provider produces.
        """

        ...

    @abstractmethod
    def embed_batch(self, texts: Sequence[str]) -> List["EmbeddingVector"]:
        """
        Embeds a batch of texts.

        :param texts: The texts to embed.
        :return: One vector per text, index-aligned with the input.
        """

        ...

    def embed(self, text: str) -> "EmbeddingVector":
        """
        Embeds a single text.

        :param text: The text to embed.
        :return: The vector.
        """

        return self.embed_batch((text,))[0]

    def close(self) -> None:
        """
        Releases any connections this provider holds. It may still be used afterwards.
        """

        ...


class LlmClient(ABC):
    """
    A text generation backend.
    """

    @property
    @abstractmethod
    def model(self) -> str:
        """
        :return: The name of the model behind this client.
        """

        ...

    @abstractmethod
    def generate(self, prompt: str, params: "GenerationParams") -> str:
        """
        Generates an answer for a rendered prompt.

        :param prompt: The prompt, as rendered from a template.
        :param params: The generation parameters.
        :return: The answer text, without any echoed prompt.
        """

        ...

    def close(self) -> None:
        """
        Releases any connections this client holds. It may still be used afterwards.
        """

        ...


class TripleExtractor(ABC):
    """
    Extracts (source, relation, target) label triples from a sentence.
    """

    @abstractmethod
    def extract(self, sentence: str) -> List[Tuple[str, str, str]]:
        """
        :param sentence: The sentence to extract from.
        :return: The extracted label triples, possibly none. Failure to extract is never an error.
        """

        ...
