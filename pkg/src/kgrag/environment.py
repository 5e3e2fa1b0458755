#!/usr/bin/env python3

__all__ = (
    "Environment",
)

"""
Settings taken from the process environment, and the backends they select.
"""

import logging
import os
from typing import Dict, Union

from .abc import ConfigError, EmbeddingProvider, LlmClient
from .embed import HashEmbedder, RemoteEmbedder
from .llm import ExtractiveMockClient, HttpLlmClient, PromptTemplate

logger = logging.getLogger("kgrag.environment")


class Environment:
    """
    The kgrag environment. Variables can be overridden in-process, which takes precedence over os.environ.
    """

    EMBED_URL = "KGRAG_EMBED_URL"
    EMBED_TOKEN = "KGRAG_EMBED_TOKEN"
    LLM_URL = "KGRAG_LLM_URL"
    LLM_TOKEN = "KGRAG_LLM_TOKEN"
    LLM_MODEL = "KGRAG_LLM_MODEL"
    LLM_PARAMETERS = "KGRAG_LLM_PARAMETERS"  # Model size label for reports, e.g. "7B"

    _overrides: Dict[str, Union[str, None]] = {}

    # ------------------------------ Variables ------------------------------ #

    @classmethod
    def set(cls, name: str, value: Union[str, None]) -> None:
        """
        Overrides a variable, None hides it.

        :param name: The variable's name.
        :param value: The value to use instead of the process environment's.
        """

        if name in cls._overrides:
            logger.debug("Overriding already overridden variable %s.", name)
        cls._overrides[name] = value

    @classmethod
    def reset(cls) -> None:
        """
        Removes all overrides.
        """

        cls._overrides.clear()

    @classmethod
    def get(cls, name: str, default: Union[str, None] = None) -> Union[str, None]:
        """
        :param name: The variable's name.
        :param default: The value to return if the variable isn't set (or is empty).
        :return: The variable's value.
        """

        if name in cls._overrides:
            value = cls._overrides[name]
        else:
            value = os.environ.get(name)
        return value if value else default

    @classmethod
    def require(cls, name: str, purpose: str) -> str:
        value = cls.get(name)
        if value is None:
            raise ConfigError("%s must be set to use %s." % (name, purpose))
        return value

    # ------------------------------ Backends ------------------------------ #

    @classmethod
    def llm_model(cls, client: LlmClient) -> str:
        """
        :return: The model name to show in reports, KGRAG_LLM_MODEL if set.
        """

        return cls.get(cls.LLM_MODEL, client.model)

    @classmethod
    def llm_parameters(cls) -> str:
        return cls.get(cls.LLM_PARAMETERS, "-")

    @classmethod
    def create_embedder(cls, kind: str = "hash", dimension: int = 256) -> EmbeddingProvider:
        """
        :param kind: "hash" or "remote".
        :param dimension: The hash embedder's dimension, ignored for remote embedders.
        :return: The embedding provider.
        """

        if kind == "hash":
            try:
                return HashEmbedder(dimension)
            except ValueError as error:
                raise ConfigError(str(error))
        if kind == "remote":
            return RemoteEmbedder(
                cls.require(cls.EMBED_URL, "the remote embedder"), cls.get(cls.EMBED_TOKEN),
            )
        raise ConfigError("Unknown embedder %r." % kind)

    @classmethod
    def create_llm(cls, kind: str = "mock", template: PromptTemplate = PromptTemplate.DEFAULT) -> LlmClient:
        """
        :param kind: "mock" or "remote".
        :param template: The template prompts are rendered with, which the mock needs to find the context.
        :return: The generation client.
        """

        if kind == "mock":
            return ExtractiveMockClient(template)
        if kind == "remote":
            return HttpLlmClient(
                cls.require(cls.LLM_URL, "the remote LLM"), cls.get(cls.LLM_TOKEN), cls.get(cls.LLM_MODEL),
            )
        raise ConfigError("Unknown llm %r." % kind)
