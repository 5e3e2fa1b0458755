#!/usr/bin/env python3

__all__ = (
    "Mode", "PipelineConfig",
)

"""
Pipeline configuration, loadable from TOML or JSON files:

    mode = "kg"
    k = 3
    max_chars = 512
    overlap_chars = 64
    embedder = "hash"
    llm = "mock"

    [params]
    max_tokens = 128
    temperature = 0.0
"""

import json
import logging
import os
import sys
from enum import Enum
from typing import Any, Dict, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..abc import ConfigError
from ..index.chunk import MIN_MAX_CHARS
from ..llm import GenerationParams, PromptTemplate

logger = logging.getLogger("kgrag.pipeline.config")

EMBEDDERS = ("hash", "remote")
LLMS = ("mock", "remote")


class Mode(Enum):
    """
    Which corpus retrieval runs over.
    """

    BASELINE = "baseline"  # Raw calendar and conversation text
    KG = "kg"  # Linearized knowledge graph triples

    @property
    def title(self) -> str:
        """
        :return: The mode's name in report tables.
        """

        return "Baseline" if self is Mode.BASELINE else "Our Approach"


def _integer(data: Dict[str, Any], key: str, minimum: int) -> Union[int, None]:
    value = data.get(key)
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError("%r must be an integer >= %i, got %r." % (key, minimum, value))
    return value


class PipelineConfig:
    """
    Everything that decides how a query is answered.
    """

    __slots__ = (
        "mode", "k", "template", "params", "max_chars", "overlap_chars", "embedder", "llm", "dimension", "in_flight",
    )

    _KEYS = (
        "mode", "k", "template", "params", "max_chars", "overlap_chars", "embedder", "llm", "dimension", "in_flight",
    )
    _PARAMS_KEYS = ("max_tokens", "temperature", "repetition_penalty", "seed")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PipelineConfig":
        """
        Creates a config from a mapping of field names, missing fields take their defaults.

        :param data: The mapping, as decoded from a config file.
        :return: The config.
        """

        if not isinstance(data, dict):
            raise ConfigError("Expected a table of settings.")
        for key in data:
            if not key in cls._KEYS:
                raise ConfigError("Unknown config key %r." % key)

        kwargs: Dict[str, Any] = {}
        if "mode" in data:
            try:
                kwargs["mode"] = Mode(data["mode"])
            except ValueError:
                raise ConfigError("Unknown mode %r, expected 'baseline' or 'kg'." % (data["mode"],))
        for key, minimum in (("k", 1), ("max_chars", MIN_MAX_CHARS), ("overlap_chars", 0), ("dimension", 1), ("in_flight", 1)):
            value = _integer(data, key, minimum)
            if value is not None:
                kwargs[key] = value
        for key in ("template", "embedder", "llm"):
            if key in data:
                if not isinstance(data[key], str):
                    raise ConfigError("%r must be a string." % key)
                kwargs[key] = data[key]

        if "params" in data:
            params = data["params"]
            if not isinstance(params, dict):
                raise ConfigError("'params' must be a table.")
            for key in params:
                if not key in cls._PARAMS_KEYS:
                    raise ConfigError("Unknown params key %r." % key)
            try:
                kwargs["params"] = GenerationParams(**params)
            except (TypeError, ValueError) as error:
                raise ConfigError("Invalid params: %s" % error)

        return cls(**kwargs)

    @classmethod
    def load(cls, path: Union[str, "os.PathLike[str]"]) -> "PipelineConfig":
        """
        Loads a config file, TOML if it ends in ".toml", otherwise JSON.

        :param path: The config file.
        :return: The config.
        """

        path = os.fspath(path)
        try:
            with open(path, "rb") as stream:
                data = stream.read()
        except OSError as error:
            raise ConfigError("Couldn't read config %r: %s" % (path, error))

        try:
            if path.endswith(".toml"):
                decoded = tomllib.loads(data.decode("utf-8"))
            else:
                decoded = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as error:  # TOMLDecodeError and JSONDecodeError are ValueErrors
            raise ConfigError("Couldn't parse config %r: %s" % (path, error))

        config = cls.from_dict(decoded)
        logger.debug("Loaded config %r: %r", path, config)
        return config

    def __init__(
            self,
            mode: Mode = Mode.KG,
            k: int = 3,
            template: Union[PromptTemplate, str] = PromptTemplate.DEFAULT,
            params: Union[GenerationParams, None] = None,
            max_chars: int = 512,
            overlap_chars: int = 64,
            embedder: str = "hash",
            llm: str = "mock",
            dimension: int = 256,
            in_flight: int = 4,
    ) -> None:
        """
        :param mode: The corpus to retrieve from.
        :param k: How many chunks to retrieve per query.
        :param template: The prompt template.
        :param params: The generation parameters, if None, the defaults.
        :param max_chars: The chunk window size.
        :param overlap_chars: The chunk window overlap.
        :param embedder: "hash" or "remote".
        :param llm: "mock" or "remote".
        :param dimension: The hash embedder's dimension.
        :param in_flight: How many questions may be answered concurrently.
        """

        if not isinstance(template, PromptTemplate):
            try:
                template = PromptTemplate(template)
            except ValueError as error:
                raise ConfigError(str(error))
        if k < 1:
            raise ConfigError("k must be positive, got %i." % k)
        if max_chars < MIN_MAX_CHARS or not 0 <= overlap_chars < max_chars:
            raise ConfigError(
                "Chunking needs max_chars >= %i and 0 <= overlap_chars < max_chars, got %i and %i." % (
                    MIN_MAX_CHARS, max_chars, overlap_chars,
                ),
            )
        if not embedder in EMBEDDERS:
            raise ConfigError("Unknown embedder %r, expected one of %s." % (embedder, ", ".join(EMBEDDERS)))
        if not llm in LLMS:
            raise ConfigError("Unknown llm %r, expected one of %s." % (llm, ", ".join(LLMS)))
        if dimension < 1 or in_flight < 1:
            raise ConfigError("dimension and in_flight must be positive.")

        self.mode = mode
        self.k = k
        self.template = template
        self.params = GenerationParams() if params is None else params
        self.max_chars = max_chars
        self.overlap_chars = overlap_chars
        self.embedder = embedder
        self.llm = llm
        self.dimension = dimension
        self.in_flight = in_flight

    def __repr__(self) -> str:
        return "<PipelineConfig(mode=%s, k=%i, embedder=%r, llm=%r) at %x>" % (
            self.mode.value, self.k, self.embedder, self.llm, id(self),
        )

    def __eq__(self, other: Any) -> bool:
        if other is self:
            return True
        return other.__class__ is PipelineConfig and other.to_dict() == self.to_dict()

    def __hash__(self) -> int:
        return hash((self.mode, self.k, self.template, self.params))

    def to_dict(self) -> Dict[str, Any]:
        """
        :return: The config as a mapping that `from_dict` accepts.
        """

        return {
            "mode": self.mode.value,
            "k": self.k,
            "template": self.template.template,
            "params": self.params.to_dict(),
            "max_chars": self.max_chars,
            "overlap_chars": self.overlap_chars,
            "embedder": self.embedder,
            "llm": self.llm,
            "dimension": self.dimension,
            "in_flight": self.in_flight,
        }

    def replace(self, **changes: Any) -> "PipelineConfig":
        """
        :param changes: Fields to change, None values are ignored.
        :return: A copy of this config with some fields changed.
        """

        fields = {key: getattr(self, key) for key in PipelineConfig._KEYS}
        for key, value in changes.items():
            if not key in fields:
                raise ConfigError("Unknown config key %r." % key)
            if value is not None:
                fields[key] = value
        return PipelineConfig(**fields)
